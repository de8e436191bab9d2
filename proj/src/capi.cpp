#include "frankmin.h"

#include <cstring>
#include <exception>
#include <string>

#include <json.hpp>

#include "frankmin/core.hpp"
#include "frankmin/field3d.hpp"
#include "frankmin/profile1d.hpp"
#include "frankmin/stability.hpp"
#include "frankmin/verify.hpp"

using namespace frankmin;

struct frankmin_profile {
  profile1d::EulerProfile profile;
  ElasticConstants k;
  Chirality t;
};

struct frankmin_grid {
  field3d::DirectorGrid grid;
};

struct frankmin_report {
  field3d::RelaxationReport report;
};

namespace {

thread_local std::string g_error;

int set_error(int code, const std::string& msg) {
  g_error = msg;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const profile1d::SolverError& e) {
    return set_error(FRANKMIN_ERR_SOLVER, e.what());
  } catch (const std::domain_error& e) {
    return set_error(FRANKMIN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(FRANKMIN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return set_error(FRANKMIN_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(FRANKMIN_ERR_INTERNAL, e.what());
  }
}

ElasticConstants make_constants(double k1, double k2, double k3, double k4,
                                int one_constant) {
  return one_constant ? ElasticConstants::isotropic(k1)
                      : ElasticConstants::general(k1, k2, k3, k4);
}

int require(bool ok, const char* what) {
  if (!ok) return set_error(FRANKMIN_ERR_INVALID_ARGUMENT, what);
  return FRANKMIN_OK;
}

}  // namespace

extern "C" {

const char* frankmin_version(void) { return "1.0.0"; }

const char* frankmin_error_message(void) { return g_error.c_str(); }

int frankmin_normalize_chirality(double t_raw, double* t_abs, int* reflected) {
  if (int rc = require(t_abs && reflected, "null output pointer")) return rc;
  return guarded([&]() -> int {
    const Chirality c = normalize_chirality(t_raw);
    *t_abs = c.t;
    *reflected = c.reflected ? 1 : 0;
    return FRANKMIN_OK;
  });
}

double frankmin_angle_inequality_constant(void) {
  return angle_inequality_constant();
}

double frankmin_gamma_frustrated(double t) {
  return stability::gamma_frustrated({t < 0 ? -t : t, t < 0});
}

double frankmin_gamma_homeotropic(double t) {
  return stability::gamma_homeotropic({t < 0 ? -t : t, t < 0});
}

double frankmin_threshold_frustrated(void) {
  return stability::threshold_frustrated();
}

double frankmin_threshold_homeotropic(void) {
  return stability::threshold_homeotropic();
}

double frankmin_optimal_cauchy_eps(double t) {
  return stability::optimal_cauchy_eps({t < 0 ? -t : t, t < 0});
}

int frankmin_solve1d(double k1, double k2, double k3, double k4,
                     int one_constant, double t, int n_nodes,
                     frankmin_profile** out) {
  if (int rc = require(out != nullptr, "null output pointer")) return rc;
  return guarded([&]() -> int {
    const ElasticConstants k = make_constants(k1, k2, k3, k4, one_constant);
    const Chirality c = normalize_chirality(t);
    auto p = std::make_unique<frankmin_profile>();
    p->profile = profile1d::minimize_1d(k, c, n_nodes);
    p->k = k;
    p->t = c;
    *out = p.release();
    return FRANKMIN_OK;
  });
}

int frankmin_brute_force_1d(double k1, double k2, double k3, double k4,
                            int one_constant, double t, int n_nodes,
                            frankmin_profile** out) {
  if (int rc = require(out != nullptr, "null output pointer")) return rc;
  return guarded([&]() -> int {
    const ElasticConstants k = make_constants(k1, k2, k3, k4, one_constant);
    const Chirality c = normalize_chirality(t);
    auto p = std::make_unique<frankmin_profile>();
    p->profile = profile1d::brute_force_1d(k, c, n_nodes);
    p->k = k;
    p->t = c;
    *out = p.release();
    return FRANKMIN_OK;
  });
}

void frankmin_profile_free(frankmin_profile* p) { delete p; }

int frankmin_profile_node_count(const frankmin_profile* p, int* n) {
  if (int rc = require(p && n, "null pointer")) return rc;
  *n = static_cast<int>(p->profile.z.size());
  return FRANKMIN_OK;
}

int frankmin_profile_node(const frankmin_profile* p, int i, double* z,
                          double* theta, double* phi) {
  if (int rc = require(p && z && theta && phi, "null pointer")) return rc;
  if (i < 0 || i >= static_cast<int>(p->profile.z.size()))
    return set_error(FRANKMIN_ERR_INVALID_ARGUMENT, "node index out of range");
  *z = p->profile.z[i];
  *theta = p->profile.theta[i];
  *phi = i < static_cast<int>(p->profile.phi.size()) ? p->profile.phi[i] : 0.0;
  return FRANKMIN_OK;
}

int frankmin_profile_constant(const frankmin_profile* p, double* c) {
  if (int rc = require(p && c, "null pointer")) return rc;
  *c = p->profile.first_integral_constant;
  return FRANKMIN_OK;
}

int frankmin_profile_energy_per_area(const frankmin_profile* p, double* e) {
  if (int rc = require(p && e, "null pointer")) return rc;
  *e = p->profile.energy_per_area;
  return FRANKMIN_OK;
}

int frankmin_profile_residual(const frankmin_profile* p, double* r) {
  if (int rc = require(p && r, "null pointer")) return rc;
  return guarded([&]() -> int {
    *r = profile1d::first_integral_residual(p->profile, p->k, p->t);
    return FRANKMIN_OK;
  });
}

int frankmin_profile_write_csv(const frankmin_profile* p, const char* path) {
  if (int rc = require(p && path, "null pointer")) return rc;
  return guarded([&]() -> int {
    profile1d::write_profile_csv(p->profile, path);
    return FRANKMIN_OK;
  });
}

int frankmin_profile_write_metadata(const frankmin_profile* p,
                                    const char* path) {
  if (int rc = require(p && path, "null pointer")) return rc;
  return guarded([&]() -> int {
    profile1d::write_profile_metadata(p->profile, p->k, p->t, path);
    return FRANKMIN_OK;
  });
}

int frankmin_grid_base(int nx, int ny, int nz, double l1, double l2,
                       const char* bc, frankmin_grid** out) {
  if (int rc = require(out && bc, "null pointer")) return rc;
  return guarded([&]() -> int {
    auto g = std::make_unique<frankmin_grid>();
    g->grid = field3d::base_grid({nx, ny, nz}, DomainSpec{l1, l2},
                                 field3d::bc_from_string(bc));
    *out = g.release();
    return FRANKMIN_OK;
  });
}

int frankmin_grid_embed_profile(const frankmin_profile* p, int nx, int ny,
                                int nz, double l1, double l2,
                                frankmin_grid** out) {
  if (int rc = require(p && out, "null pointer")) return rc;
  return guarded([&]() -> int {
    auto g = std::make_unique<frankmin_grid>();
    g->grid = field3d::embed_profile(p->profile, {nx, ny, nz},
                                     DomainSpec{l1, l2});
    *out = g.release();
    return FRANKMIN_OK;
  });
}

int frankmin_grid_smooth_sample(uint64_t seed, double amplitude, int nx,
                                int ny, int nz, double l1, double l2,
                                const char* bc, frankmin_grid** out) {
  if (int rc = require(out && bc, "null pointer")) return rc;
  return guarded([&]() -> int {
    auto g = std::make_unique<frankmin_grid>();
    g->grid = field3d::smooth_periodic_sample(seed, {nx, ny, nz},
                                              DomainSpec{l1, l2},
                                              field3d::bc_from_string(bc),
                                              amplitude);
    *out = g.release();
    return FRANKMIN_OK;
  });
}

int frankmin_grid_perturb(const frankmin_grid* g, double amplitude,
                          uint64_t seed, frankmin_grid** out) {
  if (int rc = require(g && out, "null pointer")) return rc;
  return guarded([&]() -> int {
    auto r = std::make_unique<frankmin_grid>();
    r->grid = field3d::random_perturbation(g->grid, amplitude, seed);
    *out = r.release();
    return FRANKMIN_OK;
  });
}

void frankmin_grid_free(frankmin_grid* g) { delete g; }

int frankmin_grid_dims(const frankmin_grid* g, int* nx, int* ny, int* nz) {
  if (int rc = require(g && nx && ny && nz, "null pointer")) return rc;
  *nx = g->grid.dims.nx;
  *ny = g->grid.dims.ny;
  *nz = g->grid.dims.nz;
  return FRANKMIN_OK;
}

int frankmin_grid_node(const frankmin_grid* g, int i, int j, int k,
                       double* nx_val, double* ny_val, double* nz_val) {
  if (int rc = require(g && nx_val && ny_val && nz_val, "null pointer"))
    return rc;
  if (i < 0 || i >= g->grid.dims.nx || j < 0 || j >= g->grid.dims.ny ||
      k < 0 || k >= g->grid.dims.nz)
    return set_error(FRANKMIN_ERR_INVALID_ARGUMENT, "node index out of range");
  const Vec3& v = g->grid.at(i, j, k);
  *nx_val = v.x;
  *ny_val = v.y;
  *nz_val = v.z;
  return FRANKMIN_OK;
}

int frankmin_grid_energy(const frankmin_grid* g, double k1, double k2,
                         double k3, double k4, int one_constant, double t,
                         double* out) {
  if (int rc = require(g && out, "null pointer")) return rc;
  return guarded([&]() -> int {
    *out = field3d::discrete_energy(
        g->grid, make_constants(k1, k2, k3, k4, one_constant),
        normalize_chirality(t));
    return FRANKMIN_OK;
  });
}

int frankmin_grid_saddle_splay(const frankmin_grid* g, double* out) {
  if (int rc = require(g && out, "null pointer")) return rc;
  return guarded([&]() -> int {
    *out = field3d::saddle_splay_integral(g->grid);
    return FRANKMIN_OK;
  });
}

int frankmin_grid_el_residual(const frankmin_grid* g, double t, double* out) {
  if (int rc = require(g && out, "null pointer")) return rc;
  return guarded([&]() -> int {
    *out = field3d::el_residual(g->grid, normalize_chirality(t));
    return FRANKMIN_OK;
  });
}

int frankmin_grid_save(const frankmin_grid* g, const char* path) {
  if (int rc = require(g && path, "null pointer")) return rc;
  return guarded([&]() -> int {
    field3d::save_grid(g->grid, path);
    return FRANKMIN_OK;
  });
}

int frankmin_grid_load(const char* path, frankmin_grid** out) {
  if (int rc = require(path && out, "null pointer")) return rc;
  return guarded([&]() -> int {
    auto g = std::make_unique<frankmin_grid>();
    g->grid = field3d::load_grid(path);
    *out = g.release();
    return FRANKMIN_OK;
  });
}

int frankmin_grid_relax(const frankmin_grid* start, double k1, double k2,
                        double k3, double k4, int one_constant, double t,
                        int max_iter, double grad_tol, double step_init,
                        frankmin_grid** out_grid,
                        frankmin_report** out_report) {
  if (int rc = require(start && out_grid && out_report, "null pointer"))
    return rc;
  return guarded([&]() -> int {
    field3d::RelaxOptions opts;
    if (max_iter > 0) opts.max_iter = max_iter;
    if (grad_tol > 0.0) opts.grad_tol = grad_tol;
    if (step_init > 0.0) opts.step_init = step_init;
    auto [grid, report] = field3d::relax(
        start->grid, make_constants(k1, k2, k3, k4, one_constant),
        normalize_chirality(t), opts);
    auto g = std::make_unique<frankmin_grid>();
    g->grid = std::move(grid);
    auto r = std::make_unique<frankmin_report>();
    r->report = std::move(report);
    *out_grid = g.release();
    *out_report = r.release();
    return FRANKMIN_OK;
  });
}

void frankmin_report_free(frankmin_report* r) { delete r; }

int frankmin_report_iterations(const frankmin_report* r, int* n) {
  if (int rc = require(r && n, "null pointer")) return rc;
  *n = r->report.iterations;
  return FRANKMIN_OK;
}

int frankmin_report_converged(const frankmin_report* r, int* converged) {
  if (int rc = require(r && converged, "null pointer")) return rc;
  *converged = r->report.converged ? 1 : 0;
  return FRANKMIN_OK;
}

int frankmin_report_final_gradient_norm(const frankmin_report* r, double* g) {
  if (int rc = require(r && g, "null pointer")) return rc;
  *g = r->report.final_gradient_norm;
  return FRANKMIN_OK;
}

int frankmin_report_trace_length(const frankmin_report* r, int* n) {
  if (int rc = require(r && n, "null pointer")) return rc;
  *n = static_cast<int>(r->report.energy_trace.size());
  return FRANKMIN_OK;
}

int frankmin_report_trace_value(const frankmin_report* r, int i, double* e) {
  if (int rc = require(r && e, "null pointer")) return rc;
  if (i < 0 || i >= static_cast<int>(r->report.energy_trace.size()))
    return set_error(FRANKMIN_ERR_INVALID_ARGUMENT, "trace index out of range");
  *e = r->report.energy_trace[i];
  return FRANKMIN_OK;
}

int frankmin_verify_suite(const char* suite, char** json_report,
                          int* all_pass) {
  if (int rc = require(suite && json_report && all_pass, "null pointer"))
    return rc;
  return guarded([&]() -> int {
    const verify::VerifyReport rep = verify::run_suite(suite);
    nlohmann::json j;
    j["suite"] = rep.suite;
    j["all_pass"] = rep.all_pass;
    j["cases"] = nlohmann::json::array();
    for (const auto& c : rep.cases) {
      j["cases"].push_back({{"name", c.name},
                            {"pass", c.pass},
                            {"value", c.value},
                            {"details", c.details}});
    }
    const std::string text = j.dump(2);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) return set_error(FRANKMIN_ERR_INTERNAL, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *json_report = buf;
    *all_pass = rep.all_pass ? 1 : 0;
    return FRANKMIN_OK;
  });
}

void frankmin_string_free(char* s) { std::free(s); }

}  // extern "C"
