// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit status is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "frankmin.h"
#include "frankmin/field3d.hpp"
#include "frankmin/profile1d.hpp"
#include "frankmin/stability.hpp"
#include "frankmin/verify.hpp"

using namespace frankmin;

namespace {

constexpr double kPi = M_PI;
const ElasticConstants kIso = ElasticConstants::isotropic(1.0);
const ElasticConstants kGen = ElasticConstants::general(1.0, 2.0, 3.0, 0.0);
const DomainSpec kDom;  // l1 = l2 = 1/4

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string label, double time_limit_s)
      : id_(id), label_(std::move(label)), limit_(time_limit_s),
        start_(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!first_failure_.empty()) first_failure_ += "; ";
      first_failure_ += what;
    }
  }

  void note(const std::string& s) { notes_ = notes_.empty() ? s : notes_ + ", " + s; }

  void finish() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    if (secs >= limit_) {
      pass_ = false;
      first_failure_ += (first_failure_.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] criterion %d: %s (%s) [%.2f s < %.0f s]\n",
                pass_ ? "PASS" : "FAIL", id_, label_.c_str(),
                pass_ ? notes_.c_str()
                      : (first_failure_ + "; " + notes_).c_str(),
                secs, limit_);
    std::fflush(stdout);
    if (!pass_) ++g_failures;
  }

 private:
  int id_;
  std::string label_;
  double limit_;
  bool pass_ = true;
  std::string first_failure_;
  std::string notes_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

void criterion1_nematic_limit() {
  Criterion c(1, "nematic limit exactness", 1.0);
  const auto p = profile1d::minimize_1d(kIso, {0.0, false}, 1001);
  const double d_err = std::fabs(p.first_integral_constant - kPi * kPi / 4.0);
  c.require(d_err < 1e-8, fmt("D error %.2e >= 1e-8", d_err));
  double worst = 0.0;
  for (std::size_t i = 0; i < p.z.size(); ++i)
    worst = std::max(worst, std::fabs(p.theta[i] - kPi * p.z[i] / 2.0));
  c.require(worst < 1e-6, fmt("theta error %.2e >= 1e-6", worst));
  c.note(fmt("D err %.1e, max theta err %.1e", d_err, worst));
  c.finish();
}

void criterion2_paper_constants() {
  Criterion c(2, "paper stability constants", 5.0);
  const double g0 = frankmin_gamma_frustrated(0.0);
  c.require(g0 >= 3.908 && g0 <= 3.918, fmt("gamma_f(0)=%.5f", g0));
  const double quad = g0 - frankmin_gamma_frustrated(1.0);
  c.require(quad >= 6.64 && quad <= 6.66, fmt("quad coeff=%.5f", quad));
  const double rf = frankmin_threshold_frustrated();
  c.require(rf >= 0.764 && rf <= 0.769, fmt("frustrated root=%.5f", rf));
  const double rh = frankmin_threshold_homeotropic();
  c.require(rh >= 1.057 && rh <= 1.067, fmt("homeotropic root=%.5f", rh));
  const double eps = frankmin_optimal_cauchy_eps(1.0);
  c.require(eps >= 4.09 && eps <= 4.10, fmt("cauchy slope=%.5f", eps));
  c.note(fmt("gamma(0)=%.4f, roots %.4f", g0, rf) + fmt(" / %.4f", rh));
  c.finish();
}

void criterion3_fig1() {
  Criterion c(3, "Fig. 1 profile reproduction", 5.0);
  double prev_mid = 1e300;
  for (double tv : {2.5, 5.0, 10.0, 20.0}) {
    const auto p = profile1d::minimize_1d(kIso, {tv, false}, 1001);
    bool monotone = true;
    for (std::size_t i = 1; i < p.theta.size(); ++i)
      if (p.theta[i] <= p.theta[i - 1]) monotone = false;
    c.require(monotone, fmt("t=%g not strictly monotone", tv));
    c.require(p.endpoint_miss < 1e-6,
              fmt("t=%g endpoint miss %.2e", tv, p.endpoint_miss));
    const double res = profile1d::first_integral_residual(p, kIso,
                                                          {tv, false});
    c.require(res < 1e-6, fmt("t=%g residual %.2e >= 1e-6", tv, res));
    const double mid = p.theta[500];
    c.require(mid < prev_mid, fmt("theta(1/2) not decreasing at t=%g", tv));
    prev_mid = mid;
  }
  c.note("4 profiles, monotone, residual < 1e-6, theta(1/2) decreasing");
  c.finish();
}

void criterion4_oracle_equivalence() {
  Criterion c(4, "oracle equivalence minimize_1d vs brute_force_1d", 60.0);
  double worst_e = 0.0, worst_th = 0.0;
  for (const auto& k : {kIso, kGen})
    for (double tv : {0.0, 1.0, 2.5, 5.0, 10.0, 20.0}) {
      const Chirality t{tv, false};
      const int n = 2001;
      const auto a = profile1d::minimize_1d(k, t, n);
      const auto b = profile1d::brute_force_1d(k, t, n);
      const double rel = std::fabs(a.energy_per_area - b.energy_per_area) /
                         std::fabs(a.energy_per_area);
      double dth = 0.0;
      for (std::size_t i = 0; i < a.theta.size(); ++i)
        dth = std::max(dth, std::fabs(a.theta[i] - b.theta[i]));
      worst_e = std::max(worst_e, rel);
      worst_th = std::max(worst_th, dth);
      c.require(rel < 1e-4, fmt("t=%g energy rel diff %.2e", tv, rel));
      c.require(dth < 1e-3, fmt("t=%g theta diff %.2e", tv, dth));
    }
  c.note(fmt("worst energy rel %.1e, worst theta diff %.1e", worst_e,
             worst_th));
  c.finish();
}

void criterion5_lemma_monotone() {
  Criterion c(5, "Lemma 2 monotonicity of restricted minima", 30.0);
  for (const auto& k : {kIso, kGen})
    for (double tv : {0.5, 1.0, 2.0}) {
      const Chirality t{tv, false};
      double prev = 1e300;
      for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double f = profile1d::restricted_minimum(alpha, k, t);
        c.require(f < prev, fmt("F not strictly decreasing at t=%g a=%g", tv,
                                alpha));
        prev = f;
      }
    }
  c.note("strictly decreasing over alpha in {0.25,...,4}, both K sets");
  c.finish();
}

void criterion6_saddle_splay() {
  Criterion c(6, "saddle-splay proposition", 120.0);
  double worst_extrap = 0.0, worst_raw = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    double j[3];
    const int nzs[3] = {17, 33, 65};
    for (int r = 0; r < 3; ++r) {
      const field3d::GridDims dims{(nzs[r] - 1) / 2, (nzs[r] - 1) / 2,
                                   nzs[r]};
      const auto g = field3d::smooth_periodic_sample(
          seed, dims, kDom, field3d::BoundaryCondition::Frustrated, 0.4);
      j[r] = field3d::saddle_splay_integral(g);
    }
    const double extrap = j[2] + (j[2] - j[1]) / 3.0;
    worst_extrap = std::max(worst_extrap, std::fabs(extrap));
    worst_raw = std::max(worst_raw, std::fabs(j[2]));
    c.require(std::fabs(extrap) < 1e-8,
              fmt("seed %g extrapolation %.2e", (double)seed, extrap));
    c.require(std::fabs(j[2]) < 1e-4,
              fmt("seed %g |J(65)| %.2e", (double)seed, j[2]));
  }
  c.note(fmt("20 seeds, worst extrap %.1e, worst |J(65)| %.1e", worst_extrap,
             worst_raw));
  c.finish();
}

void criterion7_splitting() {
  Criterion c(7, "splitting identity refinement order", 120.0);
  std::string mode_notes;
  for (int bc_i = 0; bc_i < 2; ++bc_i) {
    const auto bc = bc_i == 0 ? field3d::BoundaryCondition::Frustrated
                              : field3d::BoundaryCondition::Homeotropic;
    const Chirality t{bc_i == 0 ? 0.5 : 0.8, false};
    profile1d::EulerProfile prof;
    if (bc_i == 0) prof = profile1d::minimize_1d(kIso, t, 2001);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::vector<double> h, res;
      double scale = 1.0;
      for (int nz : {17, 33, 65}) {
        const field3d::GridDims dims{16, 16, nz};
        const auto n = field3d::smooth_periodic_sample(seed, dims, kDom, bc,
                                                       0.4);
        const auto nstar = bc_i == 0
                               ? field3d::embed_profile(prof, dims, kDom, bc)
                               : field3d::base_grid(dims, kDom, bc);
        const auto lam = bc_i == 0 ? stability::lambda_field(prof, t, nz)
                                   : std::vector<double>{};
        res.push_back(stability::splitting_residual(n, nstar, lam, t));
        h.push_back(1.0 / (nz - 1));
        if (nz == 65)
          scale = std::fabs(field3d::discrete_energy(n, kIso, t)) + 1.0;
      }
      const double worst = std::max(res[0], std::max(res[1], res[2]));
      if (worst < 1e-10 * scale) {
        // Discrete identity exact to roundoff at every resolution: a
        // stronger statement than any measured convergence order.
        if (seed == 1)
          mode_notes += std::string(bc_i == 0 ? "frustrated" : "homeotropic") +
                        "=exact(" + fmt("%.0e", worst) + ") ";
        continue;
      }
      const double slope = verify::fit_log_slope(h, res);
      c.require(slope >= 1.8 && slope <= 2.2,
                fmt("order %.3f outside [1.8,2.2] (seed %g, ", slope,
                    (double)seed) +
                    field3d::to_string(bc) + ")");
      c.require(res[0] > res[1] && res[1] > res[2],
                "residual not decreasing (" + field3d::to_string(bc) + ")");
      if (seed == 1)
        mode_notes += std::string(bc_i == 0 ? "frustrated" : "homeotropic") +
                      fmt("=order %.2f ", slope);
    }
  }
  c.note(mode_notes + "(5 seeds each)");
  c.finish();
}

struct RelaxOutcome {
  double final_energy;
  field3d::DirectorGrid grid;
};

RelaxOutcome run_relax(const field3d::DirectorGrid& start, double t,
                       double grad_tol, int max_iter) {
  field3d::RelaxOptions opts;
  opts.grad_tol = grad_tol;
  opts.max_iter = max_iter;
  auto [grid, rep] = field3d::relax(start, kIso, {t, false}, opts);
  return {rep.energy_trace.back(), std::move(grid)};
}

void criterion8_desk_scale(std::vector<field3d::DirectorGrid>& saved_a) {
  Criterion c(8, "desk-scale global minimality", 600.0);
  const field3d::GridDims dims{16, 16, 33};

  // (a) frustrated, t = 0.5: every seed returns to the 1D minimizer.
  {
    const Chirality t{0.5, false};
    const auto prof = profile1d::minimize_1d(kIso, t, 2001);
    const auto embedded = field3d::embed_profile(prof, dims, kDom);
    const double e_ref = field3d::discrete_energy(embedded, kIso, t);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto start = field3d::random_perturbation(embedded, 0.3, seed);
      auto out = run_relax(start, 0.5, 1e-5, 40000);
      const double rel = std::fabs(out.final_energy - e_ref) / e_ref;
      worst = std::max(worst, rel);
      c.require(rel < 1e-3,
                fmt("(a) seed %g rel energy %.2e", (double)seed, rel));
      saved_a.push_back(std::move(out.grid));
    }
    c.note(fmt("(a) worst rel %.1e", worst));
  }

  // (b) homeotropic, t = 0.9: every seed returns to the unwound state.
  {
    const double t = 0.9;
    const auto base = field3d::base_grid(dims, kDom,
                                         field3d::BoundaryCondition::Homeotropic);
    const double e_ref = t * t * kDom.area();
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto start = field3d::random_perturbation(base, 0.2, seed);
      const auto out = run_relax(start, t, 1e-5, 40000);
      const double rel = std::fabs(out.final_energy - e_ref) / e_ref;
      worst = std::max(worst, rel);
      c.require(rel < 1e-3,
                fmt("(b) seed %g rel energy %.2e", (double)seed, rel));
    }
    c.note(fmt("(b) worst rel %.1e", worst));
  }

  // (c) homeotropic, t = 3.5 > pi: some seed must undercut the unwound
  // state by well more than the discretization tolerance.
  {
    const double t = 3.5;
    const auto base = field3d::base_grid(dims, kDom,
                                         field3d::BoundaryCondition::Homeotropic);
    const double e_unwound = t * t * kDom.area();
    const double margin = 10.0 * (1e-3 * e_unwound);
    // Tight tolerance: the unwound state is a saddle here, and a loose
    // gradient test would declare convergence before the unstable mode
    // has grown enough to carry the iterate off it.
    double best = 1e300;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto start = field3d::random_perturbation(base, 0.2, seed);
      const auto out = run_relax(start, t, 1e-9, 60000);
      best = std::min(best, out.final_energy);
    }
    c.require(best < e_unwound - margin,
              fmt("(c) best %.6f not below %.6f", best, e_unwound - margin));
    c.note(fmt("(c) best %.4f vs unwound %.4f", best, e_unwound));
  }
  c.finish();
}

void criterion9_gradient() {
  Criterion c(9, "gradient correctness (Richardson slopes)", 60.0);
  const auto rep = verify::run_suite("gradient-check");
  for (const auto& cs : rep.cases) {
    c.require(cs.pass, cs.name + ": " + cs.details);
    if (cs.name.find("general") != std::string::npos)
      c.note(fmt("slope %.3f", cs.value));
  }
  c.note("one-constant path identity exact to rounding");
  c.finish();
}

void criterion10_determinism(const std::vector<field3d::DirectorGrid>& a) {
  Criterion c(10, "determinism of seeded relax runs", 600.0);
  // Repeat criterion 8(a) and compare the grid files byte for byte.
  const field3d::GridDims dims{16, 16, 33};
  const Chirality t{0.5, false};
  const auto prof = profile1d::minimize_1d(kIso, t, 2001);
  const auto embedded = field3d::embed_profile(prof, dims, kDom);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto start = field3d::random_perturbation(embedded, 0.3, seed);
    const auto out = run_relax(start, 0.5, 1e-5, 40000);
    const std::string p1 = "det_first_" + std::to_string(seed) + ".ofgrid";
    const std::string p2 = "det_second_" + std::to_string(seed) + ".ofgrid";
    field3d::save_grid(a[seed - 1], p1);
    field3d::save_grid(out.grid, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    c.require(s1.str() == s2.str() && !s1.str().empty(),
              fmt("seed %g files differ", (double)seed));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
  }
  c.note("10 repeated runs byte-identical");
  c.finish();
}

}  // namespace

int main() {
  std::printf("frankmin acceptance suite\n");
  criterion1_nematic_limit();
  criterion2_paper_constants();
  criterion3_fig1();
  criterion4_oracle_equivalence();
  criterion5_lemma_monotone();
  criterion6_saddle_splay();
  criterion7_splitting();
  std::vector<field3d::DirectorGrid> saved_a;
  criterion8_desk_scale(saved_a);
  criterion9_gradient();
  criterion10_determinism(saved_a);
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
