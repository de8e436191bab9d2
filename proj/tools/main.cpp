// frankmin command-line interface. Links the C API only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "frankmin.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;

struct ElasticArgs {
  std::vector<double> k{1.0, 1.0, 1.0, 0.0};
  bool one_constant = false;

  // Default when nothing is requested: one-constant with K = 1.
  bool effective_one_constant() const {
    return one_constant || (k[0] == k[1] && k[1] == k[2] && k[3] == 0.0);
  }
};

int map_error(int rc) {
  if (rc == FRANKMIN_OK) return kExitOk;
  std::cerr << "error: " << frankmin_error_message() << "\n";
  return rc == FRANKMIN_ERR_SOLVER ? kExitSolver : kExitUsage;
}

json elastic_json(const ElasticArgs& e, double t) {
  return json{{"k1", e.k[0]},
              {"k2", e.k[1]},
              {"k3", e.k[2]},
              {"k4", e.k[3]},
              {"one_constant", e.effective_one_constant()},
              {"t", t}};
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

int solve_and_write(const ElasticArgs& elastic, double t, int n_nodes,
                    const std::string& csv_path, const std::string& meta_path,
                    bool quiet) {
  frankmin_profile* p = nullptr;
  int rc = frankmin_solve1d(elastic.k[0], elastic.k[1], elastic.k[2],
                            elastic.k[3], elastic.effective_one_constant(),
                            t, n_nodes, &p);
  if (rc != FRANKMIN_OK) return map_error(rc);
  double c = 0.0, e = 0.0, res = 0.0;
  frankmin_profile_constant(p, &c);
  frankmin_profile_energy_per_area(p, &e);
  frankmin_profile_residual(p, &res);
  rc = frankmin_profile_write_csv(p, csv_path.c_str());
  if (rc == FRANKMIN_OK)
    rc = frankmin_profile_write_metadata(p, meta_path.c_str());
  frankmin_profile_free(p);
  if (rc != FRANKMIN_OK) return map_error(rc);
  if (!quiet)
    std::printf("t=%g  C=%.12g  energy_per_area=%.12g  residual=%.3e  -> %s\n",
                t, c, e, res, csv_path.c_str());
  return kExitOk;
}

int cmd_solve1d(const ElasticArgs& elastic, double t, int n_nodes,
                const std::string& out_dir, bool fig1) {
  std::filesystem::create_directories(out_dir);
  if (fig1) {
    for (double tv : {2.5, 5.0, 10.0, 20.0}) {
      char base[64];
      std::snprintf(base, sizeof(base), "fig1_t%g", tv);
      const int rc = solve_and_write(
          elastic, tv, n_nodes, out_dir + "/" + base + ".csv",
          out_dir + "/" + base + ".json", false);
      if (rc != kExitOk) return rc;
    }
    return kExitOk;
  }
  return solve_and_write(elastic, t, n_nodes, out_dir + "/profile.csv",
                         out_dir + "/profile.json", false);
}

int cmd_embed(const ElasticArgs& elastic, double t, int n_nodes,
              const std::vector<int>& dims, double l1, double l2,
              const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  frankmin_profile* p = nullptr;
  int rc = frankmin_solve1d(elastic.k[0], elastic.k[1], elastic.k[2],
                            elastic.k[3], elastic.effective_one_constant(),
                            t, n_nodes, &p);
  if (rc != FRANKMIN_OK) return map_error(rc);
  frankmin_grid* g = nullptr;
  rc = frankmin_grid_embed_profile(p, dims[0], dims[1], dims[2], l1, l2, &g);
  frankmin_profile_free(p);
  if (rc != FRANKMIN_OK) return map_error(rc);
  const std::string path = out_dir + "/embedded.ofgrid";
  rc = frankmin_grid_save(g, path.c_str());
  double e = 0.0;
  frankmin_grid_energy(g, elastic.k[0], elastic.k[1], elastic.k[2],
                       elastic.k[3], elastic.effective_one_constant(), t, &e);
  frankmin_grid_free(g);
  if (rc != FRANKMIN_OK) return map_error(rc);
  json meta = elastic_json(elastic, t);
  meta["command"] = "embed";
  meta["n_nodes"] = n_nodes;
  meta["grid"] = {dims[0], dims[1], dims[2]};
  meta["l1"] = l1;
  meta["l2"] = l2;
  meta["discrete_energy"] = e;
  write_json(meta, out_dir + "/embedded.json");
  std::printf("embedded grid %dx%dx%d  energy=%.12g  -> %s\n", dims[0],
              dims[1], dims[2], e, path.c_str());
  return kExitOk;
}

int cmd_relax(const ElasticArgs& elastic, double t, const std::string& bc,
              std::uint64_t seed, double perturb, const std::vector<int>& dims,
              double l1, double l2, const std::string& start_path,
              int max_iter, double grad_tol, double step_init, int n_nodes,
              const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  frankmin_grid* start = nullptr;
  int rc = FRANKMIN_OK;
  if (!start_path.empty()) {
    rc = frankmin_grid_load(start_path.c_str(), &start);
  } else if (bc == "frustrated") {
    frankmin_profile* p = nullptr;
    rc = frankmin_solve1d(elastic.k[0], elastic.k[1], elastic.k[2],
                          elastic.k[3], elastic.effective_one_constant(), t,
                          n_nodes, &p);
    if (rc == FRANKMIN_OK) {
      rc = frankmin_grid_embed_profile(p, dims[0], dims[1], dims[2], l1, l2,
                                       &start);
      frankmin_profile_free(p);
    }
  } else {
    rc = frankmin_grid_base(dims[0], dims[1], dims[2], l1, l2, bc.c_str(),
                            &start);
  }
  if (rc != FRANKMIN_OK) return map_error(rc);

  frankmin_grid* perturbed = nullptr;
  rc = frankmin_grid_perturb(start, perturb, seed, &perturbed);
  if (rc != FRANKMIN_OK) {
    frankmin_grid_free(start);
    return map_error(rc);
  }

  frankmin_grid* final_grid = nullptr;
  frankmin_report* report = nullptr;
  rc = frankmin_grid_relax(perturbed, elastic.k[0], elastic.k[1], elastic.k[2],
                           elastic.k[3], elastic.effective_one_constant(), t,
                           max_iter, grad_tol, step_init, &final_grid,
                           &report);
  frankmin_grid_free(perturbed);
  if (rc != FRANKMIN_OK) {
    frankmin_grid_free(start);
    return map_error(rc);
  }

  double e_start = 0.0, e_final = 0.0;
  frankmin_grid_energy(start, elastic.k[0], elastic.k[1], elastic.k[2],
                       elastic.k[3], elastic.effective_one_constant(), t,
                       &e_start);
  frankmin_grid_energy(final_grid, elastic.k[0], elastic.k[1], elastic.k[2],
                       elastic.k[3], elastic.effective_one_constant(), t,
                       &e_final);
  frankmin_grid_free(start);

  const std::string grid_path = out_dir + "/relaxed.ofgrid";
  rc = frankmin_grid_save(final_grid, grid_path.c_str());
  frankmin_grid_free(final_grid);
  if (rc != FRANKMIN_OK) {
    frankmin_report_free(report);
    return map_error(rc);
  }

  int iters = 0, converged = 0, trace_len = 0;
  double gnorm = 0.0;
  frankmin_report_iterations(report, &iters);
  frankmin_report_converged(report, &converged);
  frankmin_report_final_gradient_norm(report, &gnorm);
  frankmin_report_trace_length(report, &trace_len);
  json trace = json::array();
  for (int i = 0; i < trace_len; ++i) {
    double e = 0.0;
    frankmin_report_trace_value(report, i, &e);
    trace.push_back(e);
  }
  frankmin_report_free(report);

  json rep = elastic_json(elastic, t);
  rep["command"] = "relax";
  rep["bc"] = bc;
  rep["seed"] = seed;
  rep["perturb"] = perturb;
  rep["grid"] = {dims[0], dims[1], dims[2]};
  rep["l1"] = l1;
  rep["l2"] = l2;
  rep["max_iter"] = max_iter;
  rep["grad_tol"] = grad_tol;
  rep["step_init"] = step_init;
  rep["start"] = start_path.empty()
                     ? (bc == "frustrated" ? "embedded" : "base")
                     : start_path;
  rep["converged"] = converged != 0;
  rep["iterations"] = iters;
  rep["final_gradient_norm"] = gnorm;
  rep["start_energy"] = e_start;
  rep["final_energy"] = e_final;
  rep["energy_trace"] = trace;
  write_json(rep, out_dir + "/relax_report.json");

  std::printf(
      "relax bc=%s t=%g seed=%llu: converged=%d iters=%d final_energy=%.12g "
      "(start state %.12g) -> %s\n",
      bc.c_str(), t, static_cast<unsigned long long>(seed), converged, iters,
      e_final, e_start, grid_path.c_str());
  return kExitOk;  // non-convergence is reported, not fatal
}

int cmd_scan(double t_min, double t_max, int steps,
             const std::string& out_dir) {
  if (t_max < t_min || steps < 1) {
    std::cerr << "error: invalid scan range\n";
    return kExitUsage;
  }
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/scan.csv";
  std::ofstream out(path);
  out << "t,gamma_frustrated,gamma_homeotropic\n";
  char line[160];
  const int rows = t_max == t_min ? 1 : steps + 1;
  for (int i = 0; i < rows; ++i) {
    const double t =
        rows == 1 ? t_min : t_min + (t_max - t_min) * i / steps;
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", t,
                  frankmin_gamma_frustrated(t), frankmin_gamma_homeotropic(t));
    out << line;
  }
  out.close();
  json meta{{"command", "scan"},
            {"t_min", t_min},
            {"t_max", t_max},
            {"steps", steps},
            {"rows", rows}};
  meta["threshold_frustrated"] = frankmin_threshold_frustrated();
  meta["threshold_homeotropic"] = frankmin_threshold_homeotropic();
  meta["optimal_cauchy_eps_per_t"] = frankmin_optimal_cauchy_eps(1.0);
  write_json(meta, out_dir + "/scan.json");
  std::printf("gamma_frustrated(0)=%.6g  gamma_homeotropic(0)=%.6g\n",
              frankmin_gamma_frustrated(0.0), frankmin_gamma_homeotropic(0.0));
  std::printf("threshold_frustrated=%.6g\nthreshold_homeotropic=%.6g\n",
              frankmin_threshold_frustrated(), frankmin_threshold_homeotropic());
  std::printf("-> %s\n", path.c_str());
  return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& out_dir) {
  char* report = nullptr;
  int all_pass = 0;
  const int rc = frankmin_verify_suite(suite.c_str(), &report, &all_pass);
  if (rc != FRANKMIN_OK) return map_error(rc);
  const json j = json::parse(report);
  frankmin_string_free(report);
  for (const auto& c : j["cases"])
    std::printf("  [%s] %s: %s\n",
                c["pass"].get<bool>() ? "PASS" : "FAIL",
                c["name"].get<std::string>().c_str(),
                c["details"].get<std::string>().c_str());
  std::printf("suite %s: %s\n", suite.c_str(), all_pass ? "PASS" : "FAIL");
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_json(j, out_dir + "/verify_" + suite + ".json");
  }
  return all_pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frankmin: Oseen-Frank cholesteric energy minimization"};
  app.require_subcommand(1);

  ElasticArgs elastic;
  double t = 0.0;
  int n_nodes = 1001;
  std::string out_dir = ".";
  std::vector<int> dims{16, 16, 33};
  double l1 = 0.25, l2 = 0.25;

  auto add_common = [&](CLI::App* cmd, bool with_grid) {
    cmd->add_option("--t", t, "chirality (sign folds into a reflection)");
    cmd->add_option("--k", elastic.k,
                    "elastic constants k1,k2,k3,k4 (comma separated)")
        ->delimiter(',')
        ->expected(4);
    cmd->add_flag("--one-constant", elastic.one_constant,
                  "one-constant approximation (K taken from k1)");
    cmd->add_option("--n-nodes", n_nodes, "profile nodes")
        ->check(CLI::Range(2, 10000000));
    cmd->add_option("--out", out_dir, "output directory");
    if (with_grid) {
      cmd->add_option("--grid", dims, "grid dims nx,ny,nz")
          ->delimiter(',')
          ->expected(3);
      cmd->add_option("--l1", l1, "half-width in x");
      cmd->add_option("--l2", l2, "half-width in y");
    }
  };

  auto* solve = app.add_subcommand("solve1d", "solve the 1D minimizer");
  bool fig1 = false;
  add_common(solve, false);
  solve->add_flag("--fig1", fig1, "emit profiles for t = 2.5, 5, 10, 20");

  auto* embed = app.add_subcommand("embed", "embed the 1D minimizer on a grid");
  add_common(embed, true);

  auto* relax = app.add_subcommand("relax", "relax a perturbed 3D field");
  std::string bc = "frustrated";
  std::uint64_t seed = 1;
  double perturb = 0.2;
  std::string start_path;
  int max_iter = 50000;
  double grad_tol = 1e-6, step_init = 1e-2;
  add_common(relax, true);
  relax->add_option("--bc", bc, "boundary condition")
      ->check(CLI::IsMember({"frustrated", "homeotropic"}));
  relax->add_option("--seed", seed, "perturbation seed");
  relax->add_option("--perturb", perturb, "perturbation amplitude");
  relax->add_option("--start", start_path, "OFGRID file to start from");
  relax->add_option("--max-iter", max_iter, "iteration cap");
  relax->add_option("--grad-tol", grad_tol, "gradient infinity-norm target");
  relax->add_option("--step-init", step_init, "initial line-search step");

  auto* scan = app.add_subcommand("scan", "scan the stability constants");
  double t_min = 0.0, t_max = 1.5;
  int steps = 150;
  scan->add_option("--t-min", t_min, "scan start");
  scan->add_option("--t-max", t_max, "scan end");
  scan->add_option("--steps", steps, "number of steps");
  scan->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  std::string verify_out;
  verify
      ->add_option("--suite", suite,
                   "saddle-splay | splitting | first-integral | "
                   "lemma-monotone | gradient-check | angle-inequality")
      ->required();
  verify->add_option("--out", verify_out, "report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve1d(elastic, t, n_nodes, out_dir, fig1);
    if (embed->parsed())
      return cmd_embed(elastic, t, n_nodes, dims, l1, l2, out_dir);
    if (relax->parsed())
      return cmd_relax(elastic, t, bc, seed, perturb, dims, l1, l2,
                       start_path, max_iter, grad_tol, step_init, n_nodes,
                       out_dir);
    if (scan->parsed()) return cmd_scan(t_min, t_max, steps, out_dir);
    if (verify->parsed()) return cmd_verify(suite, verify_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
