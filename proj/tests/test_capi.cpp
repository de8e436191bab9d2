#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "frankmin.h"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("version and error strings") {
  CHECK(frankmin_version() != nullptr);
  CHECK(frankmin_error_message() != nullptr);
}

TEST_CASE("chirality normalization through the C surface") {
  double t = 0.0;
  int refl = -1;
  REQUIRE(frankmin_normalize_chirality(-2.5, &t, &refl) == FRANKMIN_OK);
  CHECK(t == 2.5);
  CHECK(refl == 1);
  CHECK(frankmin_normalize_chirality(NAN, &t, &refl) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(frankmin_error_message()) > 0);
  CHECK(frankmin_normalize_chirality(1.0, nullptr, &refl) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("closed-form constants") {
  CHECK(std::fabs(frankmin_angle_inequality_constant() - 2.0 / (kPi * kPi)) <
        1e-9);
  CHECK(frankmin_gamma_frustrated(0.0) > 3.908);
  CHECK(frankmin_gamma_frustrated(0.0) < 3.918);
  CHECK(frankmin_threshold_frustrated() > 0.764);
  CHECK(frankmin_threshold_frustrated() < 0.769);
  CHECK(frankmin_threshold_homeotropic() > 1.057);
  CHECK(frankmin_threshold_homeotropic() < 1.067);
  CHECK(frankmin_optimal_cauchy_eps(1.0) > 4.09);
  CHECK(frankmin_optimal_cauchy_eps(1.0) < 4.10);
}

TEST_CASE("solve1d via C API") {
  frankmin_profile* p = nullptr;
  REQUIRE(frankmin_solve1d(1, 1, 1, 0, 1, 0.0, 1001, &p) == FRANKMIN_OK);
  int n = 0;
  REQUIRE(frankmin_profile_node_count(p, &n) == FRANKMIN_OK);
  CHECK(n == 1001);
  double c = 0.0, e = 0.0;
  frankmin_profile_constant(p, &c);
  frankmin_profile_energy_per_area(p, &e);
  CHECK(std::fabs(c - kPi * kPi / 4.0) < 1e-8);
  CHECK(std::fabs(e - kPi * kPi / 4.0) < 1e-8);
  double z = 0.0, th = 0.0, ph = 0.0;
  REQUIRE(frankmin_profile_node(p, 500, &z, &th, &ph) == FRANKMIN_OK);
  CHECK(std::fabs(th - kPi * z / 2.0) < 1e-8);
  CHECK(frankmin_profile_node(p, 1001, &z, &th, &ph) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
  frankmin_profile_free(p);

  // Invalid elastic constants surface as argument errors.
  CHECK(frankmin_solve1d(-1, 1, 1, 0, 0, 1.0, 101, &p) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("grid lifecycle via C API") {
  frankmin_profile* p = nullptr;
  REQUIRE(frankmin_solve1d(1, 1, 1, 0, 1, 1.0, 501, &p) == FRANKMIN_OK);
  frankmin_grid* g = nullptr;
  REQUIRE(frankmin_grid_embed_profile(p, 8, 8, 17, 0.25, 0.25, &g) ==
          FRANKMIN_OK);
  frankmin_profile_free(p);

  int nx = 0, ny = 0, nz = 0;
  frankmin_grid_dims(g, &nx, &ny, &nz);
  CHECK(nx == 8);
  CHECK(nz == 17);

  double e = 0.0;
  REQUIRE(frankmin_grid_energy(g, 1, 1, 1, 0, 1, 1.0, &e) == FRANKMIN_OK);
  CHECK(e > 0.0);

  frankmin_grid* pert = nullptr;
  REQUIRE(frankmin_grid_perturb(g, 0.2, 9, &pert) == FRANKMIN_OK);

  frankmin_grid* relaxed = nullptr;
  frankmin_report* rep = nullptr;
  REQUIRE(frankmin_grid_relax(pert, 1, 1, 1, 0, 1, 1.0, 0, 1e-4, 0,
                              &relaxed, &rep) == FRANKMIN_OK);
  int conv = 0, iters = 0, tl = 0;
  frankmin_report_converged(rep, &conv);
  frankmin_report_iterations(rep, &iters);
  frankmin_report_trace_length(rep, &tl);
  CHECK(conv == 1);
  CHECK(tl >= 1);
  double e0 = 0.0, efin = 0.0;
  frankmin_report_trace_value(rep, 0, &e0);
  frankmin_report_trace_value(rep, tl - 1, &efin);
  CHECK(efin <= e0);
  frankmin_report_free(rep);
  frankmin_grid_free(pert);

  // Save, reload, compare.
  const char* path = "capi_grid.ofgrid";
  REQUIRE(frankmin_grid_save(relaxed, path) == FRANKMIN_OK);
  frankmin_grid* loaded = nullptr;
  REQUIRE(frankmin_grid_load(path, &loaded) == FRANKMIN_OK);
  // The reader renormalizes on load, so agreement is to rounding, not bits.
  double a[3], b[3];
  REQUIRE(frankmin_grid_node(relaxed, 3, 4, 7, &a[0], &a[1], &a[2]) ==
          FRANKMIN_OK);
  REQUIRE(frankmin_grid_node(loaded, 3, 4, 7, &b[0], &b[1], &b[2]) ==
          FRANKMIN_OK);
  CHECK(std::fabs(a[0] - b[0]) < 1e-15);
  CHECK(std::fabs(a[1] - b[1]) < 1e-15);
  CHECK(std::fabs(a[2] - b[2]) < 1e-15);
  frankmin_grid_free(loaded);
  frankmin_grid_free(relaxed);
  frankmin_grid_free(g);
  std::remove(path);

  CHECK(frankmin_grid_load("missing.ofgrid", &loaded) == FRANKMIN_ERR_IO);
}

TEST_CASE("argument validation via C API") {
  frankmin_grid* g = nullptr;
  CHECK(frankmin_grid_base(1, 8, 17, 0.25, 0.25, "frustrated", &g) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
  CHECK(frankmin_grid_base(8, 8, 17, 0.25, 0.25, "sideways", &g) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
  CHECK(frankmin_grid_base(8, 8, 17, -0.25, 0.25, "frustrated", &g) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
  frankmin_profile* p = nullptr;
  CHECK(frankmin_solve1d(1, 1, 1, 0, 1, 1.0, 1, &p) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
  CHECK(frankmin_solve1d(1, 1, 1, 0, 1, 1.0, 101, nullptr) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verify suite via C API") {
  char* report = nullptr;
  int all_pass = 0;
  REQUIRE(frankmin_verify_suite("angle-inequality", &report, &all_pass) ==
          FRANKMIN_OK);
  REQUIRE(report != nullptr);
  CHECK(all_pass == 1);
  CHECK(std::string(report).find("\"suite\"") != std::string::npos);
  frankmin_string_free(report);

  CHECK(frankmin_verify_suite("no-such-suite", &report, &all_pass) ==
        FRANKMIN_ERR_INVALID_ARGUMENT);
}
