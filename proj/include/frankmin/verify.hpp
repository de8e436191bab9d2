#pragma once

#include <string>
#include <vector>

#include "frankmin/core.hpp"
#include "frankmin/field3d.hpp"

// Seeded property suites behind the `verify` CLI command. Each suite runs
// a fixed set of cases and reports one pass/fail row per case.

namespace frankmin::verify {

struct VerifyCase {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string details;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCase> cases;
  bool all_pass = false;
};

const std::vector<std::string>& suite_names();

/// Runs one of: saddle-splay, splitting, first-integral, lemma-monotone,
/// gradient-check, angle-inequality. Throws std::invalid_argument for an
/// unknown suite name.
VerifyReport run_suite(const std::string& suite);

/// Least-squares slope of log(err) against log(h). Used by the refinement
/// and Richardson checks.
double fit_log_slope(const std::vector<double>& h,
                     const std::vector<double>& err);

/// Deterministic tangent direction field for gradient checks: unit-free
/// hash-driven vectors projected on each node's tangent plane, zero on the
/// z-boundary layers.
std::vector<Vec3> tangent_direction(const field3d::DirectorGrid& grid,
                                    std::uint64_t seed);

/// Directional-derivative error |(E(n+eps v) - E(n-eps v))/(2 eps) - <g,v>|
/// at one epsilon.
double directional_derivative_error(const field3d::DirectorGrid& grid,
                                    const ElasticConstants& k,
                                    const Chirality& t,
                                    const std::vector<Vec3>& dir, double eps);

}  // namespace frankmin::verify
