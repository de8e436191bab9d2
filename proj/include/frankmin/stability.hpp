#pragma once

#include <vector>

#include "frankmin/field3d.hpp"
#include "frankmin/profile1d.hpp"

// Explicit stability functionals and constants for the one-constant
// energy: the quadratic form H whose value equals the energy excess
// I(n) - I(n*), and the closed-form coercivity bounds
//
//   gamma_frustrated(t)  = pi^2 (1 - 1/(2 sqrt 2)) - (pi^2/4 + t^2 + 4 sqrt2 t^2)
//   gamma_homeotropic(t) = pi^2 (1 - 1/(2 sqrt 2)) - 4 sqrt2 t^2
//
// with positive roots near 0.7667 and 1.0620.

namespace frankmin::stability {

double gamma_frustrated(const Chirality& t);
double gamma_homeotropic(const Chirality& t);

/// Positive root of gamma_frustrated.
double threshold_frustrated();
/// Positive root of gamma_homeotropic: pi sqrt(2 sqrt2 - 1) / 4.
double threshold_homeotropic();

/// Optimal slope in the Cauchy step: eps = (4 sqrt2/3 + 2 sqrt11/3) t.
double optimal_cauchy_eps(const Chirality& t);

/// Frustrated stability threshold in t as a function of the Cauchy slope
/// c (eps = c t): sqrt(pi^2 (3/4 - sqrt2/c) / (1 + sqrt2 c)). Used to
/// verify numerically that optimal_cauchy_eps maximizes the threshold.
double frustrated_threshold_for_slope(double c);

struct StabilityConstants {
  double gamma_t = 0.0;
  double threshold_frustrated = 0.0;
  double threshold_homeotropic = 0.0;
  double cauchy_eps_optimal = 0.0;  // per unit t
};

StabilityConstants stability_constants(const Chirality& t);

/// lambda(z) = delta_t - t^2 + 2 t^2 sin^2 theta(z) sampled on the grid's
/// z levels (theta interpolated linearly from the profile).
std::vector<double> lambda_field(const profile1d::EulerProfile& profile,
                                 const Chirality& t, int nz);

/// H(v) = int |grad v|^2 + 2t v.curl v - lambda |v|^2, with the field3d
/// stencils and quadrature. Pass an empty lambda for the homeotropic
/// (lambda = 0) variant. Rejects v that fails to vanish on the z faces.
double h_functional(const field3d::VectorField& v,
                    const std::vector<double>& lambda_z, const Chirality& t);

/// |H(n - n*) - (I(n) - I(n*))| for the unit-K one-constant energy. Both
/// sides share every difference stencil, which makes this the designated
/// detector for stencil inconsistencies.
double splitting_residual(const field3d::DirectorGrid& n,
                          const field3d::DirectorGrid& nstar,
                          const std::vector<double>& lambda_z,
                          const Chirality& t);

}  // namespace frankmin::stability
