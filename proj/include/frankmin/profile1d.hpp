#pragma once

#include <string>
#include <vector>

#include "frankmin/core.hpp"

// One-dimensional minimizers on the unit-height cell: the Euler-angle
// reduction with coefficients
//   f(th) = K1 cos^2 th + K3 sin^2 th
//   g(th) = K2^2 t^2 cos^2 th / (K2 cos^2 th + K3 sin^2 th)
// whose Euler-Lagrange equation carries the first integral
//   f(th) th'^2 + g(th) = C,    C > K2 t^2.
//
// The constant is represented internally by delta = C - K2 t^2. For large
// chirality delta underflows the floating-point spacing of C itself
// (t = 20 gives delta ~ 4e-12 against C ~ 400), so the pipeline never
// round-trips the constant through its plain value.

namespace frankmin::profile1d {

/// First-integral constant C = offset + delta with offset = K2 t^2.
/// delta > 0 is the exact carrier; value() is for display only.
struct FirstIntegralConstant {
  double delta = 0.0;
  double offset = 0.0;

  double value() const { return offset + delta; }

  static FirstIntegralConstant from_value(double c, const ElasticConstants& k,
                                          const Chirality& t) {
    return {c - k.k2 * t.t * t.t, k.k2 * t.t * t.t};
  }
};

/// Reduced Lagrangian coefficients for fixed (K, t).
/// big_g(th) = K2 t^2 - g(th) = K2 K3 t^2 sin^2 th / (K2 cos^2 + K3 sin^2),
/// the cancellation-free form of C - g(th) - delta.
struct ReducedCoefficients {
  ElasticConstants k;
  Chirality t;

  double f(double th) const {
    const double c = std::cos(th), s = std::sin(th);
    return k.k1 * c * c + k.k3 * s * s;
  }
  double g(double th) const {
    const double c = std::cos(th), s = std::sin(th);
    const double denom = k.k2 * c * c + k.k3 * s * s;
    return k.k2 * k.k2 * t.t * t.t * c * c / denom;
  }
  double big_g(double th) const {
    const double c = std::cos(th), s = std::sin(th);
    const double denom = k.k2 * c * c + k.k3 * s * s;
    return k.k2 * k.k3 * t.t * t.t * s * s / denom;
  }
  double f_prime(double th) const {
    return (k.k3 - k.k1) * std::sin(2.0 * th);
  }
  double g_prime(double th) const {
    const double c = std::cos(th), s = std::sin(th);
    const double denom = k.k2 * c * c + k.k3 * s * s;
    return -k.k2 * k.k2 * k.k3 * t.t * t.t * std::sin(2.0 * th) /
           (denom * denom);
  }
};

/// Discretized minimizer profile on a uniform z-grid.
/// For one-constant K the stored constant is D = C/K (and delta = D - t^2);
/// otherwise it is C itself (delta = C - K2 t^2).
struct EulerProfile {
  std::vector<double> z;
  std::vector<double> theta;
  std::vector<double> phi;
  double first_integral_constant = 0.0;
  double delta = 0.0;
  double energy_per_area = 0.0;
  double endpoint_miss = 0.0;  // |theta(end) - pi/2| before the clamp
};

/// eta(C) = int_0^{pi/2} sqrt(f(u)) / sqrt(C - g(u)) du.
/// Strictly decreasing in C, blows up as C -> K2 t^2 from above.
/// Throws std::domain_error if C <= K2 t^2.
double eta(double c, const ElasticConstants& k, const Chirality& t,
           double abs_tol = 1e-10);

/// Same integral parametrized by delta = C - K2 t^2 > 0.
double eta_delta(double delta, const ElasticConstants& k, const Chirality& t,
                 double abs_tol = 1e-10);

/// Solves eta(C) = alpha. Brackets delta from below by shrinking and from
/// above by doubling, then bisects in log(delta).
FirstIntegralConstant solve_first_integral_constant(const ElasticConstants& k,
                                                    const Chirality& t,
                                                    double alpha);

/// Signalled when the integrated profile misses theta(1) = pi/2 or an
/// iteration budget is exhausted.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integrates theta' = sqrt((delta + big_g(theta)) / f(theta)) from
/// theta(0) = 0 by classical RK4 on a uniform grid over [0, z_end].
/// The endpoint is clamped to pi/2 when within 1e-6, else SolverError.
EulerProfile theta_profile(const FirstIntegralConstant& c,
                           const ElasticConstants& k, const Chirality& t,
                           int n_nodes, double z_end = 1.0);

/// Fills phi by integrating phi' = K2 t / (K2 cos^2 th + K3 sin^2 th),
/// phi(0) = 0, jointly with the theta equation on the same RK4 grid.
void phi_profile(EulerProfile& profile, const ElasticConstants& k,
                 const Chirality& t);

/// Full pipeline: constant solve, theta, phi, and the energy per unit
/// cross-section area int_0^1 f th'^2 - g + K2 t^2 dz evaluated by the
/// trapezoid rule with th'^2 taken from the first integral.
EulerProfile minimize_1d(const ElasticConstants& k, const Chirality& t,
                         int n_nodes);

/// Minimum of F_alpha(v) = int_0^alpha f v'^2 - g + K2 t^2 dz over
/// v(0) = 0, v(alpha) = pi/2. Strictly decreasing in alpha.
double restricted_minimum(double alpha, const ElasticConstants& k,
                          const Chirality& t, int n_nodes = 0);

/// Max over interior nodes of |f(th) th'^2 + g(th) - C|, with th' from
/// high-order finite differences of the stored nodes. Solver diagnostic.
double first_integral_residual(const EulerProfile& profile,
                               const ElasticConstants& k, const Chirality& t);

/// delta_t = D - t^2 for a one-constant profile; must lie in (0, pi^2/4].
double delta_t(const EulerProfile& profile, const Chirality& t);

/// Independent oracle: minimizes the discretized reduced Lagrangian over
/// nodal theta values (endpoints fixed at 0 and pi/2) from the linear
/// initial profile until the gradient infinity-norm drops below 1e-9.
/// The descent runs damped Newton steps (the Hessian is tridiagonal) with
/// a backtracking line search; first-order steps cannot reach the 1e-9
/// stationarity tolerance at these node counts in double precision.
EulerProfile brute_force_1d(const ElasticConstants& k, const Chirality& t,
                            int n_nodes);

/// CSV with header `z,theta,phi`, one row per node, 17 significant digits.
void write_profile_csv(const EulerProfile& profile, const std::string& path);

/// JSON sidecar {k1,k2,k3,k4,t,C,energy_per_area,n_nodes}.
void write_profile_metadata(const EulerProfile& profile,
                            const ElasticConstants& k, const Chirality& t,
                            const std::string& path);

}  // namespace frankmin::profile1d
