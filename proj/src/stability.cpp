#include "frankmin/stability.hpp"

#include <cmath>

namespace frankmin::stability {

namespace {

constexpr double kPi = M_PI;
const double kSqrt2 = std::sqrt(2.0);

}  // namespace

double gamma_frustrated(const Chirality& t) {
  const double p2 = kPi * kPi;
  return p2 * (1.0 - 1.0 / (2.0 * kSqrt2)) -
         (p2 / 4.0 + t.t * t.t + 4.0 * kSqrt2 * t.t * t.t);
}

double gamma_homeotropic(const Chirality& t) {
  const double p2 = kPi * kPi;
  return p2 * (1.0 - 1.0 / (2.0 * kSqrt2)) - 4.0 * kSqrt2 * t.t * t.t;
}

double threshold_frustrated() {
  const double p2 = kPi * kPi;
  return std::sqrt(p2 * (0.75 - 1.0 / (2.0 * kSqrt2)) / (1.0 + 4.0 * kSqrt2));
}

double threshold_homeotropic() {
  return kPi * std::sqrt(2.0 * kSqrt2 - 1.0) / 4.0;
}

double optimal_cauchy_eps(const Chirality& t) {
  return (4.0 * kSqrt2 / 3.0 + 2.0 * std::sqrt(11.0) / 3.0) * t.t;
}

double frustrated_threshold_for_slope(double c) {
  // With eps = c t the Cauchy step gives
  //   H >= (1 - sqrt2/c) |grad v|^2 - (pi^2/4 + (1 + sqrt2 c) t^2) |v|^2,
  // and the Poincare constant pi^2 turns the gradient share into mass.
  if (!(c > kSqrt2)) return 0.0;  // gradient coefficient must stay positive
  const double p2 = kPi * kPi;
  const double num = p2 * (0.75 - kSqrt2 / c);
  const double den = 1.0 + kSqrt2 * c;
  return num > 0.0 ? std::sqrt(num / den) : 0.0;
}

StabilityConstants stability_constants(const Chirality& t) {
  return {gamma_frustrated(t), threshold_frustrated(), threshold_homeotropic(),
          optimal_cauchy_eps(Chirality{1.0, false})};
}

std::vector<double> lambda_field(const profile1d::EulerProfile& profile,
                                 const Chirality& t, int nz) {
  if (nz < 2) throw std::invalid_argument("lambda_field: nz >= 2 required");
  const int n = static_cast<int>(profile.theta.size());
  if (n < 2) throw std::invalid_argument("lambda_field: profile incomplete");
  const double delta = profile.delta;
  std::vector<double> lambda(nz);
  for (int k = 0; k < nz; ++k) {
    const double u = static_cast<double>(k) / (nz - 1) * (n - 1);
    const int i0 = std::min(static_cast<int>(u), n - 2);
    const double w = u - i0;
    const double th =
        (1.0 - w) * profile.theta[i0] + w * profile.theta[i0 + 1];
    const double s = std::sin(th);
    lambda[k] = delta - t.t * t.t + 2.0 * t.t * t.t * s * s;
  }
  return lambda;
}

double h_functional(const field3d::VectorField& v,
                    const std::vector<double>& lambda_z, const Chirality& t) {
  const int nx = v.dims.nx, ny = v.dims.ny, nz = v.dims.nz;
  if (!lambda_z.empty() && static_cast<int>(lambda_z.size()) != nz)
    throw std::invalid_argument("h_functional: lambda length != nz");
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (v.at(i, j, 0).norm() > 1e-10 || v.at(i, j, nz - 1).norm() > 1e-10)
        throw std::invalid_argument(
            "h_functional: v must vanish on the z faces");

  double total = 0.0;
  for (int k = 0; k < nz; ++k) {
    const double w = (k == 0 || k == nz - 1) ? 0.5 : 1.0;
    const double lambda = lambda_z.empty() ? 0.0 : lambda_z[k];
    double acc = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Mat3 G = field_gradient_at(v, i, j, k);
        const Vec3& vv = v.at(i, j, k);
        acc += G.frobenius_sq() + 2.0 * t.t * vv.dot(curl(G)) -
               lambda * vv.norm_sq();
      }
    total += w * acc;
  }
  return total * v.dx() * v.dy() * v.dz();
}

double splitting_residual(const field3d::DirectorGrid& n,
                          const field3d::DirectorGrid& nstar,
                          const std::vector<double>& lambda_z,
                          const Chirality& t) {
  const ElasticConstants k = ElasticConstants::isotropic(1.0);
  const field3d::VectorField v = field3d::difference(n, nstar);
  const double h = h_functional(v, lambda_z, t);
  const double de =
      field3d::discrete_energy(n, k, t) - field3d::discrete_energy(nstar, k, t);
  return std::fabs(h - de);
}

}  // namespace frankmin::stability
