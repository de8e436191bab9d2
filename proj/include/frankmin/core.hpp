#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

// Core domain types and pointwise Oseen-Frank energy densities, plus the
// small numerical utilities (adaptive quadrature, bracketing/bisection)
// shared by the solver modules.
//
// Gradient convention used everywhere: (grad n)_{ij} = d n_i / d x_j.
// With this convention the reference helix (cos(t z), sin(t z), 0) has
// n . curl n = -t, so the twist term K2 (n . curl n + t)^2 vanishes on it.

namespace frankmin {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }
  Vec3 normalized() const {
    const double n = norm();
    if (n <= 0.0 || !std::isfinite(n))
      throw std::domain_error("Vec3::normalized: zero or non-finite vector");
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Row-major 3x3 matrix; row i holds the spatial gradient of component n_i.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
  double frobenius_sq() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += m[i][j] * m[i][j];
    return s;
  }
  /// tr(G*G), the saddle-splay building block.
  double trace_of_square() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += m[i][j] * m[j][i];
    return s;
  }
};

/// Frank elastic constants. k1 (splay), k2 (twist), k3 (bend) must be
/// positive; k4 pairs with k2 in the saddle-splay term. In one-constant
/// mode k1 = k2 = k3 and k4 = 0.
struct ElasticConstants {
  double k1 = 1.0, k2 = 1.0, k3 = 1.0, k4 = 0.0;
  bool one_constant = true;

  static ElasticConstants isotropic(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument("ElasticConstants: K must be positive");
    return {k, k, k, 0.0, true};
  }

  static ElasticConstants general(double k1, double k2, double k3, double k4) {
    if (!(k1 > 0.0 && k2 > 0.0 && k3 > 0.0) || !std::isfinite(k1) ||
        !std::isfinite(k2) || !std::isfinite(k3) || !std::isfinite(k4))
      throw std::invalid_argument(
          "ElasticConstants: k1, k2, k3 must be positive and finite");
    const bool iso = (k1 == k2 && k2 == k3 && k4 == 0.0);
    return {k1, k2, k3, k4, iso};
  }
};

/// Nonnegative chirality. Negative inputs are stored as |t| with the
/// reflection flag set; the sign only picks the handedness of the helix.
struct Chirality {
  double t = 0.0;
  bool reflected = false;
};

Chirality normalize_chirality(double t_raw);

/// Cuboid cross-section half-widths; the cell height is normalized to 1.
struct DomainSpec {
  double l1 = 0.25, l2 = 0.25;

  DomainSpec() = default;
  DomainSpec(double l1_, double l2_) : l1(l1_), l2(l2_) {
    if (!(l1 > 0.0 && l2 > 0.0))
      throw std::invalid_argument("DomainSpec: half-widths must be positive");
  }

  double area() const { return 4.0 * l1 * l2; }
};

/// Unit-norm tolerance for freshly projected values.
inline constexpr double kUnitTolProjected = 1e-12;
/// Unit-norm tolerance for values read back from text files.
inline constexpr double kUnitTolFile = 1e-8;

inline double divergence(const Mat3& grad) { return grad.trace(); }

inline Vec3 curl(const Mat3& grad) {
  return {grad(2, 1) - grad(1, 2), grad(0, 2) - grad(2, 0),
          grad(1, 0) - grad(0, 1)};
}

/// Full Oseen-Frank density
///   K1 (div n)^2 + K2 (n.curl n + t)^2 + K3 |n x curl n|^2
///     + (K2 + K4) (tr(grad n^2) - (div n)^2).
double frank_density(const Vec3& n, const Mat3& grad,
                     const ElasticConstants& k, const Chirality& t);

/// One-constant density |grad n|^2 + 2 t n.curl n + t^2 (unit K).
double one_constant_density(const Vec3& n, const Mat3& grad,
                            const Chirality& t);

/// inf over [-pi, pi] of (1 - cos x)/x^2, with the removable singularity
/// at 0 valued 1/2. The function is even and decreasing on [0, pi], so the
/// infimum equals 2/pi^2; computed by a fine grid scan.
double angle_inequality_constant();

/// Adaptive Simpson quadrature to absolute tolerance. Recursion depth is
/// capped; near-singular integrands degrade gracefully instead of hanging.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 52);

/// Bisection for a strictly monotone function with a sign change on
/// [lo, hi]. Returns the midpoint of the final bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter = 200);

}  // namespace frankmin
