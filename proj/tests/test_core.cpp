#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frankmin/core.hpp"

using namespace frankmin;

namespace {

constexpr double kPi = M_PI;

Mat3 zero_grad() { return Mat3{}; }

// Exact gradient of the helix (cos(t z), sin(t z), 0).
Mat3 helix_grad(double t, double z) {
  Mat3 g;
  g(0, 2) = -t * std::sin(t * z);
  g(1, 2) = t * std::cos(t * z);
  return g;
}

std::mt19937_64 rng(20240817);

Vec3 random_unit() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double zc = u(rng);
  const double ph = kPi * u(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
  return {r * std::cos(ph), r * std::sin(ph), zc};
}

Mat3 random_mat(double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = u(rng);
  return g;
}

}  // namespace

TEST_CASE("normalize_chirality") {
  const Chirality a = normalize_chirality(2.5);
  CHECK(a.t == 2.5);
  CHECK_FALSE(a.reflected);

  const Chirality b = normalize_chirality(-2.5);
  CHECK(b.t == 2.5);
  CHECK(b.reflected);

  const Chirality c = normalize_chirality(0.0);
  CHECK(c.t == 0.0);
  CHECK_FALSE(c.reflected);

  CHECK_THROWS_AS(normalize_chirality(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(normalize_chirality(INFINITY), std::invalid_argument);
}

TEST_CASE("elastic constants invariants") {
  CHECK_THROWS_AS(ElasticConstants::general(0.0, 1.0, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ElasticConstants::general(1.0, -1.0, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ElasticConstants::isotropic(-2.0), std::invalid_argument);
  const auto iso = ElasticConstants::isotropic(2.0);
  CHECK(iso.one_constant);
  CHECK(iso.k1 == 2.0);
  CHECK(iso.k4 == 0.0);
  const auto gen = ElasticConstants::general(1.0, 2.0, 3.0, 0.5);
  CHECK_FALSE(gen.one_constant);
  // Equal constants with zero k4 collapse to the one-constant flag.
  CHECK(ElasticConstants::general(1.5, 1.5, 1.5, 0.0).one_constant);
}

TEST_CASE("frank_density spec examples") {
  const Chirality t{1.3, false};
  const auto k = ElasticConstants::general(1.0, 2.0, 3.0, 0.7);

  // Constant field: only the twist offset survives.
  CHECK(frank_density({0, 0, 1}, zero_grad(), k, t) ==
        doctest::Approx(k.k2 * t.t * t.t).epsilon(1e-14));

  // Matched helix at one-constant K has zero density.
  const auto iso = ElasticConstants::isotropic(1.0);
  for (double z : {0.0, 0.3, 0.8}) {
    const Chirality th{2.0, false};
    const Vec3 n{std::cos(th.t * z), std::sin(th.t * z), 0.0};
    CHECK(std::fabs(frank_density(n, helix_grad(th.t, z), iso, th)) < 1e-14);
  }

  // n = e1 with only d n3/d z = a: splay plus twist offset.
  const double a = 0.45;
  Mat3 g;
  g(2, 2) = a;
  CHECK(frank_density({1, 0, 0}, g, k, t) ==
        doctest::Approx(k.k1 * a * a + k.k2 * t.t * t.t).epsilon(1e-14));

  // Same density from a finite-difference gradient of the linear field
  // n(x) = e1 + a z e3, evaluated on the z = 0 plane where n = e1.
  const double h = 1e-3;
  Mat3 fd;
  for (int c = 0; c < 3; ++c) {
    const Vec3 np{1.0, 0.0, a * h};
    const Vec3 nm{1.0, 0.0, -a * h};
    fd(c, 2) = (np[c] - nm[c]) / (2.0 * h);
  }
  CHECK(frank_density({1, 0, 0}, fd, k, t) ==
        doctest::Approx(k.k1 * a * a + k.k2 * t.t * t.t).epsilon(1e-12));
}

TEST_CASE("one_constant_density spec examples") {
  CHECK(one_constant_density({0, 0, 1}, zero_grad(), {1.0, false}) ==
        doctest::Approx(1.0).epsilon(1e-15));

  const Chirality t{2.0, false};
  const Vec3 n{std::cos(t.t * 0.4), std::sin(t.t * 0.4), 0.0};
  CHECK(std::fabs(one_constant_density(n, helix_grad(t.t, 0.4), t)) < 1e-14);

  // theta = pi z / 2 profile at t = 0: |grad n|^2 = theta'^2.
  const double z = 0.37;
  const double th = kPi * z / 2.0;
  Mat3 g;
  g(0, 2) = -kPi / 2.0 * std::sin(th);
  g(2, 2) = kPi / 2.0 * std::cos(th);
  CHECK(one_constant_density({std::cos(th), 0.0, std::sin(th)}, g,
                             {0.0, false}) ==
        doctest::Approx(kPi * kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("one-constant Frank density equals the reduced form") {
  // The saddle-splay contribution is exactly what reconciles the two
  // expressions: for |n| = 1 they agree for arbitrary gradient matrices.
  const auto iso = ElasticConstants::isotropic(1.7);
  const Chirality t{0.9, false};
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 n = random_unit();
    const Mat3 g = random_mat(2.0);
    const double a = frank_density(n, g, iso, t);
    const double b = iso.k1 * one_constant_density(n, g, t);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("saddle-splay term vanishes for one-variable gradients") {
  for (int trial = 0; trial < 100; ++trial) {
    Mat3 g;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 3; ++i) g(i, 2) = u(rng);  // z-column only
    const double saddle = g.trace_of_square() - g.trace() * g.trace();
    CHECK(saddle == 0.0);
  }
}

TEST_CASE("curl bound |curl v| <= sqrt(2) |grad v|") {
  for (int trial = 0; trial < 500; ++trial) {
    const Mat3 g = random_mat(3.0);
    CHECK(curl(g).norm_sq() <= 2.0 * g.frobenius_sq() + 1e-13);
  }
}

TEST_CASE("angle inequality constant") {
  const double c = angle_inequality_constant();
  const double exact = 2.0 / (kPi * kPi);
  CHECK(std::fabs(c - exact) < 1e-9);
  CHECK(c > 0.0);
  CHECK(c <= 0.5);

  // |n1 - n2|^2 >= C |theta1 - theta2|^2 on random unit pairs.
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec3 n1 = random_unit();
    const Vec3 n2 = random_unit();
    const double th1 = std::asin(std::clamp(n1.z, -1.0, 1.0));
    const double th2 = std::asin(std::clamp(n2.z, -1.0, 1.0));
    CHECK((n1 - n2).norm_sq() >= c * (th1 - th2) * (th1 - th2) - 1e-12);
  }
}

TEST_CASE("quadrature and bisection utilities") {
  const double s = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                                    kPi, 1e-12);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-11));

  const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0,
                          1e-14);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0, 1e-12),
                  std::invalid_argument);
}
