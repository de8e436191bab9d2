#include "frankmin/profile1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace frankmin::profile1d {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

// Splits eta at u = 0.1: the left piece is integrated in s = sqrt(u),
// which spreads the near-singular scale that develops at u = 0 when
// delta is small; the right piece is regular.
double eta_impl(double delta, const ReducedCoefficients& rc, double abs_tol) {
  const double u_cut = 0.1;
  auto integrand = [&](double u) {
    return std::sqrt(rc.f(u)) / std::sqrt(delta + rc.big_g(u));
  };
  const double left = adaptive_simpson(
      [&](double s) { return 2.0 * s * integrand(s * s); }, 0.0,
      std::sqrt(u_cut), 0.5 * abs_tol);
  const double right =
      adaptive_simpson(integrand, u_cut, kHalfPi, 0.5 * abs_tol);
  return left + right;
}

// Normalizes the stored constant: one-constant profiles carry D = C/K.
void store_constant(EulerProfile& p, const FirstIntegralConstant& c,
                    const ElasticConstants& k) {
  const double scale = k.one_constant ? k.k1 : 1.0;
  p.first_integral_constant = c.value() / scale;
  p.delta = c.delta / scale;
}

double general_delta(const EulerProfile& p, const ElasticConstants& k) {
  return k.one_constant ? p.delta * k.k1 : p.delta;
}

// The theta flow is expansive with rate ~ t sqrt(K_max/K_min): local RK4
// errors amplify by up to e^t across the cell, so large t needs internal
// substeps between stored nodes to hold the first integral.
int rk4_substeps(const ElasticConstants& k, const Chirality& t, double h) {
  const double rate =
      t.t * std::sqrt(std::max(k.k2, k.k3) / std::min(k.k1, k.k3));
  const int m = static_cast<int>(std::ceil(rate * h / 2.5e-3));
  return std::clamp(m, 1, 64);
}

// First-derivative weights on a uniform 7-point stencil (Fornberg), for
// the evaluation point at offset `pos` within the stencil.
std::array<double, 7> stencil_weights(int pos, int width) {
  // Fornberg's recursion, nodes 0..width-1, derivative order 1, point pos.
  const int n = width - 1;
  std::vector<std::vector<std::vector<double>>> d(
      2, std::vector<std::vector<double>>(width, std::vector<double>(width, 0.0)));
  const double x0 = static_cast<double>(pos);
  double c1 = 1.0;
  d[0][0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = static_cast<double>(i - j);
      c2 *= c3;
      for (int m = 0; m <= std::min(i, 1); ++m) {
        const double prev = (m > 0) ? d[m - 1][i - 1][j] : 0.0;
        d[m][i][j] = ((i - x0) * d[m][i - 1][j] - m * prev) / c3;
      }
    }
    for (int m = 0; m <= std::min(i, 1); ++m) {
      const double prev = (m > 0) ? d[m - 1][i - 1][i - 1] : 0.0;
      d[m][i][i] = c1 / c2 * (m * prev - (i - 1 - x0) * d[m][i - 1][i - 1]);
    }
    c1 = c2;
  }
  std::array<double, 7> w{};
  for (int j = 0; j < width; ++j) w[j] = d[1][n][j];
  return w;
}

struct BruteForceObjective {
  ReducedCoefficients rc;
  double h;
  double k2t2;

  double f_second(double th) const {
    return 2.0 * (rc.k.k3 - rc.k.k1) * std::cos(2.0 * th);
  }
  double g_second(double th) const {
    const double c = std::cos(th), s = std::sin(th);
    const double denom = rc.k.k2 * c * c + rc.k.k3 * s * s;
    const double dd = (rc.k.k3 - rc.k.k2) * std::sin(2.0 * th);
    const double t2 = rc.t.t * rc.t.t;
    return -rc.k.k2 * rc.k.k2 * rc.k.k3 * t2 *
           (2.0 * std::cos(2.0 * th) * denom - 2.0 * std::sin(2.0 * th) * dd) /
           (denom * denom * denom);
  }

  // Midpoint-rule discretization of int f(th) th'^2 - g(th) + K2 t^2 dz.
  double energy(const std::vector<double>& th) const {
    const int n = static_cast<int>(th.size());
    double e = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const double m = 0.5 * (th[i] + th[i + 1]);
      const double d = (th[i + 1] - th[i]) / h;
      e += h * (rc.f(m) * d * d - rc.g(m) + k2t2);
    }
    return e;
  }

  void gradient(const std::vector<double>& th, std::vector<double>& grad) const {
    const int n = static_cast<int>(th.size());
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int i = 0; i + 1 < n; ++i) {
      const double m = 0.5 * (th[i] + th[i + 1]);
      const double d = (th[i + 1] - th[i]) / h;
      const double common = 0.5 * h * (rc.f_prime(m) * d * d - rc.g_prime(m));
      const double flux = 2.0 * rc.f(m) * d;
      if (i > 0) grad[i] += common - flux;
      if (i + 1 < n - 1) grad[i + 1] += common + flux;
    }
  }

  // Tridiagonal Hessian over the free nodes 1..n-2 (diag, upper).
  void hessian(const std::vector<double>& th, std::vector<double>& diag,
               std::vector<double>& upper) const {
    const int n = static_cast<int>(th.size());
    std::fill(diag.begin(), diag.end(), 0.0);
    std::fill(upper.begin(), upper.end(), 0.0);
    for (int i = 0; i + 1 < n; ++i) {
      const double m = 0.5 * (th[i] + th[i + 1]);
      const double d = (th[i + 1] - th[i]) / h;
      const double fs = f_second(m), gs = g_second(m);
      const double curv = h * (0.25 * fs * d * d - 0.25 * gs);
      const double fd = rc.f_prime(m) * d;
      const double stiff = 2.0 * rc.f(m) / h;
      const double e_ll = curv - 2.0 * fd + stiff;
      const double e_rr = curv + 2.0 * fd + stiff;
      const double e_lr = curv - stiff;
      if (i > 0) diag[i] += e_ll;
      if (i + 1 < n - 1) diag[i + 1] += e_rr;
      if (i > 0 && i + 1 < n - 1) upper[i] += e_lr;
    }
  }
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

double eta_delta(double delta, const ElasticConstants& k, const Chirality& t,
                 double abs_tol) {
  if (!(delta > 0.0))
    throw std::domain_error("eta: C must exceed K2 t^2");
  return eta_impl(delta, ReducedCoefficients{k, t}, abs_tol);
}

double eta(double c, const ElasticConstants& k, const Chirality& t,
           double abs_tol) {
  return eta_delta(c - k.k2 * t.t * t.t, k, t, abs_tol);
}

FirstIntegralConstant solve_first_integral_constant(const ElasticConstants& k,
                                                    const Chirality& t,
                                                    double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("solve_first_integral_constant: alpha > 0");
  const double quad_tol = 1e-12;
  auto eval = [&](double delta) { return eta_delta(delta, k, t, quad_tol); };

  // eta is strictly decreasing with eta(K2 t^2) = inf, so shrinking the
  // lower offset always brackets from above and doubling from below.
  double lo = 1.0;
  int guard = 0;
  while (eval(lo) <= alpha) {
    lo *= 0.1;
    if (++guard > 280)
      throw SolverError("solve_first_integral_constant: bracket underflow");
  }
  double hi = std::max(1.0, lo * 10.0);
  guard = 0;
  while (eval(hi) >= alpha) {
    hi *= 2.0;
    if (++guard > 2000)
      throw SolverError("solve_first_integral_constant: bracket overflow");
  }

  // Bisection in log(delta): the root can sit many orders of magnitude
  // below K2 t^2, so only a relative stop is meaningful. Runs to the
  // width floor; the endpoint clamp in theta_profile inherits whatever
  // bias is left here, amplified by ~theta'(1)/h in the residual.
  double llo = std::log(lo), lhi = std::log(hi);
  for (int it = 0; it < 200 && lhi - llo > 1e-14; ++it) {
    const double mid = 0.5 * (llo + lhi);
    if (eval(std::exp(mid)) > alpha)
      llo = mid;
    else
      lhi = mid;
  }
  const double delta = std::exp(0.5 * (llo + lhi));
  return {delta, k.k2 * t.t * t.t};
}

EulerProfile theta_profile(const FirstIntegralConstant& c,
                           const ElasticConstants& k, const Chirality& t,
                           int n_nodes, double z_end) {
  if (n_nodes < 2)
    throw std::invalid_argument("theta_profile: n_nodes >= 2 required");
  if (!(c.delta > 0.0))
    throw std::domain_error("theta_profile: C must exceed K2 t^2");
  const ReducedCoefficients rc{k, t};
  auto rhs = [&](double th) {
    return std::sqrt((c.delta + rc.big_g(th)) / rc.f(th));
  };

  EulerProfile p;
  p.z.resize(n_nodes);
  p.theta.resize(n_nodes);
  const double h = z_end / (n_nodes - 1);
  const int sub = rk4_substeps(k, t, h);
  const double hs = h / sub;
  double th = 0.0;
  p.z[0] = 0.0;
  p.theta[0] = 0.0;
  for (int i = 1; i < n_nodes; ++i) {
    for (int s = 0; s < sub; ++s) {
      const double s1 = rhs(th);
      const double s2 = rhs(th + 0.5 * hs * s1);
      const double s3 = rhs(th + 0.5 * hs * s2);
      const double s4 = rhs(th + hs * s3);
      th += hs / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
    }
    p.z[i] = i * h;
    p.theta[i] = th;
  }
  p.z[n_nodes - 1] = z_end;
  p.endpoint_miss = std::fabs(p.theta[n_nodes - 1] - kHalfPi);
  if (p.endpoint_miss > 1e-6)
    throw SolverError(
        "theta_profile: theta(end) missed pi/2; inconsistent constant");
  p.theta[n_nodes - 1] = kHalfPi;
  store_constant(p, c, k);
  return p;
}

void phi_profile(EulerProfile& profile, const ElasticConstants& k,
                 const Chirality& t) {
  const int n = static_cast<int>(profile.theta.size());
  if (n < 2) throw std::invalid_argument("phi_profile: profile incomplete");
  const ReducedCoefficients rc{k, t};
  const double delta = general_delta(profile, k);
  auto th_rhs = [&](double th) {
    return std::sqrt((delta + rc.big_g(th)) / rc.f(th));
  };
  auto phi_rhs = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    return k.k2 * t.t / (k.k2 * c * c + k.k3 * s * s);
  };

  // Joint RK4 pass so phi sees consistent theta values at the half steps.
  profile.phi.assign(n, 0.0);
  const double h = profile.z.back() / (n - 1);
  const int sub = rk4_substeps(k, t, h);
  const double hs = h / sub;
  double th = 0.0, ph = 0.0;
  for (int i = 1; i < n; ++i) {
    for (int s = 0; s < sub; ++s) {
      const double a1 = th_rhs(th), b1 = phi_rhs(th);
      const double a2 = th_rhs(th + 0.5 * hs * a1),
                   b2 = phi_rhs(th + 0.5 * hs * a1);
      const double a3 = th_rhs(th + 0.5 * hs * a2),
                   b3 = phi_rhs(th + 0.5 * hs * a2);
      const double a4 = th_rhs(th + hs * a3), b4 = phi_rhs(th + hs * a3);
      th += hs / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      ph += hs / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    profile.phi[i] = ph;
  }
}

namespace {

double trapezoid_energy(const EulerProfile& p, const ElasticConstants& k,
                        const Chirality& t) {
  const ReducedCoefficients rc{k, t};
  const double delta = general_delta(p, k);
  const int n = static_cast<int>(p.theta.size());
  const double h = (p.z.back() - p.z.front()) / (n - 1);
  // Integrand via the first integral: f th'^2 - g + K2 t^2 = delta + 2 G.
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = delta + 2.0 * rc.big_g(p.theta[i]);
    sum += (i == 0 || i == n - 1) ? 0.5 * e : e;
  }
  return sum * h;
}

}  // namespace

EulerProfile minimize_1d(const ElasticConstants& k, const Chirality& t,
                         int n_nodes) {
  const FirstIntegralConstant c = solve_first_integral_constant(k, t, 1.0);
  EulerProfile p = theta_profile(c, k, t, n_nodes);
  phi_profile(p, k, t);
  p.energy_per_area = trapezoid_energy(p, k, t);
  return p;
}

double restricted_minimum(double alpha, const ElasticConstants& k,
                          const Chirality& t, int n_nodes) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("restricted_minimum: alpha > 0 required");
  if (n_nodes <= 1)
    n_nodes = std::max(1001, static_cast<int>(std::ceil(alpha * 1000)) + 1);
  const FirstIntegralConstant c = solve_first_integral_constant(k, t, alpha);
  EulerProfile p = theta_profile(c, k, t, n_nodes, alpha);
  return trapezoid_energy(p, k, t);
}

double first_integral_residual(const EulerProfile& profile,
                               const ElasticConstants& k, const Chirality& t) {
  const int n = static_cast<int>(profile.theta.size());
  if (n < 3) throw std::invalid_argument("first_integral_residual: too short");
  const ReducedCoefficients rc{k, t};
  const double delta = general_delta(profile, k);
  const double h = (profile.z.back() - profile.z.front()) / (n - 1);

  // High-order differentiation keeps the diagnostic below the solver's own
  // error instead of measuring the differencing truncation; the profiles at
  // large t carry z-derivatives that scale like t^k.
  const int width = std::min(n, 7);
  std::array<std::array<double, 7>, 7> rows{};
  for (int p = 0; p < width; ++p) rows[p] = stencil_weights(p, width);

  double worst = 0.0;
  for (int j = 1; j < n - 1; ++j) {
    const int base = std::clamp(j - width / 2, 0, n - width);
    const auto& w = rows[j - base];
    double dth = 0.0;
    for (int q = 0; q < width; ++q) dth += w[q] * profile.theta[base + q];
    dth /= h;
    const double th = profile.theta[j];
    const double res = std::fabs(rc.f(th) * dth * dth - rc.big_g(th) - delta);
    worst = std::max(worst, res);
  }
  return worst;
}

double delta_t(const EulerProfile& profile, const Chirality& t) {
  (void)t;
  const double d = profile.delta;
  if (!(d > 0.0) || d > M_PI * M_PI / 4.0 + 1e-8)
    throw SolverError("delta_t: constant outside (0, pi^2/4]");
  return d;
}

EulerProfile brute_force_1d(const ElasticConstants& k, const Chirality& t,
                            int n_nodes) {
  if (n_nodes < 3)
    throw std::invalid_argument("brute_force_1d: n_nodes >= 3 required");
  const double h = 1.0 / (n_nodes - 1);
  BruteForceObjective obj{ReducedCoefficients{k, t}, h, k.k2 * t.t * t.t};

  std::vector<double> th(n_nodes), grad(n_nodes), trial(n_nodes);
  std::vector<double> diag(n_nodes), upper(n_nodes), dl(n_nodes), du(n_nodes),
      rhs(n_nodes), dir(n_nodes);
  for (int i = 0; i < n_nodes; ++i) th[i] = kHalfPi * (i * h);
  th[n_nodes - 1] = kHalfPi;

  double energy = obj.energy(th);
  obj.gradient(th, grad);
  const double grad_tol = 1e-9;
  const int max_iter = 500;
  // Acceptance slack of a few ulps: near the minimizer the true decrease
  // sinks below the energy's rounding floor while the gradient is live.
  const double slack = 16.0 * 2.220446049250313e-16 *
                       (1.0 + std::fabs(energy) + obj.k2t2);

  // Damped Newton on the free nodes: the Hessian is tridiagonal, so the
  // step is one Thomas solve; backtracking keeps the iteration in the
  // descent regime far from the minimizer.
  double mu = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    if (inf_norm(grad) < grad_tol) {
      EulerProfile p;
      p.z.resize(n_nodes);
      for (int i = 0; i < n_nodes; ++i) p.z[i] = i * h;
      p.theta = th;
      // phi by trapezoid of the phi ODE right-hand side over the nodes.
      p.phi.assign(n_nodes, 0.0);
      auto phi_rhs = [&](double v) {
        const double c = std::cos(v), s = std::sin(v);
        return k.k2 * t.t / (k.k2 * c * c + k.k3 * s * s);
      };
      for (int i = 1; i < n_nodes; ++i)
        p.phi[i] = p.phi[i - 1] +
                   0.5 * h * (phi_rhs(th[i - 1]) + phi_rhs(th[i]));
      // Diagnostic estimate of the first-integral constant from the
      // middle segment.
      const int mid = n_nodes / 2;
      const double dm = (th[mid + 1] - th[mid]) / h;
      const double m = 0.5 * (th[mid] + th[mid + 1]);
      const double c_est = obj.rc.f(m) * dm * dm + obj.rc.g(m);
      const double scale = k.one_constant ? k.k1 : 1.0;
      p.first_integral_constant = c_est / scale;
      p.delta = (c_est - k.k2 * t.t * t.t) / scale;
      p.energy_per_area = energy;
      return p;
    }

    obj.hessian(th, diag, upper);
    bool solved = false;
    for (int attempt = 0; attempt < 60 && !solved; ++attempt) {
      // Thomas factorization of H + mu I over nodes 1..n-2; bail out to a
      // larger damping when a pivot loses positivity.
      solved = true;
      for (int i = 1; i < n_nodes - 1; ++i) {
        dl[i] = diag[i] + mu;
        rhs[i] = -grad[i];
      }
      for (int i = 1; i < n_nodes - 1; ++i) {
        if (dl[i] <= 0.0) {
          solved = false;
          break;
        }
        if (i + 1 < n_nodes - 1) {
          const double w = upper[i] / dl[i];
          dl[i + 1] = diag[i + 1] + mu - w * upper[i];
          rhs[i + 1] = -grad[i + 1] - w * rhs[i];
          du[i] = w;
        }
      }
      if (!solved) {
        mu = mu == 0.0 ? 2.0 * obj.rc.f(0.0) / h * 1e-8 : 10.0 * mu;
        continue;
      }
      dir[n_nodes - 2] = rhs[n_nodes - 2] / dl[n_nodes - 2];
      for (int i = n_nodes - 3; i >= 1; --i)
        dir[i] = rhs[i] / dl[i] - du[i] * dir[i + 1];
      // Descent direction check.
      double gtd = 0.0;
      for (int i = 1; i < n_nodes - 1; ++i) gtd += grad[i] * dir[i];
      if (!(gtd < 0.0) || !std::isfinite(gtd)) {
        solved = false;
        mu = mu == 0.0 ? 2.0 * obj.rc.f(0.0) / h * 1e-8 : 10.0 * mu;
      }
    }
    if (!solved)
      throw SolverError("brute_force_1d: Hessian regularization failed");

    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      trial = th;
      for (int i = 1; i < n_nodes - 1; ++i) trial[i] = th[i] + step * dir[i];
      const double e_trial = obj.energy(trial);
      if (e_trial <= energy + slack) {
        th.swap(trial);
        energy = e_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw SolverError("brute_force_1d: line search stalled");
    mu *= 0.25;
    if (mu < 1e-300) mu = 0.0;
    obj.gradient(th, grad);
  }
  throw SolverError("brute_force_1d: iteration budget exhausted");
}

void write_profile_csv(const EulerProfile& profile, const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"),
                                          &std::fclose);
  if (!f) throw std::runtime_error("write_profile_csv: cannot open " + path);
  std::fprintf(f.get(), "z,theta,phi\n");
  const size_t n = profile.z.size();
  for (size_t i = 0; i < n; ++i) {
    const double phi = i < profile.phi.size() ? profile.phi[i] : 0.0;
    std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", profile.z[i],
                 profile.theta[i], phi);
  }
}

void write_profile_metadata(const EulerProfile& profile,
                            const ElasticConstants& k, const Chirality& t,
                            const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"),
                                          &std::fclose);
  if (!f)
    throw std::runtime_error("write_profile_metadata: cannot open " + path);
  std::fprintf(f.get(),
               "{\n"
               "  \"k1\": %.17g,\n"
               "  \"k2\": %.17g,\n"
               "  \"k3\": %.17g,\n"
               "  \"k4\": %.17g,\n"
               "  \"t\": %.17g,\n"
               "  \"C\": %.17g,\n"
               "  \"energy_per_area\": %.17g,\n"
               "  \"n_nodes\": %zu\n"
               "}\n",
               k.k1, k.k2, k.k3, k.k4, t.t, profile.first_integral_constant,
               profile.energy_per_area, profile.z.size());
}

}  // namespace frankmin::profile1d
