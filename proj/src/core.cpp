#include "frankmin/core.hpp"

#include <cmath>

namespace frankmin {

Chirality normalize_chirality(double t_raw) {
  if (!std::isfinite(t_raw))
    throw std::invalid_argument("normalize_chirality: non-finite input");
  return {std::fabs(t_raw), t_raw < 0.0};
}

double frank_density(const Vec3& n, const Mat3& grad,
                     const ElasticConstants& k, const Chirality& t) {
  const double div = divergence(grad);
  const Vec3 c = curl(grad);
  const double twist = n.dot(c) + t.t;
  const Vec3 bend = n.cross(c);
  const double saddle = grad.trace_of_square() - div * div;
  return k.k1 * div * div + k.k2 * twist * twist + k.k3 * bend.norm_sq() +
         (k.k2 + k.k4) * saddle;
}

double one_constant_density(const Vec3& n, const Mat3& grad,
                            const Chirality& t) {
  return grad.frobenius_sq() + 2.0 * t.t * n.dot(curl(grad)) + t.t * t.t;
}

double angle_inequality_constant() {
  // Even function: scan [0, pi] only. Grid includes the endpoint pi where
  // the infimum (1 - cos(pi))/pi^2 = 2/pi^2 sits.
  const int n = 1000000;
  double best = 0.5;  // limit value at x = 0
  for (int i = 1; i <= n; ++i) {
    const double x = M_PI * static_cast<double>(i) / n;
    const double v = (1.0 - std::cos(x)) / (x * x);
    if (v < best) best = v;
  }
  return best;
}

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace frankmin
