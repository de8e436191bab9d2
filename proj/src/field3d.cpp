#include "frankmin/field3d.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

namespace frankmin::field3d {

namespace {

constexpr double kPi = M_PI;

void run_slabs(int nz, const std::function<void(int, int)>& body) {
  const int threads = std::min(thread_count(), nz);
  if (threads <= 1) {
    body(0, nz);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (nz + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int k0 = t * chunk;
    const int k1 = std::min(nz, k0 + chunk);
    if (k0 >= k1) break;
    pool.emplace_back(body, k0, k1);
  }
  for (auto& th : pool) th.join();
}

template <typename Field>
Mat3 stencil_gradient(const Field& g, int i, int j, int k) {
  const int nx = g.dims.nx, ny = g.dims.ny, nz = g.dims.nz;
  const int ip = i + 1 == nx ? 0 : i + 1;
  const int im = i == 0 ? nx - 1 : i - 1;
  const int jp = j + 1 == ny ? 0 : j + 1;
  const int jm = j == 0 ? ny - 1 : j - 1;
  const Vec3 dxv = (g.at(ip, j, k) - g.at(im, j, k)) * (0.5 / g.dx());
  const Vec3 dyv = (g.at(i, jp, k) - g.at(i, jm, k)) * (0.5 / g.dy());
  // z rows form a summation-by-parts pair with the trapezoid weights:
  // one-sided first-order at the faces, centered inside. Higher-order
  // face rows break the pairing and let minimizers buy O(dz) spurious
  // energy in a boundary layer.
  Vec3 dzv;
  const double cz = 0.5 / g.dz();
  if (k == 0) {
    dzv = (g.at(i, j, 1) - g.at(i, j, 0)) * (2.0 * cz);
  } else if (k == nz - 1) {
    dzv = (g.at(i, j, nz - 1) - g.at(i, j, nz - 2)) * (2.0 * cz);
  } else {
    dzv = (g.at(i, j, k + 1) - g.at(i, j, k - 1)) * cz;
  }
  Mat3 G;
  for (int c = 0; c < 3; ++c) {
    G(c, 0) = dxv[c];
    G(c, 1) = dyv[c];
    G(c, 2) = dzv[c];
  }
  return G;
}

double trapezoid_weight(int k, int nz) {
  return (k == 0 || k == nz - 1) ? 0.5 : 1.0;
}

/// skew(v)_{ab} = -eps_{abc} v_c; equals d(n . curl n)/dG with v = n.
Mat3 skew(const Vec3& v) {
  Mat3 s;
  s(0, 1) = -v.z;
  s(0, 2) = v.y;
  s(1, 0) = v.z;
  s(1, 2) = -v.x;
  s(2, 0) = -v.y;
  s(2, 1) = v.x;
  return s;
}

double density_value(const Vec3& n, const Mat3& G, const ElasticConstants& k,
                     const Chirality& t) {
  if (k.one_constant) return k.k1 * one_constant_density(n, G, t);
  return frank_density(n, G, k, t);
}

struct DensityDerivs {
  Vec3 dwdn;
  Mat3 dwdG;
};

DensityDerivs density_derivs(const Vec3& n, const Mat3& G,
                             const ElasticConstants& k, const Chirality& t) {
  DensityDerivs d;
  const Vec3 c = curl(G);
  if (k.one_constant) {
    d.dwdn = c * (2.0 * t.t * k.k1);
    const Mat3 sk = skew(n);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        d.dwdG(a, b) = k.k1 * (2.0 * G(a, b) + 2.0 * t.t * sk(a, b));
    return d;
  }
  const double s = divergence(G);
  const double tw = n.dot(c) + t.t;
  const Vec3 bend = n.cross(c);
  d.dwdn = c * (2.0 * k.k2 * tw) + c.cross(bend) * (2.0 * k.k3);
  const Mat3 skn = skew(n);
  const Mat3 skb = skew(bend.cross(n));
  const double k24 = k.k2 + k.k4;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double v = 2.0 * k.k2 * tw * skn(a, b) + 2.0 * k.k3 * skb(a, b) +
                 k24 * 2.0 * G(b, a);
      if (a == b) v += 2.0 * k.k1 * s - k24 * 2.0 * s;
      d.dwdG(a, b) = v;
    }
  return d;
}

struct TrigMode {
  int kx, ky, kz;
  int x_kind, y_kind;  // 0 = cos, 1 = sin
  Vec3 amp;
};

double unit_draw(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
}

// Mode list depends only on the seed and caps, never on the grid, so the
// same seed defines one continuum field across resolutions. `norm` bounds
// the pointwise magnitude of the summed field by 1.
std::vector<TrigMode> sample_modes(std::uint64_t seed, int kxy_max,
                                   int kz_max, double decay_pow,
                                   double& norm) {
  std::mt19937_64 eng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  std::vector<TrigMode> modes;
  norm = 0.0;
  for (int kx = 0; kx <= kxy_max; ++kx)
    for (int xk = 0; xk < (kx == 0 ? 1 : 2); ++xk)
      for (int ky = 0; ky <= kxy_max; ++ky)
        for (int yk = 0; yk < (ky == 0 ? 1 : 2); ++yk)
          for (int kz = 1; kz <= kz_max; ++kz) {
            const double decay =
                std::pow(1.0 + kx * kx + ky * ky + kz * kz, -decay_pow);
            TrigMode m{kx, ky, kz, xk, yk,
                       Vec3{unit_draw(eng), unit_draw(eng), unit_draw(eng)} *
                           decay};
            norm += std::sqrt(m.amp.norm_sq());
            modes.push_back(m);
          }
  return modes;
}

// Evaluates the summed mode field at every node via separable per-axis
// factor tables.
std::vector<Vec3> eval_mode_field(const std::vector<TrigMode>& modes,
                                  const GridDims& dims,
                                  const DomainSpec& dom) {
  std::vector<Vec3> field(static_cast<std::size_t>(dims.nx) * dims.ny *
                          dims.nz);
  std::vector<double> fx(dims.nx), fy(dims.ny), fz(dims.nz);
  const double dx = 2.0 * dom.l1 / dims.nx;
  const double dy = 2.0 * dom.l2 / dims.ny;
  for (const auto& m : modes) {
    for (int i = 0; i < dims.nx; ++i) {
      const double ax = kPi * m.kx * (-dom.l1 + i * dx) / dom.l1;
      fx[i] = m.x_kind == 0 ? std::cos(ax) : std::sin(ax);
    }
    for (int j = 0; j < dims.ny; ++j) {
      const double ay = kPi * m.ky * (-dom.l2 + j * dy) / dom.l2;
      fy[j] = m.y_kind == 0 ? std::cos(ay) : std::sin(ay);
    }
    for (int k = 0; k < dims.nz; ++k)
      fz[k] = std::sin(m.kz * kPi * k / (dims.nz - 1));
    std::size_t p = 0;
    for (int k = 0; k < dims.nz; ++k)
      for (int j = 0; j < dims.ny; ++j) {
        const double fyz = fy[j] * fz[k];
        for (int i = 0; i < dims.nx; ++i, ++p)
          field[p] += m.amp * (fx[i] * fyz);
      }
  }
  return field;
}

void snap_boundaries(DirectorGrid& g) {
  const Vec3 bot = bottom_value(g.bc);
  const Vec3 top = top_value(g.bc);
  for (int j = 0; j < g.dims.ny; ++j)
    for (int i = 0; i < g.dims.nx; ++i) {
      g.at(i, j, 0) = bot;
      g.at(i, j, g.dims.nz - 1) = top;
    }
}

void require_dims(const GridDims& d) {
  if (d.nx < 2 || d.ny < 2 || d.nz < 3)
    throw std::invalid_argument("grid dims: need nx, ny >= 2 and nz >= 3");
}

}  // namespace

Vec3 bottom_value(BoundaryCondition bc) {
  return bc == BoundaryCondition::Frustrated ? Vec3{1.0, 0.0, 0.0}
                                             : Vec3{0.0, 0.0, 1.0};
}

Vec3 top_value(BoundaryCondition) { return {0.0, 0.0, 1.0}; }

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Frustrated ? "frustrated" : "homeotropic";
}

BoundaryCondition bc_from_string(const std::string& s) {
  if (s == "frustrated") return BoundaryCondition::Frustrated;
  if (s == "homeotropic") return BoundaryCondition::Homeotropic;
  throw std::invalid_argument("unknown boundary condition: " + s);
}

void DirectorGrid::validate(double unit_tol) const {
  if (values.size() != static_cast<std::size_t>(dims.nx) * dims.ny * dims.nz)
    throw std::invalid_argument("DirectorGrid: value count mismatch");
  for (const Vec3& v : values)
    if (std::fabs(v.norm() - 1.0) > unit_tol)
      throw std::invalid_argument("DirectorGrid: non-unit director value");
  const Vec3 bot = bottom_value(bc);
  const Vec3 top = top_value(bc);
  for (int j = 0; j < dims.ny; ++j)
    for (int i = 0; i < dims.nx; ++i) {
      if ((at(i, j, 0) - bot).norm() != 0.0 ||
          (at(i, j, dims.nz - 1) - top).norm() != 0.0)
        throw std::invalid_argument("DirectorGrid: boundary layer mismatch");
    }
}

DirectorGrid base_grid(const GridDims& dims, const DomainSpec& domain,
                       BoundaryCondition bc) {
  require_dims(dims);
  DirectorGrid g{dims, domain, bc, {}};
  g.values.resize(static_cast<std::size_t>(dims.nx) * dims.ny * dims.nz);
  for (int k = 0; k < dims.nz; ++k) {
    Vec3 v;
    if (bc == BoundaryCondition::Homeotropic) {
      v = {0.0, 0.0, 1.0};
    } else {
      const double th = 0.5 * kPi * g.z_of(k);
      v = {std::cos(th), 0.0, std::sin(th)};
    }
    for (int j = 0; j < dims.ny; ++j)
      for (int i = 0; i < dims.nx; ++i) g.at(i, j, k) = v;
  }
  snap_boundaries(g);
  return g;
}

DirectorGrid embed_profile(const profile1d::EulerProfile& profile,
                           const GridDims& dims, const DomainSpec& domain,
                           BoundaryCondition bc) {
  require_dims(dims);
  const int n = static_cast<int>(profile.theta.size());
  if (n < 2 || profile.phi.size() != profile.theta.size())
    throw std::invalid_argument("embed_profile: profile incomplete");
  DirectorGrid g{dims, domain, bc, {}};
  g.values.resize(static_cast<std::size_t>(dims.nx) * dims.ny * dims.nz);
  for (int k = 0; k < dims.nz; ++k) {
    const double u = g.z_of(k) * (n - 1);
    const int i0 = std::min(static_cast<int>(u), n - 2);
    const double w = u - i0;
    const double th = (1.0 - w) * profile.theta[i0] + w * profile.theta[i0 + 1];
    const double ph = (1.0 - w) * profile.phi[i0] + w * profile.phi[i0 + 1];
    const Vec3 v{std::cos(ph) * std::cos(th), std::sin(ph) * std::cos(th),
                 std::sin(th)};
    for (int j = 0; j < dims.ny; ++j)
      for (int i = 0; i < dims.nx; ++i) g.at(i, j, k) = v;
  }
  snap_boundaries(g);
  return g;
}

double discrete_energy(const DirectorGrid& grid, const ElasticConstants& k,
                       const Chirality& t) {
  require_dims(grid.dims);
  const int nx = grid.dims.nx, ny = grid.dims.ny, nz = grid.dims.nz;
  std::vector<double> slab(nz, 0.0);
  run_slabs(nz, [&](int k0, int k1) {
    for (int kz = k0; kz < k1; ++kz) {
      double acc = 0.0;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const Mat3 G = stencil_gradient(grid, i, j, kz);
          acc += density_value(grid.at(i, j, kz), G, k, t);
        }
      slab[kz] = acc * trapezoid_weight(kz, nz);
    }
  });
  double total = 0.0;
  for (int kz = 0; kz < nz; ++kz) total += slab[kz];
  return total * grid.dx() * grid.dy() * grid.dz();
}

std::vector<Vec3> discrete_gradient(const DirectorGrid& grid,
                                    const ElasticConstants& k,
                                    const Chirality& t) {
  require_dims(grid.dims);
  const int nx = grid.dims.nx, ny = grid.dims.ny, nz = grid.dims.nz;
  const std::size_t n = grid.node_count();
  const double dv = grid.dx() * grid.dy() * grid.dz();

  // Pass 1: weighted density derivatives at every node.
  std::vector<Vec3> a(n), qx(n), qy(n), qz(n);
  run_slabs(nz, [&](int k0, int k1) {
    for (int kz = k0; kz < k1; ++kz) {
      const double cq = dv * trapezoid_weight(kz, nz);
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const std::size_t p = grid.idx(i, j, kz);
          const Mat3 G = stencil_gradient(grid, i, j, kz);
          const DensityDerivs dd = density_derivs(grid.values[p], G, k, t);
          a[p] = dd.dwdn * cq;
          for (int c = 0; c < 3; ++c) {
            qx[p][c] = cq * dd.dwdG(c, 0);
            qy[p][c] = cq * dd.dwdG(c, 1);
            qz[p][c] = cq * dd.dwdG(c, 2);
          }
        }
    }
  });

  // Pass 2: transpose stencils gathered per node, then tangent projection.
  std::vector<Vec3> grad(n);
  const double cx = 0.5 / grid.dx();
  const double cy = 0.5 / grid.dy();
  const double cz = 0.5 / grid.dz();
  run_slabs(nz, [&](int k0, int k1) {
    for (int kz = k0; kz < k1; ++kz) {
      if (kz == 0 || kz == nz - 1) continue;  // boundary layers stay zero
      for (int j = 0; j < ny; ++j) {
        const int jp = j + 1 == ny ? 0 : j + 1;
        const int jm = j == 0 ? ny - 1 : j - 1;
        for (int i = 0; i < nx; ++i) {
          const int ip = i + 1 == nx ? 0 : i + 1;
          const int im = i == 0 ? nx - 1 : i - 1;
          const std::size_t p = grid.idx(i, j, kz);
          Vec3 gsum = a[p];
          gsum += (qx[grid.idx(im, j, kz)] - qx[grid.idx(ip, j, kz)]) * cx;
          gsum += (qy[grid.idx(i, jm, kz)] - qy[grid.idx(i, jp, kz)]) * cy;
          // Transpose of the z stencil (centered interior rows, one-sided
          // first-order rows at the faces).
          if (kz - 1 >= 1) gsum += qz[grid.idx(i, j, kz - 1)] * cz;
          if (kz + 1 <= nz - 2) gsum += qz[grid.idx(i, j, kz + 1)] * (-cz);
          if (kz == 1) gsum += qz[grid.idx(i, j, 0)] * (2.0 * cz);
          if (kz == nz - 2) gsum += qz[grid.idx(i, j, nz - 1)] * (-2.0 * cz);
          const Vec3& nvec = grid.values[p];
          grad[p] = gsum - nvec * gsum.dot(nvec);
        }
      }
    }
  });
  return grad;
}

namespace {

double grad_inf_norm(const std::vector<Vec3>& g) {
  double m = 0.0;
  for (const Vec3& v : g) m = std::max(m, v.norm());
  return m;
}

}  // namespace

std::pair<DirectorGrid, RelaxationReport> relax(const DirectorGrid& start,
                                                const ElasticConstants& k,
                                                const Chirality& t,
                                                const RelaxOptions& opts) {
  DirectorGrid cur = start;
  DirectorGrid cand = start;
  const std::size_t per_layer =
      static_cast<std::size_t>(cur.dims.nx) * cur.dims.ny;

  RelaxationReport rep;
  double energy = discrete_energy(cur, k, t);
  rep.energy_trace.push_back(energy);
  std::vector<Vec3> grad = discrete_gradient(cur, k, t);
  double gnorm = grad_inf_norm(grad);

  std::vector<Vec3> prev_vals, prev_grad;
  double step = opts.step_init;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (gnorm < opts.grad_tol) {
      rep.converged = true;
      break;
    }
    if (!prev_vals.empty()) {
      // Barzilai-Borwein trial step from the last accepted move; the
      // backtracking loop below keeps the descent monotone. Nonpositive
      // curvature along the move means the model decreases along -g for
      // any step, so trial big and let the halvings veto: this is what
      // carries the iterate off saddle configurations (the unwound state
      // above t = pi) at a useful rate.
      double ss = 0.0, sy = 0.0;
      for (std::size_t p = per_layer; p < cur.values.size() - per_layer; ++p) {
        const Vec3 s = cur.values[p] - prev_vals[p];
        const Vec3 y = grad[p] - prev_grad[p];
        ss += s.dot(s);
        sy += s.dot(y);
      }
      if (sy > 0.0 && std::isfinite(ss / sy))
        step = std::min(std::max(ss / sy, 1e-14), 1e8);
      else
        step = std::min(100.0 * std::max(step, opts.step_init), 1e6);
    }

    prev_vals = cur.values;
    prev_grad = grad;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      for (std::size_t p = 0; p < cur.values.size(); ++p) {
        if (p < per_layer || p >= cur.values.size() - per_layer) {
          cand.values[p] = cur.values[p];
          continue;
        }
        const Vec3 v = cur.values[p] - grad[p] * step;
        const double nv = v.norm();
        cand.values[p] = nv > 1e-300 ? v * (1.0 / nv) : cur.values[p];
      }
      const double e_cand = discrete_energy(cand, k, t);
      if (e_cand <= energy) {  // equality keeps progress below the energy
        cur.values.swap(cand.values);  // rounding floor
        energy = e_cand;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    rep.iterations = it + 1;
    if (!accepted) break;  // stalled at line-search resolution
    rep.energy_trace.push_back(energy);
    grad = discrete_gradient(cur, k, t);
    gnorm = grad_inf_norm(grad);
  }
  if (gnorm < opts.grad_tol) rep.converged = true;
  rep.final_gradient_norm = gnorm;
  return {std::move(cur), std::move(rep)};
}

DirectorGrid random_perturbation(const DirectorGrid& grid, double amplitude,
                                 std::uint64_t seed) {
  if (amplitude < 0.0)
    throw std::invalid_argument("random_perturbation: amplitude >= 0");
  DirectorGrid out = grid;
  if (amplitude == 0.0) return out;

  double norm = 0.0;
  // The third z harmonic matters: between t = pi and 3 pi^2 / 8 the
  // unwound state's unstable directions have no kz <= 2 representation.
  const auto modes = sample_modes(seed, 3, 3, 1.0, norm);
  const double scale = amplitude / norm;
  const auto field = eval_mode_field(modes, grid.dims, grid.domain);
  for (int k = 1; k < grid.dims.nz - 1; ++k)
    for (int j = 0; j < grid.dims.ny; ++j)
      for (int i = 0; i < grid.dims.nx; ++i) {
        const Vec3 v = field[grid.idx(i, j, k)] * scale;
        const Vec3& n = grid.at(i, j, k);
        const Vec3 tangent = v - n * v.dot(n);
        out.at(i, j, k) = (n + tangent).normalized();
      }
  snap_boundaries(out);
  return out;
}

DirectorGrid smooth_periodic_sample(std::uint64_t seed, const GridDims& dims,
                                    const DomainSpec& domain,
                                    BoundaryCondition bc, double amplitude) {
  require_dims(dims);
  DirectorGrid g = base_grid(dims, domain, bc);
  if (amplitude == 0.0) return g;

  double norm = 0.0;
  const auto modes = sample_modes(seed, 2, 2, 2.0, norm);
  const double scale = amplitude / norm;
  const auto field = eval_mode_field(modes, dims, domain);
  for (int k = 1; k < dims.nz - 1; ++k)
    for (int j = 0; j < dims.ny; ++j)
      for (int i = 0; i < dims.nx; ++i) {
        const Vec3 v = field[g.idx(i, j, k)] * scale;
        const Vec3& b = g.at(i, j, k);
        const Vec3 tangent = v - b * v.dot(b);
        g.at(i, j, k) = (b + tangent).normalized();
      }
  snap_boundaries(g);
  return g;
}

double el_residual(const DirectorGrid& grid, const Chirality& t) {
  require_dims(grid.dims);
  const int nx = grid.dims.nx, ny = grid.dims.ny, nz = grid.dims.nz;
  const double ix2 = 1.0 / (grid.dx() * grid.dx());
  const double iy2 = 1.0 / (grid.dy() * grid.dy());
  const double iz2 = 1.0 / (grid.dz() * grid.dz());
  std::vector<double> slab(nz, 0.0);
  run_slabs(nz, [&](int k0, int k1) {
    for (int kz = std::max(k0, 1); kz < std::min(k1, nz - 1); ++kz) {
      double worst = 0.0;
      for (int j = 0; j < ny; ++j) {
        const int jp = j + 1 == ny ? 0 : j + 1;
        const int jm = j == 0 ? ny - 1 : j - 1;
        for (int i = 0; i < nx; ++i) {
          const int ip = i + 1 == nx ? 0 : i + 1;
          const int im = i == 0 ? nx - 1 : i - 1;
          const Vec3& n = grid.at(i, j, kz);
          const Vec3 lap =
              (grid.at(ip, j, kz) + grid.at(im, j, kz) - n * 2.0) * ix2 +
              (grid.at(i, jp, kz) + grid.at(i, jm, kz) - n * 2.0) * iy2 +
              (grid.at(i, j, kz + 1) + grid.at(i, j, kz - 1) - n * 2.0) * iz2;
          const Mat3 G = stencil_gradient(grid, i, j, kz);
          const Vec3 c = curl(G);
          const double mult = G.frobenius_sq() + 2.0 * t.t * n.dot(c);
          const Vec3 r = lap - c * (2.0 * t.t) + n * mult;
          worst = std::max(worst, r.norm());
        }
      }
      slab[kz] = worst;
    }
  });
  double m = 0.0;
  for (double v : slab) m = std::max(m, v);
  return m;
}

double saddle_splay_integral(const DirectorGrid& grid) {
  require_dims(grid.dims);
  const int nx = grid.dims.nx, ny = grid.dims.ny, nz = grid.dims.nz;
  std::vector<double> slab(nz, 0.0);
  run_slabs(nz, [&](int k0, int k1) {
    for (int kz = k0; kz < k1; ++kz) {
      double acc = 0.0;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const Mat3 G = stencil_gradient(grid, i, j, kz);
          const double div = divergence(G);
          acc += G.trace_of_square() - div * div;
        }
      slab[kz] = acc * trapezoid_weight(kz, nz);
    }
  });
  double total = 0.0;
  for (int kz = 0; kz < nz; ++kz) total += slab[kz];
  return total * grid.dx() * grid.dy() * grid.dz();
}

Mat3 field_gradient_at(const VectorField& v, int i, int j, int k) {
  return stencil_gradient(v, i, j, k);
}

VectorField difference(const DirectorGrid& a, const DirectorGrid& b) {
  if (a.dims.nx != b.dims.nx || a.dims.ny != b.dims.ny ||
      a.dims.nz != b.dims.nz)
    throw std::invalid_argument("difference: dimension mismatch");
  VectorField v{a.dims, a.domain, {}};
  v.values.resize(a.values.size());
  for (std::size_t p = 0; p < a.values.size(); ++p)
    v.values[p] = a.values[p] - b.values[p];
  return v;
}

void save_grid(const DirectorGrid& grid, const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"),
                                          &std::fclose);
  if (!f) throw std::runtime_error("save_grid: cannot open " + path);
  std::fprintf(f.get(), "OFGRID 1\n");
  std::fprintf(f.get(), "%d %d %d %.17g %.17g %s\n", grid.dims.nx,
               grid.dims.ny, grid.dims.nz, grid.domain.l1, grid.domain.l2,
               to_string(grid.bc).c_str());
  for (int k = 0; k < grid.dims.nz; ++k)
    for (int j = 0; j < grid.dims.ny; ++j)
      for (int i = 0; i < grid.dims.nx; ++i) {
        const Vec3& v = grid.at(i, j, k);
        std::fprintf(f.get(), "%d %d %d %.17g %.17g %.17g\n", i, j, k, v.x,
                     v.y, v.z);
      }
}

DirectorGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_grid: cannot open " + path);
  std::string magic, version;
  in >> magic >> version;
  if (magic != "OFGRID" || version != "1")
    throw std::runtime_error("load_grid: not an OFGRID 1 file");
  GridDims dims;
  double l1 = 0.0, l2 = 0.0;
  std::string bcs;
  in >> dims.nx >> dims.ny >> dims.nz >> l1 >> l2 >> bcs;
  if (!in) throw std::runtime_error("load_grid: malformed header");
  require_dims(dims);
  DirectorGrid g{dims, DomainSpec{l1, l2}, bc_from_string(bcs), {}};
  g.values.resize(static_cast<std::size_t>(dims.nx) * dims.ny * dims.nz);
  const std::size_t n = g.values.size();
  for (std::size_t r = 0; r < n; ++r) {
    int i = 0, j = 0, k = 0;
    Vec3 v;
    in >> i >> j >> k >> v.x >> v.y >> v.z;
    if (!in) throw std::runtime_error("load_grid: truncated value table");
    if (i < 0 || i >= dims.nx || j < 0 || j >= dims.ny || k < 0 ||
        k >= dims.nz)
      throw std::runtime_error("load_grid: node index out of range");
    if (std::fabs(v.norm() - 1.0) > kUnitTolFile)
      throw std::runtime_error("load_grid: non-unit director value");
    g.at(i, j, k) = v.normalized();
  }
  // Boundary layers must match the declared condition, then are snapped.
  const Vec3 bot = bottom_value(g.bc);
  const Vec3 top = top_value(g.bc);
  for (int j = 0; j < dims.ny; ++j)
    for (int i = 0; i < dims.nx; ++i) {
      if ((g.at(i, j, 0) - bot).norm() > kUnitTolFile ||
          (g.at(i, j, dims.nz - 1) - top).norm() > kUnitTolFile)
        throw std::runtime_error("load_grid: boundary layer mismatch");
    }
  snap_boundaries(g);
  return g;
}

int thread_count() {
  static const int n = [] {
    if (const char* env = std::getenv("FRANKMIN_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1 && v <= 256) return static_cast<int>(v);
      return 1;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
  }();
  return n;
}

}  // namespace frankmin::field3d
