#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frankmin/core.hpp"
#include "frankmin/profile1d.hpp"

// Fully three-dimensional sphere-valued director fields on the cuboid
// (-L1,L1) x (-L2,L2) x (0,1), discrete Oseen-Frank energy, and projected
// gradient descent.
//
// Stencils: centered second-order differences with periodic wrap in x and
// y; in z, trapezoid quadrature weights paired with centered interior
// rows and one-sided first-order face rows (a summation-by-parts pair,
// which keeps discrete minimizers free of spurious face layers). The
// discrete gradient is the exact derivative of the discrete energy, so
// the two must stay stencil-for-stencil in sync.

namespace frankmin::field3d {

enum class BoundaryCondition { Frustrated, Homeotropic };

/// Dirichlet data: Frustrated pins e1 at z=0 and e3 at z=1; Homeotropic
/// pins e3 on both faces. Both are x/y-periodic.
Vec3 bottom_value(BoundaryCondition bc);
Vec3 top_value(BoundaryCondition bc);
std::string to_string(BoundaryCondition bc);
BoundaryCondition bc_from_string(const std::string& s);

struct GridDims {
  int nx = 16, ny = 16, nz = 33;
};

/// Director field sampled at x_i = -L1 + i (2 L1 / nx) (no duplicated
/// periodic seam), z_k = k / (nz - 1) inclusive of both faces. Storage is
/// row-major with i fastest.
struct DirectorGrid {
  GridDims dims;
  DomainSpec domain;
  BoundaryCondition bc = BoundaryCondition::Frustrated;
  std::vector<Vec3> values;

  std::size_t idx(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims.nx) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(dims.ny) * static_cast<std::size_t>(k));
  }
  Vec3& at(int i, int j, int k) { return values[idx(i, j, k)]; }
  const Vec3& at(int i, int j, int k) const { return values[idx(i, j, k)]; }

  double dx() const { return 2.0 * domain.l1 / dims.nx; }
  double dy() const { return 2.0 * domain.l2 / dims.ny; }
  double dz() const { return 1.0 / (dims.nz - 1); }
  double z_of(int k) const { return static_cast<double>(k) / (dims.nz - 1); }
  std::size_t node_count() const { return values.size(); }

  /// Checks unit norms (tolerance `unit_tol`) and exact boundary layers.
  void validate(double unit_tol = kUnitTolFile) const;
};

/// Plain (not sphere-valued) field on the same grid layout; used for
/// difference fields n - n*.
struct VectorField {
  GridDims dims;
  DomainSpec domain;
  std::vector<Vec3> values;

  std::size_t idx(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims.nx) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(dims.ny) * static_cast<std::size_t>(k));
  }
  Vec3& at(int i, int j, int k) { return values[idx(i, j, k)]; }
  const Vec3& at(int i, int j, int k) const { return values[idx(i, j, k)]; }
  double dx() const { return 2.0 * domain.l1 / dims.nx; }
  double dy() const { return 2.0 * domain.l2 / dims.ny; }
  double dz() const { return 1.0 / (dims.nz - 1); }
};

struct RelaxOptions {
  int max_iter = 50000;
  double grad_tol = 1e-6;
  double step_init = 1e-2;
};

struct RelaxationReport {
  std::vector<double> energy_trace;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  bool converged = false;
};

/// Boundary-condition-compatible base state: constant e3 for homeotropic,
/// the great-circle path (cos(pi z/2), 0, sin(pi z/2)) for frustrated.
DirectorGrid base_grid(const GridDims& dims, const DomainSpec& domain,
                       BoundaryCondition bc);

/// Samples n = (cos phi cos th, sin phi cos th, sin th) from a 1D profile,
/// interpolating theta and phi linearly between profile nodes. Boundary
/// layers are snapped exactly to the boundary data.
DirectorGrid embed_profile(const profile1d::EulerProfile& profile,
                           const GridDims& dims, const DomainSpec& domain,
                           BoundaryCondition bc = BoundaryCondition::Frustrated);

/// Trapezoid-in-z quadrature of the pointwise density; one-constant K
/// routes through the |grad n|^2 + 2t n.curl n + t^2 form, general K
/// through the four-constant Frank density.
double discrete_energy(const DirectorGrid& grid, const ElasticConstants& k,
                       const Chirality& t);

/// Exact derivative of discrete_energy with respect to nodal values,
/// projected onto each node's tangent plane; boundary layers are zero.
std::vector<Vec3> discrete_gradient(const DirectorGrid& grid,
                                    const ElasticConstants& k,
                                    const Chirality& t);

/// Projected gradient descent: step along the negative tangent gradient,
/// renormalize, backtrack (halving) until the energy decreases. Trial
/// steps reuse curvature information from the previous accepted step.
std::pair<DirectorGrid, RelaxationReport> relax(const DirectorGrid& start,
                                                const ElasticConstants& k,
                                                const Chirality& t,
                                                const RelaxOptions& opts = {});

/// Adds a seeded tangent field of low-order periodic trig modes times
/// sin-in-z factors (vanishing on the z faces), then renormalizes.
/// Deterministic per seed; amplitude 0 returns the grid unchanged.
DirectorGrid random_perturbation(const DirectorGrid& grid, double amplitude,
                                 std::uint64_t seed);

/// Smooth admissible field: base state blended with seeded tangent trig
/// modes that vanish on the z faces. The mode coefficients depend only on
/// the seed, so different resolutions sample the same continuum field.
DirectorGrid smooth_periodic_sample(std::uint64_t seed, const GridDims& dims,
                                    const DomainSpec& domain,
                                    BoundaryCondition bc,
                                    double amplitude = 0.5);

/// Max interior-node norm of Delta n - 2t curl n + (|grad n|^2 +
/// 2t n.curl n) n, discretized with centered second differences.
double el_residual(const DirectorGrid& grid, const Chirality& t);

/// Quadrature of tr((grad n)^2) - (div n)^2 with the energy stencils.
/// Unit norm is not required.
double saddle_splay_integral(const DirectorGrid& grid);

VectorField difference(const DirectorGrid& a, const DirectorGrid& b);

/// The energy's difference stencils applied to a plain vector field.
Mat3 field_gradient_at(const VectorField& v, int i, int j, int k);

/// OFGRID 1 text format; the reader renormalizes values and validates the
/// boundary layers against the declared boundary condition.
void save_grid(const DirectorGrid& grid, const std::string& path);
DirectorGrid load_grid(const std::string& path);

/// Worker count for slab-parallel loops: FRANKMIN_THREADS when set, else
/// hardware concurrency. Reductions run in fixed order, so results are
/// bit-identical for any thread count.
int thread_count();

}  // namespace frankmin::field3d
