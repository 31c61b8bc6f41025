#pragma once

// Functions u: Omega -> X sampled at the cell centers of a uniform grid on a
// box. Every node is an interior point of Omega; boundary values only exist
// through trace extrapolation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sobolev/banach.hpp"

namespace sobolev::grid {

using banach::SpaceDescriptor;
using banach::Vec;
using banach::VecView;

struct BoxDomain {
  BoxDomain(std::vector<double> lo, std::vector<double> hi);
  static BoxDomain unit(std::size_t d);
  static BoxDomain interval(double lo, double hi) { return BoxDomain({lo}, {hi}); }

  std::size_t dim() const { return lo.size(); }
  double length(std::size_t j) const { return hi[j] - lo[j]; }
  double measure() const;
  /// (d-1)-dimensional measure of the boundary; 2 (counting measure) for d = 1.
  double surface_measure() const;

  bool operator==(const BoxDomain&) const = default;

  std::vector<double> lo;
  std::vector<double> hi;
};

/// Cell counts per axis; row-major node order, last axis fastest.
class GridSpec {
public:
  explicit GridSpec(std::vector<std::size_t> cells);
  static GridSpec uniform(std::size_t d, std::size_t n) { return GridSpec(std::vector<std::size_t>(d, n)); }

  std::size_t dim() const { return cells_.size(); }
  std::size_t cells(std::size_t j) const { return cells_[j]; }
  const std::vector<std::size_t>& cells() const { return cells_; }
  std::size_t node_count() const { return count_; }
  std::size_t stride(std::size_t j) const { return strides_[j]; }

  std::vector<std::size_t> unravel(std::size_t node) const;
  std::size_t ravel(std::span<const std::size_t> index) const;
  std::size_t axis_index(std::size_t node, std::size_t j) const { return (node / strides_[j]) % cells_[j]; }
  /// First or last layer along axis j, where differences are one-sided.
  bool on_boundary_ring(std::size_t node, std::size_t j) const;
  bool interior(std::size_t node) const;

  bool operator==(const GridSpec& o) const { return cells_ == o.cells_; }

private:
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> strides_;
  std::size_t count_ = 0;
};

class GridFunction {
public:
  /// `values` holds node_count * space.dim() numbers, node-major.
  GridFunction(BoxDomain domain, GridSpec grid, SpaceDescriptor space, std::vector<double> values);

  const BoxDomain& domain() const { return domain_; }
  const GridSpec& grid() const { return grid_; }
  const SpaceDescriptor& space() const { return space_; }

  std::size_t dim() const { return grid_.dim(); }
  std::size_t node_count() const { return grid_.node_count(); }
  std::size_t value_dim() const { return space_.dim(); }

  VecView at(std::size_t node) const { return {values_.data() + node * space_.dim(), space_.dim()}; }
  const std::vector<double>& flat() const { return values_; }

  double spacing(std::size_t j) const { return domain_.length(j) / static_cast<double>(grid_.cells(j)); }
  double max_spacing() const;
  double cell_volume() const;
  std::vector<double> center(std::size_t node) const;

private:
  BoxDomain domain_;
  GridSpec grid_;
  SpaceDescriptor space_;
  std::vector<double> values_;
};

enum class Scheme { Central, Forward, Backward };

const char* to_string(Scheme s);

/// Per-direction discrete derivatives. Central schemes fall back to one-sided
/// differences on the boundary ring, which theorem checks exclude.
struct DerivativeField {
  std::vector<GridFunction> components;
  Scheme scheme = Scheme::Central;
  std::vector<double> h;

  const GridFunction& operator[](std::size_t j) const { return components[j]; }
  std::size_t dim() const { return components.size(); }
};

using PointRule = std::function<Vec(std::span<const double> xi)>;
using ScalarRule = std::function<double(std::span<const double> xi)>;

/// values[idx] = f(center(idx)); throws ContractError naming the node on
/// non-finite output.
GridFunction sample(const BoxDomain& domain, const GridSpec& grid, const SpaceDescriptor& space,
                    const PointRule& f);
GridFunction sample_scalar(const BoxDomain& domain, const GridSpec& grid, const ScalarRule& f);

/// Same layout, new space and values.
GridFunction with_values(const GridFunction& like, const SpaceDescriptor& space, std::vector<double> values);

GridFunction map_pointwise(const GridFunction& u, const SpaceDescriptor& target,
                           const std::function<Vec(VecView)>& f);
GridFunction pointwise_norm(const GridFunction& u);
/// a*u + b*v on a shared layout and space.
GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v);
/// psi * u for a scalar grid function psi.
GridFunction multiply(const GridFunction& psi, const GridFunction& u);

/// Midpoint-rule L^p norm of nonnegative node values, sequential summation.
double lp_accumulate(std::span<const double> node_values, double p, double cell_volume);

/// ||u||_{L^p(Omega,X)}; p = inf is the max over nodes.
double bochner_norm(const GridFunction& u, double p);
/// Same norm restricted to nodes where `keep` is true.
double bochner_norm_masked(const GridFunction& u, double p, const std::vector<bool>& keep);

DerivativeField finite_difference(const GridFunction& u, Scheme scheme = Scheme::Central);

/// ||u||_{L^p} + sum_j ||D_j u||_{L^p} with central differences.
double sobolev_norm(const GridFunction& u, double p);
double sobolev_norm(const GridFunction& u, const DerivativeField& du, double p);

/// ||u(. + steps*h_j e_j) - u||_{L^p(omega,X)} over nodes whose shift stays
/// on the grid.
double shift_difference_norm(const GridFunction& u, std::size_t j, std::size_t steps, double p);

struct MollifierKernel {
  std::vector<std::vector<long>> offsets;
  std::vector<double> weights;  // unnormalized bump values, symmetric in offset
  double radius = 0.0;
};

/// Discrete rho_n(x) = n^d rho(n x) with rho the standard bump on the unit
/// ball; throws when the radius 1/level is below one cell.
MollifierKernel mollifier_kernel(const GridFunction& like, double level);

/// Discrete convolution with rho_level. Weights are renormalized over the
/// stencil points that stay on the grid, so constants are reproduced
/// exactly and values near the boundary use a truncated kernel.
GridFunction mollify(const GridFunction& u, double level);

/// Lipschitz constant of rho_level * f at interior nodes for any f with
/// sup-norm at most `sup_bound`.
double mollifier_lipschitz_bound(const GridFunction& like, double level, double sup_bound);

/// Even reflection across every face, `pad` cells per side.
GridFunction extend_reflect(const GridFunction& u, std::size_t pad);
/// Inverse of extend_reflect on the original index range.
GridFunction restrict_interior(const GridFunction& u, std::size_t pad);
/// Crude W^{1,p} operator bound 3^d of the reflection extension.
double extension_norm_bound(std::size_t d);

struct BoundaryFace {
  std::size_t axis = 0;
  bool upper = false;
  std::size_t count = 0;
  double cell_measure = 1.0;
  std::vector<double> values;  // count * value_dim
};

struct BoundaryTrace {
  SpaceDescriptor space;
  std::vector<BoundaryFace> faces;
  /// The trace theorem covers d >= 2; the two-point boundary for d = 1 is plumbing.
  bool below_theorem_dimension = false;
};

/// Linear extrapolation 1.5 u_0 - 0.5 u_1 from the two layers nearest each face.
BoundaryTrace trace_boundary(const GridFunction& u);
double boundary_lp_norm(const BoundaryTrace& trace, double p);

/// Scalar grid function xi -> <u(xi), f>.
GridFunction apply_functional(const GridFunction& u, VecView functional);

}  // namespace sobolev::grid
