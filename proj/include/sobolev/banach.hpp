#pragma once

// Concrete Banach spaces used as value spaces of grid functions: finite
// l^r, sampled C(K), weighted L^r over a sampled measure space, and
// Euclidean Hilbert space. All elements are real coordinate vectors.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sobolev::banach {

using Vec = std::vector<double>;
using VecView = std::span<const double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative tolerance for membership in the argmax set of the sup norm.
inline constexpr double kTieRelTol = 1e-12;

enum class SpaceKind { FiniteLr, SampledSup, GridLr, Hilbert };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

class SpaceDescriptor {
public:
  static SpaceDescriptor finite_lr(std::size_t dim, double exponent);
  static SpaceDescriptor sampled_sup(std::size_t dim);
  /// Empty weights mean uniform quadrature 1/dim on S = (0,1).
  static SpaceDescriptor grid_lr(std::size_t dim, double exponent, std::vector<double> weights = {});
  static SpaceDescriptor hilbert(std::size_t dim);
  /// The real line, used for pointwise norms and functional pairings.
  static SpaceDescriptor scalar() { return finite_lr(1, 1.0); }

  SpaceKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double exponent() const { return exponent_; }
  /// Explicitly supplied weights (GridLr only); empty when uniform.
  const std::vector<double>& explicit_weights() const { return weights_; }
  double weight(std::size_t i) const;

  /// Max-norm semantics: SampledSup, or any l^r / L^r with r = inf.
  bool sup_norm() const { return kind_ == SpaceKind::SampledSup || exponent_ == kInf; }
  bool lattice_capable() const { return kind_ != SpaceKind::Hilbert; }
  bool order_continuous() const { return kind_ != SpaceKind::SampledSup && exponent_ != kInf; }

  /// Throws ContractError unless x has length dim() and finite entries.
  void check(VecView x) const;

  bool operator==(const SpaceDescriptor&) const = default;

private:
  SpaceDescriptor(SpaceKind kind, std::size_t dim, double exponent, std::vector<double> weights);

  SpaceKind kind_;
  std::size_t dim_;
  double exponent_;
  std::vector<double> weights_;
};

struct PairingResult {
  double plus = 0.0;   // right derivative
  double minus = 0.0;  // left derivative
  bool unique = true;
};

/// Scale-aware tolerance for deciding that plus == minus.
inline double pairing_tolerance(double direction_norm) { return 1e-9 * (1.0 + direction_norm); }

double norm(const SpaceDescriptor& space, VecView x);

/// Coordinate duality pairing <x, f>, weighted for GridLr.
double pair(const SpaceDescriptor& space, VecView x, VecView functional);

/// Norm of a coordinate functional with respect to `pair`: the conjugate
/// (weighted) l^{r'} norm.
double dual_norm(const SpaceDescriptor& space, VecView functional);

/// Right and left directional derivatives of the norm at x in direction h,
/// i.e. sup and inf of <h, x'> over the duality set J(x). At x = 0 returns
/// (||h||, -||h||).
PairingResult one_sided_norm_derivative(const SpaceDescriptor& space, VecView x, VecView h);

// Lattice operations. All throw CapabilityError on non-lattice spaces.
Vec lattice_abs(const SpaceDescriptor& space, VecView v);
Vec lattice_pos(const SpaceDescriptor& space, VecView v);
/// (sign v)(w) = P_{v+} w - P_{v-} w, coordinatewise sign(v_s) w_s.
Vec sign_apply(const SpaceDescriptor& space, VecView v, VecView w);
/// Band projection of w onto the disjoint complement of |v| (zero set of v).
Vec band_projection_disjoint(const SpaceDescriptor& space, VecView v, VecView w);

struct LatticeDerivative {
  Vec plus;
  Vec minus;
};

/// One-sided Gateaux derivatives of v -> |v| in direction w:
/// D+ = (sign v)w + P|w|, D- = (sign v)w - P|w|, P the band projection
/// onto the zero set of v. Requires an order continuous norm.
LatticeDerivative abs_one_sided(const SpaceDescriptor& space, VecView v, VecView w);

}  // namespace sobolev::banach
