#pragma once

// Composition calculus on grid functions: the difference-quotient
// criterion, Lipschitz composition, one-sided Gateaux chain rules, and
// derivative fields of the norm and of the lattice maps |.| and (.)^+.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sobolev/convergence.hpp"
#include "sobolev/gridfn.hpp"

namespace sobolev::calculus {

using banach::SpaceDescriptor;
using banach::Vec;
using banach::VecView;
using grid::DerivativeField;
using grid::GridFunction;

/// tau_zero: a coordinate or node value this close to 0 counts as zero.
inline double zero_tolerance(double node_norm) { return 1e-8 * (1.0 + node_norm); }

/// Nodes off the boundary ring, where central differences are used.
std::vector<bool> interior_mask(const grid::GridSpec& grid);

// ---------------------------------------------------------------------------
// Difference-quotient criterion

enum class Growth { Bounded, Divergent };
const char* to_string(Growth g);

struct QuotientRow {
  std::size_t axis = 0;
  std::size_t steps = 0;
  double h = 0.0;
  double quotient = 0.0;  // shift_difference_norm / h
};

struct CriterionReport {
  std::vector<QuotientRow> table;
  double c_est = 0.0;             // max quotient
  double derivative_bound = 0.0;  // max_j ||D_j u||_p, central differences
  fit::LineFit fit;               // the axis with the steepest decay
  Growth verdict = Growth::Bounded;
};

/// Slope below this, with r2 >= kDivergenceR2 over >= 4 step sizes, means divergent.
inline constexpr double kDivergenceSlope = -0.1;
inline constexpr double kDivergenceR2 = 0.99;

CriterionReport dq_criterion(const GridFunction& u, double p, const std::vector<std::size_t>& steps_list);

// ---------------------------------------------------------------------------
// Lipschitz maps

/// (D+_v F(x), D-_v F(x))
using OneSidedRule = std::function<std::pair<Vec, Vec>(VecView x, VecView v)>;

struct LipschitzMap {
  std::string name;
  SpaceDescriptor source;
  SpaceDescriptor target;
  std::function<Vec(VecView)> rule;
  double lipschitz = 1.0;
  OneSidedRule onesided;  // empty when unknown
};

LipschitzMap identity_map(const SpaceDescriptor& space);
LipschitzMap norm_map(const SpaceDescriptor& space);
/// Coordinatewise |x|; the one-sided rule needs an order continuous norm.
LipschitzMap lattice_abs_map(const SpaceDescriptor& space);
/// x -> |<x, x'>|, Lipschitz with constant ||x'||_*.
LipschitzMap functional_abs_map(const SpaceDescriptor& space, const Vec& functional);

struct LipschitzCheck {
  std::size_t pairs = 0;
  double max_quotient = 0.0;
};

/// Empirical quotient ||F(x)-F(y)|| / ||x-y|| over seeded node pairs of u;
/// throws LipschitzViolation naming the worst pair if it exceeds L(1+1e-9).
LipschitzCheck validate_lipschitz(const LipschitzMap& F, const GridFunction& u, std::uint64_t seed,
                                  std::size_t pairs = 10000);

struct Composition {
  GridFunction value;
  LipschitzCheck lipschitz;
  /// max over interior nodes and axes of ||D_j(F o u)|| - L ||D_j u||
  double bound_excess = 0.0;
  bool bound_holds = true;
};

Composition compose_lipschitz(const LipschitzMap& F, const GridFunction& u, std::uint64_t seed = 0);

struct ChainField {
  DerivativeField plus;
  DerivativeField minus;
  /// Fraction of interior measure where plus and minus differ beyond tolerance.
  double disagreement_measure = 0.0;
  /// sum_j ||plus_j - minus_j||_{L^p(interior)} / |Omega|
  double disagreement_lp = 0.0;
  /// sum_j ||plus_j - D_j(F o u)||_{L^p} over interior nodes where plus = minus.
  double fd_gap_lp = 0.0;
};

ChainField gateaux_chain_field(const LipschitzMap& F, const GridFunction& u, double p);

// ---------------------------------------------------------------------------
// Norm and lattice derivative fields

struct NormField {
  DerivativeField field;  // scalar components
  std::vector<std::vector<double>> plus;   // [axis][node]
  std::vector<std::vector<double>> minus;  // [axis][node]
  std::vector<bool> zero;       // ||u|| within tau_zero of 0: field set to 0
  std::vector<bool> flagged;    // zero, or a multi-valued pairing in some direction
  /// sum_j discrete L^1 gap to D_j ||u|| over interior non-flagged nodes
  double consistency_l1 = 0.0;
  /// max over non-flagged nodes of (|field| - ||D_j u||) / max(1, ||D_j u||)
  double estimate_excess = 0.0;
  std::size_t flagged_count = 0;
};

/// Nodewise <D_j u, J(u)> via one-sided norm derivatives. Multi-valued
/// nodes carry the midpoint of the interval and are flagged.
NormField norm_derivative_field(const GridFunction& u);

struct LatticeField {
  DerivativeField field;
  std::vector<bool> flagged;  // some coordinate within tau_zero of 0
  /// sum_j discrete L^1 gap to finite differences of |u| (or u+), interior non-flagged
  double consistency_l1 = 0.0;
};

/// (sign u) D_j u; requires an order continuous lattice norm.
LatticeField abs_derivative_field(const GridFunction& u);
/// D_j u restricted to coordinates where u > 0.
LatticeField pos_derivative_field(const GridFunction& u);

struct StampacchiaReport {
  bool precondition_ok = true;
  bool holds = true;
  double tolerance = 0.0;
  std::vector<std::size_t> precondition_violations;
  std::vector<std::size_t> violations;
};

/// Given |u| ^ w = 0, checks |D_j u| ^ w = 0 at interior nodes.
StampacchiaReport stampacchia_check(const GridFunction& u, VecView w);

struct QuotientRule {
  GridFunction v;
  DerivativeField formula;  // D_j v assembled from the product/quotient formula
  std::vector<bool> excluded;  // ||u|| <= tau_zero
  double consistency_l1 = 0.0;  // vs finite_difference(v), interior, not excluded
};

/// v = (u / ||u||) phi 1_{u != 0} with phi = phi_hat ^ ||u||.
QuotientRule quotient_rule_field(const GridFunction& u, const GridFunction& phi_hat);

struct ProductRuleReport {
  double error_l1 = 0.0;  // sum_j interior L^1 of D_j(psi u) - (D_j psi)u - psi D_j u
  double bound = 0.0;     // h * Lip(psi) * Lip(u) * |Omega| summed over axes
  bool holds = true;
};

ProductRuleReport product_rule_check(const GridFunction& u, const GridFunction& psi);

struct HolderReport {
  double beta = 0.0;
  std::size_t pairs = 0;
  bool exhaustive = true;
  std::size_t first_node = 0;
  std::size_t second_node = 0;
};

/// sup of ||u(xi) - u(eta)|| / |xi - eta|^alpha over node pairs. All pairs
/// unless `max_pairs` is nonzero and smaller than the pair count, in which
/// case seeded random pairs are drawn.
HolderReport holder_beta(const GridFunction& u, double alpha, std::size_t max_pairs = 0, std::uint64_t seed = 0);

/// (||x + t v|| - ||x||) / t for each t.
std::vector<double> norm_quotients(const SpaceDescriptor& space, VecView x, VecView v, const std::vector<double>& ts);

}  // namespace sobolev::calculus
