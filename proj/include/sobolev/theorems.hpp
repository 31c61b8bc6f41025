#pragma once

// Executable checks of the global results for Sobolev spaces of
// vector-valued functions: embeddings, Morrey, Poincare, W_0
// characterizations, norm-map continuity, compactness probes, mollifier
// families and tensor extension of scalar operators.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sobolev/calculus.hpp"
#include "sobolev/convergence.hpp"
#include "sobolev/gridfn.hpp"

namespace sobolev::theorems {

using banach::SpaceDescriptor;
using banach::Vec;
using grid::GridFunction;

// ---------------------------------------------------------------------------
// Embedding and Morrey

/// W^{1,p} embeds into L^r on a bounded box of dimension d.
bool embedding_admissible(std::size_t d, double p, double r);

/// ||g||_{L^r} / ||g||_{W^{1,p}}, 0 for g = 0.
double embedding_ratio(const GridFunction& g, double p, double r);

struct EmbeddingReport {
  double p = 0.0;
  double r = 0.0;
  double vector_ratio = 0.0;     // ||u||_{L^r} / ||u||_{W^{1,p}}
  double scalar_constant = 0.0;  // max ratio over the probes and ||u(.)||_X
  double transfer_ratio = 0.0;   // vector_ratio / scalar_constant
  bool holds = true;             // transfer_ratio <= 1 + 1e-6
};

EmbeddingReport embedding_check(const GridFunction& u, double p, double r, const std::vector<GridFunction>& scalar_probes);

struct MorreyReport {
  double alpha = 0.0;
  double beta = 0.0;
  double w_norm = 0.0;
  double scalar_constant = 0.0;
  double bound = 0.0;  // scalar_constant * w_norm
  bool holds = true;
  calculus::HolderReport holder;
};

/// max over probes of holder_beta(g, 1 - d/p) / ||g||_{W^{1,p}}.
double morrey_scalar_constant(const std::vector<GridFunction>& scalar_probes, double p);

/// The scalar constant is the probe maximum; on intervals it is raised to
/// the Holder-inequality constant 1.
MorreyReport morrey_check(const GridFunction& u, double p, const std::vector<GridFunction>& scalar_probes);

// ---------------------------------------------------------------------------
// Poincare and W_0

/// Smallest eigenvalue of the Dirichlet second-difference matrix with n
/// interior points on an interval of the given length (Sturm bisection).
double dirichlet_first_eigenvalue(std::size_t n, double length);

/// Sharp 1-D constant pi_p / L for ||u'||_p >= C ||u||_p, u(0) = u(L) = 0.
double poincare_constant(double p, double length);

struct W0Report {
  double boundary_norm = 0.0;  // boundary L^p norm of the trace of ||u(.)||_X
  double trace_norm = 0.0;     // boundary L^p norm of the vector trace
  double w_norm = 0.0;
  double tol = 0.0;
  double threshold = 0.0;      // tol * (1 + w_norm)
  bool member = false;
  bool below_theorem_dimension = false;
};

/// tol <= 0 selects 10 h^2 with h the largest spacing.
W0Report w0_membership(const GridFunction& u, double p, double tol = 0.0);

struct PoincareReport {
  double ratio = 0.0;     // ||D_j u||_p / ||u||_p (interior-accurate differences)
  double constant = 0.0;  // pi_p / L_j
  double slack = 0.01;
  bool precondition_ok = true;
  bool holds = true;  // ratio >= constant (1 - slack), or u = 0
  W0Report w0;
};

PoincareReport poincare_check(const GridFunction& u, double p, std::size_t axis, double slack = 0.01, double tol = 0.0);

struct WeakW0Report {
  bool member = false;
  std::vector<bool> functional_members;
  std::vector<std::size_t> failing;
  bool strong_member = false;  // w0_membership on u itself
  bool agrees = false;
};

/// Rank of the functionals as rows; they separate points iff rank = dim.
std::size_t functional_rank(const std::vector<Vec>& functionals, std::size_t dim);
std::vector<Vec> coordinate_functionals(const SpaceDescriptor& space);

WeakW0Report weak_w0_check(const GridFunction& u, const std::vector<Vec>& functionals, double p, double tol = 0.0);

struct IdealReport {
  bool dominated = true;
  std::optional<std::size_t> witness;  // first node where ||v|| > ||u||
  bool u_member = false;
  bool v_member = false;
  bool holds = false;
};

IdealReport ideal_property_check(const GridFunction& u, const GridFunction& v, double p, double tol = 0.0);

struct NormContinuityReport {
  std::vector<double> vector_distances;  // ||u_k - u||_{W^{1,p}}
  std::vector<double> scalar_distances;  // || ||u_k|| - ||u|| ||_{W^{1,p}}
  double floor = 1e-12;
  bool holds = true;
};

/// Passes when the last scalar distance is at the floor, or when it has
/// shrunk at least like the square root of the vector distances.
NormContinuityReport norm_map_continuity_check(const GridFunction& u, const std::vector<GridFunction>& sequence, double p);

// ---------------------------------------------------------------------------
// Compactness probe

enum class Stability { Stable, Growing };
const char* to_string(Stability s);

struct FamilyBounds {
  double w_bound = banach::kInf;   // ||f||_{W^{1,p}(Omega,X)}
  double y_bound = banach::kInf;   // ||f||_{L^p(Omega,Y)}
  double lp_bound = banach::kInf;  // ||f||_{L^p(Omega,X)}
};

struct ProbeLevel {
  std::vector<GridFunction> family;     // values in X
  std::optional<SpaceDescriptor> y_space;  // same coordinates, stronger norm
};

struct CoveringProfile {
  std::vector<double> eps_list;
  std::vector<std::size_t> level_sizes;        // node count * coordinate count per level
  std::vector<std::vector<std::size_t>> counts;  // [level][eps]
  std::string method = "greedy farthest-point net seeded at family member 0";
  std::vector<double> growth;  // per eps: max level count / coarsest count
  Stability verdict = Stability::Stable;
};

/// Greedy farthest-point net size at radius eps in the L^p(Omega,X) metric.
std::size_t greedy_net_size(const std::vector<GridFunction>& family, double eps, double p);

/// Throws CertificationError when a member exceeds the declared bounds.
CoveringProfile aubin_lions_probe(const std::vector<ProbeLevel>& levels, const std::vector<double>& eps_list, double p,
                                  const FamilyBounds& bounds);

// ---------------------------------------------------------------------------
// Mollifier families

struct MollifierFamilyReport {
  std::vector<double> levels;
  std::vector<double> sup_errors;  // sup over the family of ||rho_n * f - f||_p
  double constant = 0.0;           // family criterion constant
  bool monotone = true;
  bool bounded = true;  // sup_errors[k] <= constant / levels[k]
  fit::ConvergenceReport decay;  // sup error against 1/level
};

MollifierFamilyReport mollifier_family_check(const std::vector<GridFunction>& family, const std::vector<double>& levels,
                                             double p);

// ---------------------------------------------------------------------------
// Tensor extension

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

Matrix identity_matrix(std::size_t n);
Vec apply(const Matrix& T, const Vec& f);

/// T acting on node values coordinate by coordinate: the operator T (x) I.
GridFunction tensor_apply(const Matrix& T, const GridFunction& u);

/// ||T||_{2->2} via power iteration on T^T T, stopped at relative residual 1e-12.
double operator_norm_2(const Matrix& T);

struct PNormEstimate {
  double value = 0.0;
  Vec maximizer;
};

/// Lower estimate of ||T||_{p->p} by the p-norm power method from several
/// seeded starts.
PNormEstimate operator_norm_p(const Matrix& T, double p, std::uint64_t seed);

struct TensorReport {
  double p = 2.0;
  double scalar_norm = 0.0;    // ||T||
  double extended_norm = 0.0;  // ||T (x) I|| (p = 2), else best certified ratio
  double gap = 0.0;            // |extended - scalar| / max(1, scalar)
  std::size_t certified_samples = 0;
  double worst_sample_ratio = 0.0;  // max ||T~u|| / (||T|| ||u||) over random u
  double tensor_attainment_gap = 0.0;
  bool holds = true;
};

/// Compares ||T (x) I|| on L^p(Omega,H) against ||T|| on L^p(Omega); H has
/// dimension h_dim.
TensorReport tensor_extend(const Matrix& T, std::size_t h_dim, double p, std::uint64_t seed, std::size_t samples = 10000);

}  // namespace sobolev::theorems
