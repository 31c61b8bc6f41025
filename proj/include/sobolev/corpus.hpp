#pragma once

// Named sample functions on unit boxes, shared by the tests, the suite and
// the acceptance run. Samples are rules, materialized at any resolution.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sobolev/theorems.hpp"

namespace sobolev::corpus {

using banach::SpaceDescriptor;
using banach::Vec;
using grid::GridFunction;

struct SampleSpec {
  std::string name;
  std::size_t dim = 1;  // unit box (0,1)^dim
  SpaceDescriptor space = SpaceDescriptor::scalar();
  std::function<Vec(std::span<const double>)> rule;
  bool smooth = true;      // C^1 up to the boundary
  bool w0_member = false;  // vanishes on the boundary
};

GridFunction materialize(const SampleSpec& spec, std::size_t n);

/// 30 samples over Hilbert, FiniteLr r=1, SampledSup and GridLr r in {1.5, 2, 3}, d <= 2.
const std::vector<SampleSpec>& chain_corpus();

/// 20 samples, 10 with zero boundary values and 10 without.
const std::vector<SampleSpec>& w0_corpus();

/// Samples whose values sit in an order continuous Banach lattice.
std::vector<SampleSpec> lattice_corpus();

/// Every sample above plus the circle, the square root, a sup-norm sample whose
/// coordinates tie on the diagonal, and the indicator path.
std::vector<SampleSpec> all_samples();

/// Throws ContractError naming the unknown sample.
SampleSpec find_sample(const std::string& name);

/// t -> (cos t, sin t) on (0, 2 pi) in Hilbert(2); ||u|| = 1, so D||u|| = 0.
GridFunction circle(std::size_t n);

/// sqrt(t) x0 on (0,1) in FiniteLr(3, 2).
GridFunction sqrt_path(std::size_t n);
Vec sqrt_direction();

/// t -> 1_{(0,t)} in GridLr(coords, r) sampled on n cells.
GridFunction indicator_path(std::size_t n, std::size_t coords, double r);

/// Seeded smooth scalar functions on the unit box of dimension d.
std::vector<GridFunction> scalar_probes(std::size_t d, std::size_t n, std::size_t count, std::uint64_t seed);

/// Seeded smooth samples in the four value-space kinds.
std::vector<GridFunction> smooth_samples(std::size_t n, std::size_t count, std::uint64_t seed);

/// Refinement/truncation ladder (n, m) = (8, 8), (16, 16), ..., up to `finest`.
std::vector<std::size_t> aubin_lions_ladder(std::size_t finest = 128);

/// Members are constant or (1 - c xi) x / 2 with ||x||_Y = 1 and
/// Y-weights 4^{s-1}; values in X (unit weights) truncated to m coordinates.
std::vector<theorems::ProbeLevel> compact_family(const std::vector<std::size_t>& ladder, std::size_t members,
                                                 std::uint64_t seed);
theorems::FamilyBounds compact_family_bounds();

/// 1_{xi < k/n} e_1 for k = 0..n: bounded in L^2(X) only.
std::vector<theorems::ProbeLevel> control_family(const std::vector<std::size_t>& ladder);
theorems::FamilyBounds control_family_bounds();

/// Standard normal square matrix.
theorems::Matrix random_matrix(std::size_t n, std::uint64_t seed);

}  // namespace sobolev::corpus
