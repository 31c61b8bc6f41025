#include "sobolev/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sobolev/errors.hpp"

namespace sobolev::grid {

namespace {

void require_same_layout(const GridFunction& a, const GridFunction& b, const char* op) {
  if (!(a.domain() == b.domain()) || !(a.grid() == b.grid())) {
    throw ContractError(std::string(op) + ": grid functions live on different grids");
  }
}

}  // namespace

BoxDomain::BoxDomain(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.empty() || lo.size() != hi.size()) throw ContractError("box needs matching lo/hi of dimension >= 1");
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!(lo[j] < hi[j])) throw ContractError("box requires lo < hi on every axis");
  }
}

BoxDomain BoxDomain::unit(std::size_t d) { return BoxDomain(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)); }

double BoxDomain::measure() const {
  double m = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) m *= length(j);
  return m;
}

double BoxDomain::surface_measure() const {
  if (dim() == 1) return 2.0;
  double s = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) s += 2.0 * measure() / length(j);
  return s;
}

GridSpec::GridSpec(std::vector<std::size_t> cells) : cells_(std::move(cells)), strides_(cells_.size()) {
  if (cells_.empty()) throw ContractError("grid needs at least one axis");
  std::size_t s = 1;
  for (std::size_t j = cells_.size(); j-- > 0;) {
    if (cells_[j] < 2) throw ContractError("grid needs at least 2 cells per axis");
    strides_[j] = s;
    s *= cells_[j];
  }
  count_ = s;
}

std::vector<std::size_t> GridSpec::unravel(std::size_t node) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t j = 0; j < dim(); ++j) idx[j] = axis_index(node, j);
  return idx;
}

std::size_t GridSpec::ravel(std::span<const std::size_t> index) const {
  std::size_t node = 0;
  for (std::size_t j = 0; j < dim(); ++j) node += index[j] * strides_[j];
  return node;
}

bool GridSpec::on_boundary_ring(std::size_t node, std::size_t j) const {
  const std::size_t i = axis_index(node, j);
  return i == 0 || i + 1 == cells_[j];
}

bool GridSpec::interior(std::size_t node) const {
  for (std::size_t j = 0; j < dim(); ++j) {
    if (on_boundary_ring(node, j)) return false;
  }
  return true;
}

GridFunction::GridFunction(BoxDomain domain, GridSpec grid, SpaceDescriptor space, std::vector<double> values)
    : domain_(std::move(domain)), grid_(std::move(grid)), space_(std::move(space)), values_(std::move(values)) {
  if (domain_.dim() != grid_.dim()) throw ContractError("domain and grid dimensions differ");
  if (values_.size() != grid_.node_count() * space_.dim()) {
    throw ContractError("grid function value count does not match nodes * space dim");
  }
}

double GridFunction::max_spacing() const {
  double h = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) h = std::max(h, spacing(j));
  return h;
}

double GridFunction::cell_volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) v *= spacing(j);
  return v;
}

std::vector<double> GridFunction::center(std::size_t node) const {
  std::vector<double> xi(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    xi[j] = domain_.lo[j] + (static_cast<double>(grid_.axis_index(node, j)) + 0.5) * spacing(j);
  }
  return xi;
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Central: return "central";
    case Scheme::Forward: return "forward";
    case Scheme::Backward: return "backward";
  }
  return "?";
}

GridFunction sample(const BoxDomain& domain, const GridSpec& grid, const SpaceDescriptor& space,
                    const PointRule& f) {
  GridFunction shape(domain, grid, space, std::vector<double>(grid.node_count() * space.dim()));
  std::vector<double> values(grid.node_count() * space.dim());
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto xi = shape.center(node);
    const Vec v = f(xi);
    if (v.size() != space.dim()) {
      throw ContractError("sample rule returned a vector of the wrong length at node " + std::to_string(node));
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k])) {
        throw ContractError("sample rule produced a non-finite coordinate at node " + std::to_string(node));
      }
      values[node * space.dim() + k] = v[k];
    }
  }
  return GridFunction(domain, grid, space, std::move(values));
}

GridFunction sample_scalar(const BoxDomain& domain, const GridSpec& grid, const ScalarRule& f) {
  return sample(domain, grid, SpaceDescriptor::scalar(), [&](std::span<const double> xi) { return Vec{f(xi)}; });
}

GridFunction with_values(const GridFunction& like, const SpaceDescriptor& space, std::vector<double> values) {
  return GridFunction(like.domain(), like.grid(), space, std::move(values));
}

GridFunction map_pointwise(const GridFunction& u, const SpaceDescriptor& target,
                           const std::function<Vec(VecView)>& f) {
  std::vector<double> out(u.node_count() * target.dim());
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    const Vec v = f(u.at(node));
    target.check(v);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(node * target.dim()));
  }
  return with_values(u, target, std::move(out));
}

GridFunction pointwise_norm(const GridFunction& u) {
  std::vector<double> out(u.node_count());
  for (std::size_t node = 0; node < u.node_count(); ++node) out[node] = banach::norm(u.space(), u.at(node));
  return with_values(u, SpaceDescriptor::scalar(), std::move(out));
}

GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v) {
  require_same_layout(u, v, "combine");
  if (!(u.space() == v.space())) throw ContractError("combine: grid functions take values in different spaces");
  std::vector<double> out(u.flat().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * u.flat()[i] + b * v.flat()[i];
  return with_values(u, u.space(), std::move(out));
}

GridFunction multiply(const GridFunction& psi, const GridFunction& u) {
  require_same_layout(psi, u, "multiply");
  if (psi.value_dim() != 1) throw ContractError("multiply: first factor must be scalar");
  std::vector<double> out(u.flat().size());
  const std::size_t m = u.value_dim();
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    for (std::size_t k = 0; k < m; ++k) out[node * m + k] = psi.flat()[node] * u.flat()[node * m + k];
  }
  return with_values(u, u.space(), std::move(out));
}

double lp_accumulate(std::span<const double> node_values, double p, double cell_volume) {
  if (!(p >= 1.0)) throw ContractError("Lebesgue exponent must lie in [1, inf]");
  if (p == banach::kInf) {
    double m = 0.0;
    for (double v : node_values) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  if (p == 1.0) {
    for (double v : node_values) s += v;
    return s * cell_volume;
  }
  if (p == 2.0) {
    for (double v : node_values) s += v * v;
    return std::sqrt(s * cell_volume);
  }
  for (double v : node_values) s += std::pow(v, p);
  return std::pow(s * cell_volume, 1.0 / p);
}

double bochner_norm(const GridFunction& u, double p) {
  std::vector<double> norms(u.node_count());
  for (std::size_t node = 0; node < u.node_count(); ++node) norms[node] = banach::norm(u.space(), u.at(node));
  return lp_accumulate(norms, p, u.cell_volume());
}

double bochner_norm_masked(const GridFunction& u, double p, const std::vector<bool>& keep) {
  if (keep.size() != u.node_count()) throw ContractError("mask length must equal node count");
  std::vector<double> norms;
  norms.reserve(u.node_count());
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    if (keep[node]) norms.push_back(banach::norm(u.space(), u.at(node)));
  }
  return lp_accumulate(norms, p, u.cell_volume());
}

DerivativeField finite_difference(const GridFunction& u, Scheme scheme) {
  const auto& g = u.grid();
  const std::size_t m = u.value_dim();
  DerivativeField out;
  out.scheme = scheme;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    const std::size_t n = g.cells(j);
    if (scheme == Scheme::Central && n < 3) throw ContractError("central differences need >= 3 cells per axis");
    const double h = u.spacing(j);
    const std::size_t st = g.stride(j);
    std::vector<double> d(u.flat().size());
    const auto& v = u.flat();
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      const std::size_t i = g.axis_index(node, j);
      std::size_t hi = node;
      std::size_t lo = node;
      double denom = h;
      const bool first = i == 0;
      const bool last = i + 1 == n;
      if (scheme == Scheme::Central && !first && !last) {
        hi = node + st;
        lo = node - st;
        denom = 2.0 * h;
      } else if ((scheme == Scheme::Backward && !first) || last) {
        lo = node - st;
      } else {
        hi = node + st;
      }
      for (std::size_t k = 0; k < m; ++k) d[node * m + k] = (v[hi * m + k] - v[lo * m + k]) / denom;
    }
    out.components.push_back(with_values(u, u.space(), std::move(d)));
    out.h.push_back(h);
  }
  return out;
}

double sobolev_norm(const GridFunction& u, const DerivativeField& du, double p) {
  double s = bochner_norm(u, p);
  for (const auto& c : du.components) s += bochner_norm(c, p);
  return s;
}

double sobolev_norm(const GridFunction& u, double p) { return sobolev_norm(u, finite_difference(u), p); }

double shift_difference_norm(const GridFunction& u, std::size_t j, std::size_t steps, double p) {
  if (j >= u.dim()) throw ContractError("shift direction out of range");
  const auto& g = u.grid();
  if (steps < 1 || steps >= g.cells(j)) throw ContractError("shift steps must satisfy 1 <= steps < n_j");
  const std::size_t m = u.value_dim();
  const std::size_t offset = steps * g.stride(j);
  std::vector<double> norms;
  norms.reserve(g.node_count());
  Vec diff(m);
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (g.axis_index(node, j) + steps >= g.cells(j)) continue;
    for (std::size_t k = 0; k < m; ++k) diff[k] = u.flat()[(node + offset) * m + k] - u.flat()[node * m + k];
    norms.push_back(banach::norm(u.space(), diff));
  }
  return lp_accumulate(norms, p, u.cell_volume());
}

MollifierKernel mollifier_kernel(const GridFunction& like, double level) {
  if (!(level > 0.0)) throw ContractError("mollifier level must be positive");
  MollifierKernel k;
  k.radius = 1.0 / level;
  const std::size_t d = like.dim();
  if (k.radius <= like.max_spacing()) {
    std::ostringstream os;
    os << "mollifier radius " << k.radius << " is not larger than the grid spacing " << like.max_spacing()
       << "; refine the grid";
    throw ContractError(os.str());
  }
  std::vector<long> reach(d);
  for (std::size_t j = 0; j < d; ++j) reach[j] = static_cast<long>(std::floor(k.radius / like.spacing(j)));
  std::vector<long> off(d);
  for (std::size_t j = 0; j < d; ++j) off[j] = -reach[j];
  while (true) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double x = static_cast<double>(off[j]) * like.spacing(j) / k.radius;
      r2 += x * x;
    }
    if (r2 < 1.0) {
      k.offsets.push_back(off);
      k.weights.push_back(std::exp(1.0 / (r2 - 1.0)));
    }
    std::size_t j = d;
    while (j-- > 0) {
      if (off[j] < reach[j]) {
        ++off[j];
        break;
      }
      off[j] = -reach[j];
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return k;
}

GridFunction mollify(const GridFunction& u, double level) {
  const MollifierKernel k = mollifier_kernel(u, level);
  const auto& g = u.grid();
  const std::size_t d = u.dim();
  const std::size_t m = u.value_dim();
  const auto& v = u.flat();
  std::vector<double> out(v.size());
  std::vector<double> acc(m);
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const auto idx = g.unravel(node);
    std::fill(acc.begin(), acc.end(), 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < k.offsets.size(); ++t) {
      long shift = 0;
      bool inside = true;
      for (std::size_t j = 0; j < d && inside; ++j) {
        const long i = static_cast<long>(idx[j]) + k.offsets[t][j];
        inside = i >= 0 && i < static_cast<long>(g.cells(j));
        shift += k.offsets[t][j] * static_cast<long>(g.stride(j));
      }
      if (!inside) continue;
      const std::size_t other = static_cast<std::size_t>(static_cast<long>(node) + shift);
      total += k.weights[t];
      for (std::size_t c = 0; c < m; ++c) acc[c] += k.weights[t] * (v[other * m + c] - v[node * m + c]);
    }
    // f + sum w (f_k - f) / sum w: exact on constants.
    for (std::size_t c = 0; c < m; ++c) out[node * m + c] = v[node * m + c] + acc[c] / total;
  }
  return with_values(u, u.space(), std::move(out));
}

double mollifier_lipschitz_bound(const GridFunction& like, double level, double sup_bound) {
  const MollifierKernel k = mollifier_kernel(like, level);
  double total = 0.0;
  for (double w : k.weights) total += w;
  const std::size_t d = like.dim();
  // Dense box of normalized weights with a one-cell zero margin.
  std::vector<long> reach(d, 0);
  for (const auto& off : k.offsets) {
    for (std::size_t j = 0; j < d; ++j) reach[j] = std::max(reach[j], std::abs(off[j]));
  }
  std::vector<std::size_t> extent(d), stride(d);
  std::size_t size = 1;
  for (std::size_t j = d; j-- > 0;) {
    extent[j] = static_cast<std::size_t>(2 * reach[j] + 3);
    stride[j] = size;
    size *= extent[j];
  }
  std::vector<double> box(size, 0.0);
  for (std::size_t t = 0; t < k.offsets.size(); ++t) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d; ++j) pos += static_cast<std::size_t>(k.offsets[t][j] + reach[j] + 1) * stride[j];
    box[pos] = k.weights[t] / total;
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    // Total variation of the weights under a unit shift along axis j.
    double tv = 0.0;
    for (std::size_t pos = 0; pos < size; ++pos) {
      const std::size_t i = (pos / stride[j]) % extent[j];
      const double prev = i > 0 ? box[pos - stride[j]] : 0.0;
      tv += std::abs(box[pos] - prev);
    }
    worst = std::max(worst, tv / like.spacing(j));
  }
  return sup_bound * std::sqrt(static_cast<double>(d)) * worst;
}

GridFunction extend_reflect(const GridFunction& u, std::size_t pad) {
  if (pad < 1) throw ContractError("reflection pad must be >= 1");
  const std::size_t d = u.dim();
  std::vector<double> lo(d), hi(d);
  std::vector<std::size_t> cells(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (pad > u.grid().cells(j)) throw ContractError("reflection pad exceeds the number of cells");
    lo[j] = u.domain().lo[j] - static_cast<double>(pad) * u.spacing(j);
    hi[j] = u.domain().hi[j] + static_cast<double>(pad) * u.spacing(j);
    cells[j] = u.grid().cells(j) + 2 * pad;
  }
  GridSpec big(cells);
  const std::size_t m = u.value_dim();
  std::vector<double> out(big.node_count() * m);
  std::vector<std::size_t> src(d);
  for (std::size_t node = 0; node < big.node_count(); ++node) {
    for (std::size_t j = 0; j < d; ++j) {
      const long n = static_cast<long>(u.grid().cells(j));
      long k = static_cast<long>(big.axis_index(node, j)) - static_cast<long>(pad);
      if (k < 0) k = -k - 1;
      if (k >= n) k = 2 * n - k - 1;
      src[j] = static_cast<std::size_t>(k);
    }
    const std::size_t s = u.grid().ravel(src);
    std::copy_n(u.flat().begin() + static_cast<std::ptrdiff_t>(s * m), m,
                out.begin() + static_cast<std::ptrdiff_t>(node * m));
  }
  return GridFunction(BoxDomain(lo, hi), big, u.space(), std::move(out));
}

GridFunction restrict_interior(const GridFunction& u, std::size_t pad) {
  const std::size_t d = u.dim();
  std::vector<double> lo(d), hi(d);
  std::vector<std::size_t> cells(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (2 * pad + 2 > u.grid().cells(j)) throw ContractError("restriction pad too large for grid");
    lo[j] = u.domain().lo[j] + static_cast<double>(pad) * u.spacing(j);
    hi[j] = u.domain().hi[j] - static_cast<double>(pad) * u.spacing(j);
    cells[j] = u.grid().cells(j) - 2 * pad;
  }
  GridSpec small(cells);
  const std::size_t m = u.value_dim();
  std::vector<double> out(small.node_count() * m);
  std::vector<std::size_t> src(d);
  for (std::size_t node = 0; node < small.node_count(); ++node) {
    for (std::size_t j = 0; j < d; ++j) src[j] = small.axis_index(node, j) + pad;
    const std::size_t s = u.grid().ravel(src);
    std::copy_n(u.flat().begin() + static_cast<std::ptrdiff_t>(s * m), m,
                out.begin() + static_cast<std::ptrdiff_t>(node * m));
  }
  return GridFunction(BoxDomain(lo, hi), small, u.space(), std::move(out));
}

double extension_norm_bound(std::size_t d) { return std::pow(3.0, static_cast<double>(d)); }

BoundaryTrace trace_boundary(const GridFunction& u) {
  const auto& g = u.grid();
  const std::size_t d = u.dim();
  const std::size_t m = u.value_dim();
  BoundaryTrace trace{u.space(), {}, d < 2};
  for (std::size_t j = 0; j < d; ++j) {
    double cell_measure = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (i != j) cell_measure *= u.spacing(i);
    }
    const std::size_t n = g.cells(j);
    const std::size_t st = g.stride(j);
    for (bool upper : {false, true}) {
      BoundaryFace face;
      face.axis = j;
      face.upper = upper;
      face.cell_measure = cell_measure;
      const std::size_t layer = upper ? n - 1 : 0;
      for (std::size_t node = 0; node < g.node_count(); ++node) {
        if (g.axis_index(node, j) != layer) continue;
        const std::size_t inner = upper ? node - st : node + st;
        for (std::size_t k = 0; k < m; ++k) {
          face.values.push_back(1.5 * u.flat()[node * m + k] - 0.5 * u.flat()[inner * m + k]);
        }
        ++face.count;
      }
      trace.faces.push_back(std::move(face));
    }
  }
  return trace;
}

double boundary_lp_norm(const BoundaryTrace& trace, double p) {
  if (!(p >= 1.0)) throw ContractError("Lebesgue exponent must lie in [1, inf]");
  const std::size_t m = trace.space.dim();
  double acc = 0.0;
  for (const auto& face : trace.faces) {
    double s = 0.0;
    for (std::size_t i = 0; i < face.count; ++i) {
      const double v = banach::norm(trace.space, VecView(face.values.data() + i * m, m));
      if (p == banach::kInf) {
        acc = std::max(acc, v);
      } else {
        s += std::pow(v, p);
      }
    }
    if (p != banach::kInf) acc += s * face.cell_measure;
  }
  return p == banach::kInf ? acc : std::pow(acc, 1.0 / p);
}

GridFunction apply_functional(const GridFunction& u, VecView functional) {
  u.space().check(functional);
  std::vector<double> out(u.node_count());
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    out[node] = banach::pair(u.space(), u.at(node), functional);
  }
  return with_values(u, SpaceDescriptor::scalar(), std::move(out));
}

}  // namespace sobolev::grid
