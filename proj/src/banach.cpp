#include "sobolev/banach.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sobolev/errors.hpp"

namespace sobolev::banach {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_same_dim(const SpaceDescriptor& space, VecView a, VecView b) {
  space.check(a);
  space.check(b);
}

void require_lattice(const SpaceDescriptor& space, const char* op) {
  if (!space.lattice_capable()) {
    throw CapabilityError(std::string(op) + ": space " + to_string(space.kind()) +
                          " carries no lattice order");
  }
}

double max_abs(VecView x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::FiniteLr: return "FiniteLr";
    case SpaceKind::SampledSup: return "SampledSup";
    case SpaceKind::GridLr: return "GridLr";
    case SpaceKind::Hilbert: return "Hilbert";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "FiniteLr") return SpaceKind::FiniteLr;
  if (name == "SampledSup") return SpaceKind::SampledSup;
  if (name == "GridLr") return SpaceKind::GridLr;
  if (name == "Hilbert") return SpaceKind::Hilbert;
  throw ContractError("unknown space kind '" + name + "'");
}

SpaceDescriptor::SpaceDescriptor(SpaceKind kind, std::size_t dim, double exponent,
                                 std::vector<double> weights)
    : kind_(kind), dim_(dim), exponent_(exponent), weights_(std::move(weights)) {
  if (dim_ == 0) throw ContractError("space dimension must be >= 1");
  if (!(exponent_ >= 1.0)) throw ContractError("exponent must lie in [1, inf]");
  if (!weights_.empty()) {
    if (weights_.size() != dim_) throw ContractError("weights length must equal dim");
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) throw ContractError("weights must be positive and finite");
    }
  }
}

SpaceDescriptor SpaceDescriptor::finite_lr(std::size_t dim, double exponent) {
  return {SpaceKind::FiniteLr, dim, exponent, {}};
}

SpaceDescriptor SpaceDescriptor::sampled_sup(std::size_t dim) {
  return {SpaceKind::SampledSup, dim, kInf, {}};
}

SpaceDescriptor SpaceDescriptor::grid_lr(std::size_t dim, double exponent, std::vector<double> weights) {
  return {SpaceKind::GridLr, dim, exponent, std::move(weights)};
}

SpaceDescriptor SpaceDescriptor::hilbert(std::size_t dim) { return {SpaceKind::Hilbert, dim, 2.0, {}}; }

double SpaceDescriptor::weight(std::size_t i) const {
  if (kind_ != SpaceKind::GridLr) return 1.0;
  return weights_.empty() ? 1.0 / static_cast<double>(dim_) : weights_[i];
}

void SpaceDescriptor::check(VecView x) const {
  if (x.size() != dim_) {
    std::ostringstream os;
    os << "vector of length " << x.size() << " does not conform to " << to_string(kind_) << " of dim "
       << dim_;
    throw ContractError(os.str());
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw ContractError("vector has non-finite coordinates");
  }
}

double norm(const SpaceDescriptor& space, VecView x) {
  space.check(x);
  if (space.sup_norm()) return max_abs(x);
  const double r = space.exponent();
  const std::size_t n = x.size();
  if (r == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += space.weight(i) * std::abs(x[i]);
    return s;
  }
  if (r == 2.0) {
    // Unweighted Euclidean path shared by Hilbert and FiniteLr r=2.
    double s = 0.0;
    if (space.kind() == SpaceKind::GridLr) {
      for (std::size_t i = 0; i < n; ++i) s += space.weight(i) * x[i] * x[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    }
    return std::sqrt(s);
  }
  const double m = max_abs(x);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += space.weight(i) * std::pow(std::abs(x[i]) / m, r);
  return m * std::pow(s, 1.0 / r);
}

double pair(const SpaceDescriptor& space, VecView x, VecView functional) {
  require_same_dim(space, x, functional);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += space.weight(i) * x[i] * functional[i];
  return s;
}

double dual_norm(const SpaceDescriptor& space, VecView functional) {
  space.check(functional);
  const std::size_t n = functional.size();
  const double r = space.exponent();
  if (space.kind() == SpaceKind::SampledSup || r == kInf) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += space.weight(i) * std::abs(functional[i]);
    return s;
  }
  if (r == 1.0) {
    // sup_i |w_i f_i| / w_i
    return max_abs(functional);
  }
  const double q = r / (r - 1.0);
  const double m = max_abs(functional);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += space.weight(i) * std::pow(std::abs(functional[i]) / m, q);
  return m * std::pow(s, 1.0 / q);
}

PairingResult one_sided_norm_derivative(const SpaceDescriptor& space, VecView x, VecView h) {
  require_same_dim(space, x, h);
  const double nx = norm(space, x);
  const double nh = norm(space, h);
  PairingResult out;
  const auto finish = [&] {
    out.unique = std::abs(out.plus - out.minus) <= pairing_tolerance(nh);
    return out;
  };
  if (nx == 0.0) {
    out.plus = nh;
    out.minus = -nh;
    return finish();
  }
  const std::size_t n = x.size();
  if (space.sup_norm()) {
    const double cut = nx * (1.0 - kTieRelTol);
    bool first = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(x[k]) < cut) continue;
      const double v = sgn(x[k]) * h[k];
      if (first) {
        out.plus = out.minus = v;
        first = false;
      } else {
        out.plus = std::max(out.plus, v);
        out.minus = std::min(out.minus, v);
      }
    }
    return finish();
  }
  const double r = space.exponent();
  if (r == 1.0) {
    double smooth = 0.0;
    double kink = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = space.weight(i);
      if (x[i] != 0.0) {
        smooth += w * sgn(x[i]) * h[i];
      } else {
        kink += w * std::abs(h[i]);
      }
    }
    out.plus = smooth + kink;
    out.minus = smooth - kink;
    return finish();
  }
  // Smooth norm away from zero: J(x) is the single functional
  // |x|^{r-1} sign(x) / ||x||^{r-1}.
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    const double a = std::abs(x[i]) / nx;
    const double g = (r == 2.0) ? a : std::pow(a, r - 1.0);
    s += space.weight(i) * g * sgn(x[i]) * h[i];
  }
  out.plus = out.minus = s;
  return finish();
}

Vec lattice_abs(const SpaceDescriptor& space, VecView v) {
  require_lattice(space, "lattice_abs");
  space.check(v);
  Vec out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double a) { return std::abs(a); });
  return out;
}

Vec lattice_pos(const SpaceDescriptor& space, VecView v) {
  require_lattice(space, "lattice_pos");
  space.check(v);
  Vec out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double a) { return a > 0.0 ? a : 0.0; });
  return out;
}

Vec sign_apply(const SpaceDescriptor& space, VecView v, VecView w) {
  require_lattice(space, "sign_apply");
  require_same_dim(space, v, w);
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] > 0.0 ? w[i] : (v[i] < 0.0 ? -w[i] : 0.0);
  }
  return out;
}

Vec band_projection_disjoint(const SpaceDescriptor& space, VecView v, VecView w) {
  require_lattice(space, "band_projection_disjoint");
  require_same_dim(space, v, w);
  Vec out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) out[i] = w[i];
  }
  return out;
}

LatticeDerivative abs_one_sided(const SpaceDescriptor& space, VecView v, VecView w) {
  require_lattice(space, "abs_one_sided");
  if (!space.order_continuous()) {
    throw HypothesisError("abs_one_sided: " + to_string(space.kind()) +
                          " norm is not order continuous");
  }
  const Vec s = sign_apply(space, v, w);
  const Vec band = band_projection_disjoint(space, v, lattice_abs(space, w));
  LatticeDerivative d{s, s};
  for (std::size_t i = 0; i < s.size(); ++i) {
    d.plus[i] = s[i] + band[i];
    d.minus[i] = s[i] - band[i];
  }
  return d;
}

}  // namespace sobolev::banach
