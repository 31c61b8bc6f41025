#include "sobolev/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sobolev/errors.hpp"

namespace sobolev::calculus {

namespace {

using grid::Scheme;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

Vec diff(VecView a, VecView b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

/// L^p norm over masked nodes of the pointwise distance between two fields.
double masked_gap(const GridFunction& a, const GridFunction& b, double p, const std::vector<bool>& keep) {
  std::vector<double> norms;
  norms.reserve(a.node_count());
  for (std::size_t node = 0; node < a.node_count(); ++node) {
    if (keep[node]) norms.push_back(banach::norm(a.space(), diff(a.at(node), b.at(node))));
  }
  return grid::lp_accumulate(norms, p, a.cell_volume());
}

std::vector<bool> combine_masks(const std::vector<bool>& keep, const std::vector<bool>& drop) {
  std::vector<bool> out(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) out[i] = keep[i] && !drop[i];
  return out;
}

void require_order_continuous_lattice(const SpaceDescriptor& space, const char* op) {
  if (!space.lattice_capable()) {
    throw CapabilityError(std::string(op) + ": " + banach::to_string(space.kind()) + " carries no lattice order");
  }
  if (!space.order_continuous()) {
    throw HypothesisError(std::string(op) + ": " + banach::to_string(space.kind()) +
                          " norm is not order continuous");
  }
}

std::vector<bool> near_zero_coordinates(const GridFunction& u) {
  std::vector<bool> flagged(u.node_count(), false);
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    const auto x = u.at(node);
    const double tau = zero_tolerance(banach::norm(u.space(), x));
    for (double v : x) {
      if (std::abs(v) <= tau) {
        flagged[node] = true;
        break;
      }
    }
  }
  return flagged;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace

std::vector<bool> interior_mask(const grid::GridSpec& grid) {
  std::vector<bool> keep(grid.node_count());
  for (std::size_t node = 0; node < grid.node_count(); ++node) keep[node] = grid.interior(node);
  return keep;
}

const char* to_string(Growth g) { return g == Growth::Bounded ? "BOUNDED" : "DIVERGENT"; }

CriterionReport dq_criterion(const GridFunction& u, double p, const std::vector<std::size_t>& steps_list) {
  if (steps_list.empty()) throw ContractError("dq_criterion needs at least one step size");
  CriterionReport report;
  bool have_fit = false;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    std::vector<double> hs, qs;
    bool zero = false;
    for (std::size_t s : steps_list) {
      const double h = static_cast<double>(s) * u.spacing(j);
      const double q = grid::shift_difference_norm(u, j, s, p) / h;
      report.table.push_back({j, s, h, q});
      report.c_est = std::max(report.c_est, q);
      hs.push_back(h);
      qs.push_back(q);
      zero = zero || q == 0.0;
    }
    fit::LineFit f;
    f.points = hs.size();
    if (!zero && hs.size() >= 2) f = fit::loglog(hs, qs);
    if (!have_fit || f.slope < report.fit.slope) {
      report.fit = f;
      have_fit = true;
    }
  }
  const auto du = grid::finite_difference(u);
  for (const auto& c : du.components) report.derivative_bound = std::max(report.derivative_bound, grid::bochner_norm(c, p));
  const bool divergent = steps_list.size() >= 4 && report.fit.slope < kDivergenceSlope && report.fit.r2 >= kDivergenceR2;
  report.verdict = divergent ? Growth::Divergent : Growth::Bounded;
  return report;
}

LipschitzMap identity_map(const SpaceDescriptor& space) {
  return {"identity", space, space, [](VecView x) { return Vec(x.begin(), x.end()); }, 1.0,
          [](VecView, VecView v) { return std::make_pair(Vec(v.begin(), v.end()), Vec(v.begin(), v.end())); }};
}

LipschitzMap norm_map(const SpaceDescriptor& space) {
  return {"norm", space, SpaceDescriptor::scalar(), [space](VecView x) { return Vec{banach::norm(space, x)}; }, 1.0,
          [space](VecView x, VecView v) {
            const auto d = banach::one_sided_norm_derivative(space, x, v);
            return std::make_pair(Vec{d.plus}, Vec{d.minus});
          }};
}

LipschitzMap lattice_abs_map(const SpaceDescriptor& space) {
  return {"lattice_abs", space, space, [space](VecView x) { return banach::lattice_abs(space, x); }, 1.0,
          [space](VecView x, VecView v) {
            auto d = banach::abs_one_sided(space, x, v);
            return std::make_pair(std::move(d.plus), std::move(d.minus));
          }};
}

LipschitzMap functional_abs_map(const SpaceDescriptor& space, const Vec& functional) {
  space.check(functional);
  return {"functional_abs", space, SpaceDescriptor::scalar(),
          [space, functional](VecView x) { return Vec{std::abs(banach::pair(space, x, functional))}; },
          banach::dual_norm(space, functional), [space, functional](VecView x, VecView v) {
            const double t = banach::pair(space, x, functional);
            const double s = banach::pair(space, v, functional);
            if (t == 0.0) return std::make_pair(Vec{std::abs(s)}, Vec{-std::abs(s)});
            return std::make_pair(Vec{sgn(t) * s}, Vec{sgn(t) * s});
          }};
}

LipschitzCheck validate_lipschitz(const LipschitzMap& F, const GridFunction& u, std::uint64_t seed, std::size_t pairs) {
  if (!(u.space() == F.source)) throw ContractError("Lipschitz map source space does not match the grid function");
  const std::size_t n = u.node_count();
  std::vector<Vec> images(n);
  for (std::size_t node = 0; node < n; ++node) images[node] = F.rule(u.at(node));
  LipschitzCheck check;
  std::size_t worst_a = 0, worst_b = 0;
  auto visit = [&](std::size_t a, std::size_t b) {
    const double dx = banach::norm(F.source, diff(u.at(a), u.at(b)));
    if (dx == 0.0) return;
    const double q = banach::norm(F.target, diff(images[a], images[b])) / dx;
    ++check.pairs;
    if (q > check.max_quotient) {
      check.max_quotient = q;
      worst_a = a;
      worst_b = b;
    }
  };
  const std::size_t total = n * (n - 1) / 2;
  if (total <= pairs) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) visit(a, b);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
      const std::size_t a = draw(rng, n);
      const std::size_t b = draw(rng, n);
      if (a != b) visit(std::min(a, b), std::max(a, b));
    }
  }
  if (check.max_quotient > F.lipschitz * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << F.name << ": empirical Lipschitz quotient " << check.max_quotient << " exceeds claimed L = " << F.lipschitz
       << " at nodes (" << worst_a << ", " << worst_b << ")";
    throw LipschitzViolation(os.str(), worst_a, worst_b);
  }
  return check;
}

Composition compose_lipschitz(const LipschitzMap& F, const GridFunction& u, std::uint64_t seed) {
  Composition out{grid::map_pointwise(u, F.target, F.rule), validate_lipschitz(F, u, seed), 0.0, true};
  const auto du = grid::finite_difference(u);
  const auto dfu = grid::finite_difference(out.value);
  const auto keep = interior_mask(u.grid());
  double excess = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t node = 0; node < u.node_count(); ++node) scale = std::max(scale, banach::norm(F.target, out.value.at(node)));
  double slack = 0.0;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    slack = std::max(slack, 1e-12 * (1.0 + scale) / u.spacing(j));
    for (std::size_t node = 0; node < u.node_count(); ++node) {
      if (!keep[node]) continue;
      const double lhs = banach::norm(F.target, dfu[j].at(node));
      const double rhs = F.lipschitz * banach::norm(F.source, du[j].at(node));
      excess = std::max(excess, lhs - rhs);
    }
  }
  out.bound_excess = std::isfinite(excess) ? excess : 0.0;
  out.bound_holds = out.bound_excess <= slack;
  return out;
}

ChainField gateaux_chain_field(const LipschitzMap& F, const GridFunction& u, double p) {
  if (!F.onesided) throw CapabilityError(F.name + ": no one-sided derivative rule supplied");
  const auto du = grid::finite_difference(u);
  const auto fu = grid::map_pointwise(u, F.target, F.rule);
  const auto dfu = grid::finite_difference(fu);
  const std::size_t m = F.target.dim();
  const std::size_t n = u.node_count();
  ChainField out;
  out.plus.scheme = out.minus.scheme = Scheme::Central;
  out.plus.h = out.minus.h = du.h;
  const auto interior = interior_mask(u.grid());
  std::vector<bool> disagree(n, false);
  for (std::size_t j = 0; j < u.dim(); ++j) {
    std::vector<double> pv(n * m), mv(n * m);
    for (std::size_t node = 0; node < n; ++node) {
      const auto [pl, mi] = F.onesided(u.at(node), du[j].at(node));
      F.target.check(pl);
      F.target.check(mi);
      std::copy(pl.begin(), pl.end(), pv.begin() + static_cast<std::ptrdiff_t>(node * m));
      std::copy(mi.begin(), mi.end(), mv.begin() + static_cast<std::ptrdiff_t>(node * m));
      const double tol = banach::pairing_tolerance(banach::norm(u.space(), du[j].at(node)));
      if (banach::norm(F.target, diff(pl, mi)) > tol) disagree[node] = true;
    }
    out.plus.components.push_back(grid::with_values(u, F.target, std::move(pv)));
    out.minus.components.push_back(grid::with_values(u, F.target, std::move(mv)));
  }
  std::size_t interior_count = 0, bad = 0;
  for (std::size_t node = 0; node < n; ++node) {
    if (!interior[node]) continue;
    ++interior_count;
    bad += disagree[node] ? 1 : 0;
  }
  out.disagreement_measure = interior_count ? static_cast<double>(bad) / static_cast<double>(interior_count) : 0.0;
  const auto agree = combine_masks(interior, disagree);
  const double measure = u.domain().measure();
  for (std::size_t j = 0; j < u.dim(); ++j) {
    out.disagreement_lp += masked_gap(out.plus[j], out.minus[j], p, interior) / measure;
    out.fd_gap_lp += masked_gap(out.plus[j], dfu[j], p, agree);
  }
  return out;
}

NormField norm_derivative_field(const GridFunction& u) {
  const auto du = grid::finite_difference(u);
  const std::size_t n = u.node_count();
  NormField out;
  out.field.scheme = Scheme::Central;
  out.field.h = du.h;
  out.zero.assign(n, false);
  out.flagged.assign(n, false);
  std::vector<double> norms(n);
  for (std::size_t node = 0; node < n; ++node) {
    norms[node] = banach::norm(u.space(), u.at(node));
    out.zero[node] = norms[node] <= zero_tolerance(norms[node]);
    out.flagged[node] = out.zero[node];
  }
  for (std::size_t j = 0; j < u.dim(); ++j) {
    std::vector<double> plus(n, 0.0), minus(n, 0.0), value(n, 0.0);
    for (std::size_t node = 0; node < n; ++node) {
      if (out.zero[node]) continue;
      const auto r = banach::one_sided_norm_derivative(u.space(), u.at(node), du[j].at(node));
      plus[node] = r.plus;
      minus[node] = r.minus;
      value[node] = r.unique ? r.plus : 0.5 * (r.plus + r.minus);
      if (!r.unique) out.flagged[node] = true;
    }
    out.plus.push_back(std::move(plus));
    out.minus.push_back(std::move(minus));
    out.field.components.push_back(grid::with_values(u, SpaceDescriptor::scalar(), std::move(value)));
  }
  for (bool f : out.flagged) out.flagged_count += f ? 1 : 0;

  const auto dnorm = grid::finite_difference(grid::pointwise_norm(u));
  const auto keep = combine_masks(interior_mask(u.grid()), out.flagged);
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.dim(); ++j) {
    out.consistency_l1 += masked_gap(out.field[j], dnorm[j], 1.0, keep);
    for (std::size_t node = 0; node < n; ++node) {
      if (out.flagged[node]) continue;
      const double rhs = banach::norm(u.space(), du[j].at(node));
      excess = std::max(excess, (std::abs(out.field[j].at(node)[0]) - rhs) / std::max(1.0, rhs));
    }
  }
  out.estimate_excess = std::isfinite(excess) ? excess : 0.0;
  return out;
}

namespace {

LatticeField lattice_field(const GridFunction& u, bool positive_part) {
  require_order_continuous_lattice(u.space(), positive_part ? "pos_derivative_field" : "abs_derivative_field");
  const auto& space = u.space();
  const auto du = grid::finite_difference(u);
  LatticeField out;
  out.field.scheme = Scheme::Central;
  out.field.h = du.h;
  out.flagged = near_zero_coordinates(u);
  const std::size_t m = u.value_dim();
  for (std::size_t j = 0; j < u.dim(); ++j) {
    std::vector<double> values(u.flat().size());
    for (std::size_t node = 0; node < u.node_count(); ++node) {
      const auto x = u.at(node);
      const auto d = du[j].at(node);
      for (std::size_t s = 0; s < m; ++s) {
        values[node * m + s] = positive_part ? (x[s] > 0.0 ? d[s] : 0.0) : (x[s] > 0.0 ? d[s] : (x[s] < 0.0 ? -d[s] : 0.0));
      }
    }
    out.field.components.push_back(grid::with_values(u, space, std::move(values)));
  }
  const auto image = grid::map_pointwise(u, space, [&](VecView x) {
    return positive_part ? banach::lattice_pos(space, x) : banach::lattice_abs(space, x);
  });
  const auto dimage = grid::finite_difference(image);
  const auto keep = combine_masks(interior_mask(u.grid()), out.flagged);
  for (std::size_t j = 0; j < u.dim(); ++j) out.consistency_l1 += masked_gap(out.field[j], dimage[j], 1.0, keep);
  return out;
}

}  // namespace

LatticeField abs_derivative_field(const GridFunction& u) { return lattice_field(u, false); }

LatticeField pos_derivative_field(const GridFunction& u) { return lattice_field(u, true); }

StampacchiaReport stampacchia_check(const GridFunction& u, VecView w) {
  const auto& space = u.space();
  if (!space.lattice_capable()) {
    throw CapabilityError("stampacchia_check: " + banach::to_string(space.kind()) + " carries no lattice order");
  }
  space.check(w);
  for (double v : w) {
    if (v < 0.0) throw ContractError("stampacchia_check: w must be positive");
  }
  StampacchiaReport report;
  double tau_max = 0.0;
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    const auto x = u.at(node);
    const double tau = zero_tolerance(banach::norm(space, x));
    tau_max = std::max(tau_max, tau);
    for (std::size_t s = 0; s < x.size(); ++s) {
      if (std::min(std::abs(x[s]), w[s]) > tau) {
        report.precondition_violations.push_back(node);
        break;
      }
    }
  }
  report.precondition_ok = report.precondition_violations.empty();
  double h_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.dim(); ++j) h_min = std::min(h_min, u.spacing(j));
  report.tolerance = tau_max / h_min;
  const auto du = grid::finite_difference(u);
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    if (!u.grid().interior(node)) continue;
    bool bad = false;
    for (std::size_t j = 0; j < u.dim() && !bad; ++j) {
      const auto d = du[j].at(node);
      for (std::size_t s = 0; s < d.size(); ++s) {
        if (std::min(std::abs(d[s]), w[s]) > report.tolerance) {
          bad = true;
          break;
        }
      }
    }
    if (bad) report.violations.push_back(node);
  }
  report.holds = report.violations.empty();
  return report;
}

QuotientRule quotient_rule_field(const GridFunction& u, const GridFunction& phi_hat) {
  if (phi_hat.value_dim() != 1) throw ContractError("quotient_rule_field: phi_hat must be scalar");
  if (!(phi_hat.grid() == u.grid()) || !(phi_hat.domain() == u.domain())) {
    throw ContractError("quotient_rule_field: phi_hat lives on a different grid");
  }
  const std::size_t n = u.node_count();
  const std::size_t m = u.value_dim();
  std::vector<double> norms(n), phi(n), v(n * m, 0.0);
  std::vector<bool> excluded(n);
  for (std::size_t node = 0; node < n; ++node) {
    if (phi_hat.flat()[node] < 0.0) throw ContractError("quotient_rule_field: phi_hat must be nonnegative");
    norms[node] = banach::norm(u.space(), u.at(node));
    phi[node] = std::min(phi_hat.flat()[node], norms[node]);
    excluded[node] = norms[node] <= zero_tolerance(norms[node]);
    if (norms[node] > 0.0) {
      for (std::size_t k = 0; k < m; ++k) v[node * m + k] = u.at(node)[k] / norms[node] * phi[node];
    }
  }
  const auto phi_fn = grid::with_values(u, SpaceDescriptor::scalar(), phi);
  QuotientRule out{grid::with_values(u, u.space(), std::move(v)), {}, excluded, 0.0};
  const auto du = grid::finite_difference(u);
  const auto dphi = grid::finite_difference(phi_fn);
  const auto dnorm = norm_derivative_field(u);
  out.formula.scheme = Scheme::Central;
  out.formula.h = du.h;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    std::vector<double> d(n * m, 0.0);
    for (std::size_t node = 0; node < n; ++node) {
      const double r = norms[node];
      if (r == 0.0) continue;
      const double dn = dnorm.field[j].at(node)[0];
      const double dp = dphi[j].at(node)[0];
      const auto x = u.at(node);
      const auto dx = du[j].at(node);
      for (std::size_t k = 0; k < m; ++k) {
        d[node * m + k] = (dx[k] * r - x[k] * dn) / (r * r) * phi[node] + x[k] / r * dp;
      }
    }
    out.formula.components.push_back(grid::with_values(u, u.space(), std::move(d)));
  }
  const auto dv = grid::finite_difference(out.v);
  const auto keep = combine_masks(interior_mask(u.grid()), excluded);
  for (std::size_t j = 0; j < u.dim(); ++j) out.consistency_l1 += masked_gap(out.formula[j], dv[j], 1.0, keep);
  return out;
}

ProductRuleReport product_rule_check(const GridFunction& u, const GridFunction& psi) {
  const auto product = grid::multiply(psi, u);
  const auto dprod = grid::finite_difference(product);
  const auto du = grid::finite_difference(u);
  const auto dpsi = grid::finite_difference(psi);
  const auto keep = interior_mask(u.grid());
  const auto& g = u.grid();
  ProductRuleReport report;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    const auto rule = grid::combine(1.0, grid::multiply(dpsi[j], u), 1.0, grid::multiply(psi, du[j]));
    report.error_l1 += masked_gap(dprod[j], rule, 1.0, keep);
    const double h = u.spacing(j);
    double lip_psi = 0.0, lip_u = 0.0;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if (g.axis_index(node, j) + 1 >= g.cells(j)) continue;
      const std::size_t next = node + g.stride(j);
      lip_psi = std::max(lip_psi, std::abs(psi.at(next)[0] - psi.at(node)[0]) / h);
      lip_u = std::max(lip_u, banach::norm(u.space(), diff(u.at(next), u.at(node))) / h);
    }
    report.bound += h * lip_psi * lip_u * u.domain().measure();
  }
  report.holds = report.error_l1 <= report.bound * (1.0 + 1e-9) + 1e-12;
  return report;
}

HolderReport holder_beta(const GridFunction& u, double alpha, std::size_t max_pairs, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ContractError("holder exponent must lie in (0, 1]");
  const std::size_t n = u.node_count();
  std::vector<std::vector<double>> centers(n);
  for (std::size_t node = 0; node < n; ++node) centers[node] = u.center(node);
  HolderReport report;
  auto visit = [&](std::size_t a, std::size_t b) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < u.dim(); ++j) d2 += (centers[a][j] - centers[b][j]) * (centers[a][j] - centers[b][j]);
    const double dist = std::sqrt(d2);
    const double q = banach::norm(u.space(), diff(u.at(a), u.at(b))) / std::pow(dist, alpha);
    ++report.pairs;
    if (q > report.beta) {
      report.beta = q;
      report.first_node = a;
      report.second_node = b;
    }
  };
  const std::size_t total = n * (n - 1) / 2;
  report.exhaustive = max_pairs == 0 || total <= max_pairs;
  if (report.exhaustive) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) visit(a, b);
    }
  } else {
    std::mt19937_64 rng(seed);
    while (report.pairs < max_pairs) {
      const std::size_t a = draw(rng, n);
      const std::size_t b = draw(rng, n);
      if (a != b) visit(std::min(a, b), std::max(a, b));
    }
  }
  return report;
}

std::vector<double> norm_quotients(const SpaceDescriptor& space, VecView x, VecView v, const std::vector<double>& ts) {
  const double base = banach::norm(space, x);
  std::vector<double> out;
  Vec y(x.size());
  for (double t : ts) {
    if (t == 0.0) throw ContractError("norm_quotients: t must be nonzero");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + t * v[i];
    out.push_back((banach::norm(space, y) - base) / t);
  }
  return out;
}

}  // namespace sobolev::calculus
