#include "suite_entries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sobolev/corpus.hpp"
#include "sobolev/errors.hpp"

namespace sobolev::suite::detail {

namespace {

using banach::kInf;
using banach::SpaceDescriptor;
using banach::Vec;
using grid::GridFunction;
using nlohmann::json;
using reports::at_least;
using reports::at_most;
using reports::Report;
using reports::Table;

constexpr double kPi = std::numbers::pi;

double as_number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw ContractError("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

std::vector<std::pair<double, double>> ladder_points(const std::vector<std::size_t>& ns, const std::vector<double>& e) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ns.size(); ++i) pts.emplace_back(1.0 / static_cast<double>(ns[i]), e[i]);
  return pts;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

void set_convergence(Report& r, const fit::ConvergenceReport& c, const std::string& column) {
  r.table = reports::convergence_table(c, column);
  r.fitted_slope = c.fitted_order;
  r.residual = c.residual;
}

GridFunction scalar_on(const GridFunction& like, const std::function<double(std::span<const double>)>& f) {
  return grid::sample_scalar(like.domain(), like.grid(), f);
}

calculus::LipschitzMap lipschitz_map(const std::string& name, const SpaceDescriptor& space) {
  if (name == "norm") return calculus::norm_map(space);
  if (name == "abs") return calculus::lattice_abs_map(space);
  if (name == "identity") return calculus::identity_map(space);
  throw ContractError("unknown map '" + name + "' (norm, abs, identity)");
}

// ---------------------------------------------------------------------------
// calculus

void dq_criterion_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  const double p = a.number("p");
  const auto steps = a.integers("steps");
  const auto& ns = a.ladder;
  if (a.string("expect") == "divergent") {
    const auto crit = calculus::dq_criterion(corpus::materialize(s, ns.back()), p, steps);
    r.table = {{"axis", "steps", "h", "quotient"}, {}};
    for (const auto& row : crit.table) {
      r.table.rows.push_back({static_cast<double>(row.axis), static_cast<double>(row.steps), row.h, row.quotient});
    }
    r.fitted_slope = crit.fit.slope;
    r.residual = crit.fit.residual;
    r.verdict = calculus::to_string(crit.verdict);
    r.metrics.push_back(at_least("verdict_matches", flag(crit.verdict == calculus::Growth::Divergent), 1.0));
    return;
  }
  if (a.string("expect") != "bounded") throw ContractError("expect must be \"bounded\" or \"divergent\"");
  const std::size_t ref_n = ns.back() * (s.dim == 1 ? 16 : 4);
  const double ref = calculus::dq_criterion(corpus::materialize(s, ref_n), p, {1}).derivative_bound;
  std::vector<double> errs, cs;
  calculus::Growth last = calculus::Growth::Bounded;
  for (std::size_t n : ns) {
    const auto crit = calculus::dq_criterion(corpus::materialize(s, n), p, steps);
    cs.push_back(crit.c_est);
    errs.push_back(std::abs(crit.c_est - ref));
    last = crit.verdict;
  }
  const auto conv = fit::convergence(ladder_points(ns, errs), 1.0);
  r.table = {{"h", "c_est", "error"}, {}};
  for (std::size_t i = 0; i < ns.size(); ++i) r.table.rows.push_back({1.0 / ns[i], cs[i], errs[i]});
  r.fitted_slope = conv.fitted_order;
  r.residual = conv.residual;
  r.verdict = calculus::to_string(last);
  r.metrics.push_back(at_least("verdict_matches", flag(last == calculus::Growth::Bounded), 1.0));
  r.metrics.push_back(at_least("c_est_order", conv.fitted_order, 1.0));
}

void compose_lipschitz_entry(const Args& a, Report& r) {
  const auto u = corpus::materialize(a.sample(), a.ladder.back());
  const auto F = lipschitz_map(a.string("map"), u.space());
  const auto c = calculus::compose_lipschitz(F, u, a.seed);
  r.table = {{"pairs", "max_quotient", "lipschitz", "bound_excess"},
             {{static_cast<double>(c.lipschitz.pairs), c.lipschitz.max_quotient, F.lipschitz, c.bound_excess}}};
  r.metrics.push_back(at_most("lipschitz_quotient", c.lipschitz.max_quotient / F.lipschitz, 1.0 + 1e-9));
  r.metrics.push_back(at_least("bound_holds", flag(c.bound_holds), 1.0));
}

void gateaux_chain_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  const double p = a.number("p");
  r.table = {{"h", "disagreement_measure", "disagreement_lp", "fd_gap_lp"}, {}};
  std::vector<double> lp;
  for (std::size_t n : a.ladder) {
    const auto u = corpus::materialize(s, n);
    const auto ch = calculus::gateaux_chain_field(lipschitz_map(a.string("map"), u.space()), u, p);
    r.table.rows.push_back({1.0 / n, ch.disagreement_measure, ch.disagreement_lp, ch.fd_gap_lp});
    lp.push_back(ch.disagreement_lp);
  }
  const double ratio = lp.front() == 0.0 ? (lp.back() == 0.0 ? 0.0 : kInf) : lp.back() / lp.front();
  r.metrics.push_back(at_most("disagreement_ratio", ratio, 1.0));
}

void norm_field_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  std::vector<double> errs;
  double excess = -kInf;
  for (std::size_t n : a.ladder) {
    const auto f = calculus::norm_derivative_field(corpus::materialize(s, n));
    errs.push_back(f.consistency_l1);
    excess = std::max(excess, f.estimate_excess);
  }
  const auto conv = fit::convergence(ladder_points(a.ladder, errs), 0.9);
  set_convergence(r, conv, "consistency_l1");
  r.metrics.push_back(at_least("consistency_order", conv.fitted_order, 0.9));
  r.metrics.push_back(at_most("estimate_excess", excess, 1e-12));
}

void norm_estimate_entry(const Args& a, Report& r) {
  const auto f = calculus::norm_derivative_field(corpus::materialize(a.sample(), a.ladder.back()));
  const auto u = corpus::circle(a.ladder.back());
  const auto cf = calculus::norm_derivative_field(u);
  const auto du = grid::finite_difference(u);
  double lhs = 0.0, rhs_gap = 0.0;
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    if (!u.grid().interior(node) || cf.flagged[node]) continue;
    lhs = std::max(lhs, std::abs(cf.field[0].at(node)[0]));
    rhs_gap = std::max(rhs_gap, std::abs(banach::norm(u.space(), du[0].at(node)) - 1.0));
  }
  r.table = {{"estimate_excess", "flagged", "circle_lhs_max", "circle_rhs_gap"},
             {{f.estimate_excess, static_cast<double>(f.flagged_count), lhs, rhs_gap}}};
  r.metrics.push_back(at_most("estimate_excess", f.estimate_excess, 1e-12));
  r.metrics.push_back(at_most("circle_lhs_max", lhs, 1e-10));
  r.metrics.push_back(at_most("circle_rhs_gap", rhs_gap, 1e-3));
}

void lattice_entry(const Args& a, Report& r, bool positive) {
  const auto s = a.sample();
  std::vector<double> errs;
  double mismatches = 0.0;
  for (std::size_t n : a.ladder) {
    const auto u = corpus::materialize(s, n);
    const auto abs = calculus::abs_derivative_field(u);
    if (!positive) {
      errs.push_back(abs.consistency_l1);
      continue;
    }
    const auto pos = calculus::pos_derivative_field(u);
    errs.push_back(pos.consistency_l1);
    const auto du = grid::finite_difference(u);
    for (std::size_t j = 0; j < u.dim(); ++j) {
      for (std::size_t node = 0; node < u.node_count(); ++node) {
        if (abs.flagged[node]) continue;
        for (std::size_t k = 0; k < u.value_dim(); ++k) {
          mismatches += pos.field[j].at(node)[k] != 0.5 * (abs.field[j].at(node)[k] + du[j].at(node)[k]);
        }
      }
    }
  }
  const auto conv = fit::convergence(ladder_points(a.ladder, errs), 0.9);
  set_convergence(r, conv, "consistency_l1");
  r.metrics.push_back(at_least("consistency_order", conv.fitted_order, 0.9));
  if (positive) r.metrics.push_back(at_most("identity_mismatches", mismatches, 0.0));
}

void stampacchia_entry(const Args& a, Report& r) {
  const auto base = corpus::materialize(a.sample(), a.ladder.back());
  const std::size_t m = base.value_dim();
  const std::size_t half = m / 2;
  auto values = base.flat();
  for (std::size_t node = 0; node < base.node_count(); ++node) {
    for (std::size_t k = half; k < m; ++k) values[node * m + k] = 0.0;
  }
  const auto u = grid::with_values(base, base.space(), std::move(values));
  Vec w(m, 0.0);
  for (std::size_t k = half; k < m; ++k) w[k] = 1.0 + static_cast<double>(k);
  const auto rep = calculus::stampacchia_check(u, w);
  const auto overlap = calculus::stampacchia_check(u, Vec(m, 1.0));
  r.table = {{"tolerance", "precondition_violations", "violations", "control_violations"},
             {{rep.tolerance, static_cast<double>(rep.precondition_violations.size()),
               static_cast<double>(rep.violations.size()),
               static_cast<double>(overlap.precondition_violations.size())}}};
  r.metrics.push_back(at_least("precondition_ok", flag(rep.precondition_ok), 1.0));
  r.metrics.push_back(at_least("holds", flag(rep.holds), 1.0));
  r.metrics.push_back(at_least("overlap_detected", flag(!overlap.precondition_ok), 1.0));
}

void quotient_rule_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  std::vector<double> errs;
  for (std::size_t n : a.ladder) {
    const auto u = corpus::materialize(s, n);
    const auto phi = scalar_on(u, [](std::span<const double> xi) {
      double v = 1.0;
      for (double x : xi) v *= std::sin(kPi * x);
      return v;
    });
    errs.push_back(calculus::quotient_rule_field(u, phi).consistency_l1);
  }
  const auto conv = fit::convergence(ladder_points(a.ladder, errs), 0.9);
  set_convergence(r, conv, "consistency_l1");
  r.metrics.push_back(at_least("consistency_order", conv.fitted_order, 0.9));
}

void product_rule_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  std::vector<double> errs;
  bool holds = true;
  for (std::size_t n : a.ladder) {
    const auto u = corpus::materialize(s, n);
    const auto psi = scalar_on(u, [](std::span<const double> xi) {
      double v = 0.0;
      for (double x : xi) v += x;
      return std::exp(v) * std::cos(2.0 * xi[0]);
    });
    const auto rep = calculus::product_rule_check(u, psi);
    errs.push_back(rep.error_l1);
    holds = holds && rep.holds;
  }
  const auto conv = fit::convergence(ladder_points(a.ladder, errs), 1.0);
  set_convergence(r, conv, "error_l1");
  r.metrics.push_back(at_least("holds", flag(holds), 1.0));
  r.metrics.push_back(at_least("error_order", conv.fitted_order, 1.0));
}

void holder_entry(const Args& a, Report& r) {
  const auto u = corpus::materialize(a.sample(), a.integer("n"));
  const double alpha = a.number("alpha");
  const auto h = calculus::holder_beta(u, alpha);
  const double w = grid::sobolev_norm(u, 2.0);
  r.table = {{"alpha", "beta", "w_norm", "first_node", "second_node"},
             {{alpha, h.beta, w, static_cast<double>(h.first_node), static_cast<double>(h.second_node)}}};
  r.metrics.push_back(at_most("beta_over_w_norm", h.beta / w, 1.0));
}

void norm_quotients_entry(const Args& a, Report& r) {
  std::mt19937_64 rng(a.seed);
  std::normal_distribution<double> g;
  const std::vector<SpaceDescriptor> spaces{SpaceDescriptor::hilbert(4), SpaceDescriptor::finite_lr(4, 1.0),
                                            SpaceDescriptor::sampled_sup(4), SpaceDescriptor::grid_lr(4, 1.5),
                                            SpaceDescriptor::grid_lr(4, 3.0)};
  std::vector<double> ts;
  for (int k = 20; k >= 0; --k) ts.push_back(std::ldexp(1.0, -k));
  const std::size_t pairs = a.integer("pairs");
  double violations = 0.0, worst_drop = 0.0;
  r.table = {{"space", "pairs", "violations"}, {}};
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    double local = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
      Vec x(4), v(4);
      for (auto& c : x) c = g(rng);
      for (auto& c : v) c = g(rng);
      const auto q = calculus::norm_quotients(spaces[si], x, v, ts);
      const double scale = banach::norm(spaces[si], x) + banach::norm(spaces[si], v);
      for (std::size_t k = 1; k < q.size(); ++k) {
        // Rounding in ||x + t v|| - ||x||, divided by the smaller t.
        const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * scale / ts[k - 1];
        const double ratio = (q[k - 1] - q[k]) / rounding;
        worst_drop = std::max(worst_drop, ratio);
        if (ratio > 1.0) local += 1.0;
      }
    }
    violations += local;
    r.table.rows.push_back({static_cast<double>(si), static_cast<double>(pairs), local});
  }
  r.metrics.push_back(at_most("violations", violations, 0.0));
  r.metrics.push_back(at_most("worst_drop_over_rounding", worst_drop, 1.0));
}

// ---------------------------------------------------------------------------
// gridfn

void extension_entry(const Args& a, Report& r) {
  const std::size_t n = a.ladder.back();
  const std::size_t pad = std::max<std::size_t>(1, n / 4);
  const auto family = corpus::smooth_samples(n, a.integer("count"), a.seed);
  double worst = 0.0, mismatches = 0.0;
  r.table = {{"member", "w_norm", "extension_w_norm", "ratio"}, {}};
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& u = family[i];
    const auto e = grid::extend_reflect(u, pad);
    const double wu = grid::sobolev_norm(u, 2.0), we = grid::sobolev_norm(e, 2.0);
    worst = std::max(worst, we / wu);
    r.table.rows.push_back({static_cast<double>(i), wu, we, we / wu});
    const auto back = grid::restrict_interior(e, pad);
    for (std::size_t k = 0; k < u.flat().size(); ++k) mismatches += back.flat()[k] != u.flat()[k];
  }
  r.metrics.push_back(at_most("max_norm_ratio", worst, grid::extension_norm_bound(1)));
  r.metrics.push_back(at_most("restriction_mismatches", mismatches, 0.0));
}

// ---------------------------------------------------------------------------
// theorems

void embedding_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  const auto u = corpus::materialize(s, a.ladder.back());
  const auto probes = corpus::scalar_probes(s.dim, a.ladder.back(), a.integer("probes"), a.seed);
  const auto rep = theorems::embedding_check(u, a.number("p"), a.number("r"), probes);
  r.table = {{"p", "r", "vector_ratio", "scalar_constant", "transfer_ratio"},
             {{rep.p, rep.r, rep.vector_ratio, rep.scalar_constant, rep.transfer_ratio}}};
  r.metrics.push_back(at_most("transfer_ratio", rep.transfer_ratio, 1.0 + 1e-6));
}

void morrey_entry(const Args& a, Report& r) {
  const auto s = a.sample();
  const auto u = corpus::materialize(s, a.ladder.back());
  const auto probes = corpus::scalar_probes(s.dim, a.ladder.back(), a.integer("probes"), a.seed);
  const auto rep = theorems::morrey_check(u, a.number("p"), probes);
  r.table = {{"alpha", "beta", "w_norm", "scalar_constant", "bound"},
             {{rep.alpha, rep.beta, rep.w_norm, rep.scalar_constant, rep.bound}}};
  r.metrics.push_back(at_most("beta_over_bound", rep.beta / rep.bound, 1.0));
}

void poincare_entry(const Args& a, Report& r) {
  const auto u = corpus::materialize(a.sample(), a.ladder.back());
  const auto rep = theorems::poincare_check(u, a.number("p"), a.integer("axis"), 0.01);
  const double lambda = theorems::dirichlet_first_eigenvalue(a.integer("eigen_n"), 1.0);
  const double gap = std::abs(lambda / (kPi * kPi) - 1.0);
  r.table = {{"ratio", "constant", "eigenvalue", "eigenvalue_gap"}, {{rep.ratio, rep.constant, lambda, gap}}};
  r.metrics.push_back(at_least("precondition_ok", flag(rep.precondition_ok), 1.0));
  r.metrics.push_back(at_least("ratio_over_constant", rep.ratio / rep.constant, 0.99));
  r.metrics.push_back(at_most("eigenvalue_gap", gap, 0.01));
}

void w0_entry(const Args& a, Report& r, bool weak) {
  const std::size_t n = a.integer("n");
  const auto& samples = corpus::w0_corpus();
  double agree = 0.0, worst_order = kInf;
  r.table = {{"index", "label", "strong", weak ? "weak" : "scalar", weak ? "weak_failing" : "boundary_norm"}, {}};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto u = corpus::materialize(s, n);
    const auto strong = theorems::w0_membership(u, 2.0);
    double other = 0.0, extra = 0.0;
    if (weak) {
      const auto wk = theorems::weak_w0_check(u, theorems::coordinate_functionals(u.space()), 2.0);
      other = flag(wk.member);
      extra = static_cast<double>(wk.failing.size());
    } else {
      other = flag(theorems::w0_membership(grid::pointwise_norm(u), 2.0).member);
      extra = strong.boundary_norm;
    }
    const double label = flag(s.w0_member);
    if (flag(strong.member) == label && other == label) agree += 1.0;
    r.table.rows.push_back({static_cast<double>(i), label, flag(strong.member), other, extra});
    if (weak || !s.w0_member) continue;
    std::vector<double> norms;
    for (std::size_t m : a.ladder) norms.push_back(theorems::w0_membership(corpus::materialize(s, m), 2.0).boundary_norm);
    worst_order = std::min(worst_order, fit::convergence(ladder_points(a.ladder, norms), 1.9).fitted_order);
  }
  r.metrics.push_back(at_least("agreement", agree, static_cast<double>(samples.size())));
  if (!weak) r.metrics.push_back(at_least("boundary_order", worst_order, 1.9));
}

void ideal_entry(const Args& a, Report& r) {
  const auto u = corpus::materialize(a.sample(), a.ladder.back());
  const auto h2 = SpaceDescriptor::hilbert(2);
  std::vector<double> dominated, loose;
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    const double nu = banach::norm(u.space(), u.at(node));
    const double t = u.center(node)[0];
    dominated.push_back(0.9 * nu * std::cos(3.0 * t));
    dominated.push_back(0.9 * nu * std::sin(3.0 * t));
    loose.push_back(nu + 0.1);
    loose.push_back(0.0);
  }
  const auto v = grid::with_values(u, h2, std::move(dominated));
  const auto w = grid::with_values(u, h2, std::move(loose));
  const auto rep = theorems::ideal_property_check(u, v, 2.0);
  const auto ctrl = theorems::ideal_property_check(u, w, 2.0);
  r.table = {{"u_member", "v_member", "dominated", "control_dominated", "control_witness"},
             {{flag(rep.u_member), flag(rep.v_member), flag(rep.dominated), flag(ctrl.dominated),
               ctrl.witness ? static_cast<double>(*ctrl.witness) : -1.0}}};
  r.metrics.push_back(at_least("holds", flag(rep.holds), 1.0));
  r.metrics.push_back(at_least("control_rejected", flag(!ctrl.dominated && ctrl.witness.has_value()), 1.0));
}

void norm_continuity_entry(const Args& a, Report& r) {
  const auto u = corpus::materialize(a.sample(), a.ladder.back());
  const auto g = grid::map_pointwise(u, u.space(), [&](banach::VecView x) {
    Vec out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = std::cos(3.0 * x[k] + static_cast<double>(k));
    return out;
  });
  std::vector<GridFunction> seq;
  for (std::size_t k = 1; k <= a.integer("terms"); ++k) seq.push_back(grid::combine(1.0, u, std::ldexp(1.0, -static_cast<int>(k)), g));
  const auto rep = theorems::norm_map_continuity_check(u, seq, 2.0);
  r.table = {{"k", "vector_distance", "scalar_distance"}, {}};
  for (std::size_t k = 0; k < seq.size(); ++k) {
    r.table.rows.push_back({static_cast<double>(k + 1), rep.vector_distances[k], rep.scalar_distances[k]});
  }
  r.metrics.push_back(at_least("holds", flag(rep.holds), 1.0));
}

void aubin_lions_entry(const Args& a, Report& r) {
  const auto ladder = corpus::aubin_lions_ladder(a.integer("finest"));
  const auto eps = a.numbers("eps");
  const auto prof = theorems::aubin_lions_probe(corpus::compact_family(ladder, a.integer("members"), a.seed), eps, 2.0,
                                                corpus::compact_family_bounds());
  const auto ctrl = theorems::aubin_lions_probe(corpus::control_family(ladder), {0.1}, 2.0,
                                                corpus::control_family_bounds());
  r.table = {{"level_n", "eps", "count", "control_count_0.1"}, {}};
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    for (std::size_t e = 0; e < eps.size(); ++e) {
      r.table.rows.push_back({static_cast<double>(ladder[l]), eps[e], static_cast<double>(prof.counts[l][e]),
                              static_cast<double>(ctrl.counts[l][0])});
    }
  }
  double growth = 0.0;
  for (double gr : prof.growth) growth = std::max(growth, gr);
  r.verdict = theorems::to_string(prof.verdict);
  r.metrics.push_back(at_most("max_growth", growth, 2.0));
  r.metrics.push_back(at_least("control_growth", ctrl.growth[0], 4.0));
}

void mollifier_entry(const Args& a, Report& r) {
  const auto family = corpus::smooth_samples(a.integer("n"), a.integer("count"), a.seed);
  const auto rep = theorems::mollifier_family_check(family, a.numbers("levels"), 2.0);
  r.table = {{"level", "sup_error", "bound"}, {}};
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    r.table.rows.push_back({rep.levels[k], rep.sup_errors[k], rep.constant / rep.levels[k]});
  }
  r.fitted_slope = rep.decay.fitted_order;
  r.residual = rep.decay.residual;
  r.metrics.push_back(at_least("monotone", flag(rep.monotone), 1.0));
  r.metrics.push_back(at_least("bounded", flag(rep.bounded), 1.0));
  r.metrics.push_back(at_least("decay_order", rep.decay.fitted_order, 1.0));
}

void tensor_entry(const Args& a, Report& r) {
  const std::size_t count = a.integer("count"), max_size = a.integer("max_size"), h_dim = a.integer("h_dim");
  if (max_size < 2) throw ContractError("max_size must be >= 2");
  const double p = a.number("p");
  double worst = 0.0, mismatches = 0.0;
  r.table = {{"matrix", "size", "scalar_norm", "extended_norm", "gap"}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 2 + (i * 7) % (max_size - 1);
    const auto T = corpus::random_matrix(n, a.seed + i);
    const auto rep = theorems::tensor_extend(T, h_dim, p, a.seed + i, 2000);
    worst = std::max(worst, rep.gap);
    r.table.rows.push_back({static_cast<double>(i), static_cast<double>(n), rep.scalar_norm, rep.extended_norm, rep.gap});

    const auto fm = corpus::random_matrix(n, a.seed + 7919 + i);
    Vec f(fm.a.begin(), fm.a.begin() + static_cast<std::ptrdiff_t>(n));
    Vec x(h_dim);
    for (std::size_t k = 0; k < h_dim; ++k) x[k] = 1.0 - 0.75 * static_cast<double>(k);
    Vec vals;
    for (double fi : f) {
      for (double xk : x) vals.push_back(fi * xk);
    }
    const GridFunction u(grid::BoxDomain::unit(1), grid::GridSpec::uniform(1, n), SpaceDescriptor::hilbert(h_dim),
                         std::move(vals));
    const auto tu = theorems::tensor_apply(T, u);
    const Vec tf = theorems::apply(T, f);
    for (std::size_t node = 0; node < n; ++node) {
      for (std::size_t k = 0; k < h_dim; ++k) mismatches += tu.at(node)[k] != tf[node] * x[k];
    }
  }
  r.metrics.push_back(at_most("max_gap", worst, 1e-8));
  r.metrics.push_back(at_most("identity_mismatches", mismatches, 0.0));
}

// ---------------------------------------------------------------------------
// counterexamples

void witness_common(const counterexamples::WitnessTable& w, Report& r) {
  r.table = reports::witness_table(w);
  r.verdict = counterexamples::to_string(w.verdict);
  r.metrics.push_back(at_least("confirms_failure", flag(w.verdict == counterexamples::Verdict::ConfirmsFailure), 1.0));
  r.metrics.push_back(at_least("positive_side", flag(w.positive_side_holds), 1.0));
}

void indicator_entry(const Args& a, Report& r) {
  const double rr = a.number("r");
  const auto w = counterexamples::indicator_path_witness(rr, a.numbers("h_list"), a.integer("coords"));
  witness_common(w, r);
  r.fitted_slope = w.metric("fitted_slope");
  r.metrics.push_back(at_most("slope_error", std::abs(w.metric("fitted_slope") - w.metric("expected_slope")), 0.05));
  r.metrics.push_back(at_most("weak_max_constant", w.metric("weak_max_constant"), 1.01));
}

void c0_entry(const Args& a, Report& r) {
  const auto w = counterexamples::c0_sine_witness(a.integers("n_list"), a.numbers("t_samples"));
  witness_common(w, r);
  r.metrics.push_back(at_least("min_tail_sup", w.metric("min_tail_sup"), 0.99));
  r.metrics.push_back(at_most("pairing_derivative_sup", w.metric("pairing_derivative_sup"), 1.0 + 1e-12));
}

void ck_entry(const Args& a, Report& r) {
  const auto w = counterexamples::ck_pospart_witness(a.numbers("h_list"), a.integer("grid_k"));
  witness_common(w, r);
  r.metrics.push_back(at_least("finest_distance", w.rows.back().measured, 0.98));
  r.metrics.push_back(at_most("l2_contrast", w.metric("l2_contrast"), 0.05));
}

ParamSpec num(std::string n, json v) { return {std::move(n), ParamKind::Number, std::move(v)}; }
ParamSpec integer(std::string n, json v) { return {std::move(n), ParamKind::Integer, std::move(v)}; }
ParamSpec str(std::string n, json v) { return {std::move(n), ParamKind::String, std::move(v)}; }
ParamSpec nums(std::string n, json v) { return {std::move(n), ParamKind::NumberList, std::move(v)}; }
ParamSpec ints(std::string n, json v) { return {std::move(n), ParamKind::IntegerList, std::move(v)}; }

std::vector<Op> build_ops() {
  using namespace std::placeholders;
  const json dyadic = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625};
  std::vector<Op> ops;
  auto add = [&](std::string op, std::string module, std::string result, std::string quote, std::string summary,
                 std::string sample, std::vector<ParamSpec> params, std::vector<std::string> metrics, Runner run) {
    ops.push_back({{std::move(op), std::move(module), {std::move(result), std::move(quote)}, std::move(summary),
                    std::move(sample), std::move(params), std::move(metrics)},
                   std::move(run)});
  };

  add("dq_criterion", "calculus", "Difference Quotient Criterion",
      "\\|u(\\cdot+h\\,e_j)-u\\|_{L^p(\\omega,X)}\\leq C|h|",
      "Estimates C from shift quotients. For bounded samples |C_est - max_j ||D_j u||_p| is fitted over the "
      "ladder; for divergent ones the quotient slope decides.",
      "chain_hilbert_wave", {num("p", 2.0), ints("steps", {1, 2, 4, 8}), str("expect", "bounded")},
      {"verdict_matches", "c_est_order"}, dq_criterion_entry);
  add("compose_lipschitz", "calculus", "Lipschitz composition theorem",
      "F\\circ u\\in W^{1,p}(\\Omega,Y) for any u\\in W^{1,p}(\\Omega,X); L\\|u'(t)\\|_X",
      "Composes a Lipschitz map with the sample, validates L on seeded pairs and the derivative bound.",
      "chain_l1_wave", {str("map", "norm")}, {"lipschitz_quotient", "bound_holds"}, compose_lipschitz_entry);
  add("gateaux_chain_field", "calculus", "Gateaux derivative theorem",
      "D_j(F\\circ u)=D^{+}_{D_ju}F(u)=D^{-}_{D_ju}F(u)",
      "One-sided chain fields; the L^p disagreement of plus and minus must not grow under refinement.",
      "sup_diagonal_tie", {str("map", "norm"), num("p", 2.0)}, {"disagreement_ratio"}, gateaux_chain_entry);
  add("norm_derivative_field", "calculus", "norm weak derivative theorem",
      "D_j\\|u(\\xi)\\|_X=\\langle D_ju(\\xi),J(u(\\xi))\\rangle",
      "Duality-pairing derivative of the norm against finite differences of the pointwise norm.",
      "chain_sup_wave", {}, {"consistency_order", "estimate_excess"}, norm_field_entry);
  add("norm_estimate", "calculus", "norm estimate corollary", "|D_j\\|u(\\xi)\\|_X|\\leq\\|D_ju(\\xi)\\|_X",
      "Nodewise estimate on the sample plus the circle, where the left side vanishes and the right side is 1.",
      "chain_sup_sheet", {}, {"estimate_excess", "circle_lhs_max", "circle_rhs_gap"}, norm_estimate_entry);
  add("abs_derivative_field", "calculus", "lattice Sobolev theorem", "D_j|u|=(\\textnormal{sign }u)D_ju",
      "(sign u) D_j u against finite differences of |u| away from the zero set.", "chain_gridlr2_wave", {},
      {"consistency_order"}, std::bind(lattice_entry, _1, _2, false));
  add("pos_derivative_field", "calculus", "positive part corollary", "D_ju^+=P_{u^+}D_ju; u^+=\\frac{1}{2}(|u|+u)",
      "Band-projected derivative against finite differences of u+, and the half-sum identity.",
      "chain_gridlr2_wave", {}, {"consistency_order", "identity_mismatches"}, std::bind(lattice_entry, _1, _2, true));
  add("stampacchia_check", "calculus", "Stampacchia corollary",
      "Suppose that $|u|\\wedge w=0$, then $|D_ju|\\wedge w=0$",
      "Disjointness of |D_j u| from w when |u| is disjoint from w; an overlapping w must be rejected.",
      "chain_gridlr2_wave", {}, {"precondition_ok", "holds", "overlap_detected"}, stampacchia_entry);
  add("quotient_rule_field", "calculus", "quotient rule lemma", "v:=\\frac{u}{\\|u\\|_X}\\varphi\\,1_{u\\neq0}",
      "Assembled derivative of u / ||u|| (phi ^ ||u||) against finite differences of v.", "chain_hilbert_wave", {},
      {"consistency_order"}, quotient_rule_entry);
  add("product_rule_check", "calculus", "product rule lemma", "D_j(\\psi u)=(D_j\\psi)u+\\psi D_ju",
      "Discrete product rule residual for a smooth scalar multiplier.", "chain_hilbert_sheet", {},
      {"holds", "error_order"}, product_rule_entry);
  add("holder_beta", "calculus", "Holder class", "\\|f(\\xi)-f(\\eta)\\|_X\\leq\\beta|\\xi-\\eta|^\\alpha",
      "Exhaustive Holder quotient; bounded by the W^{1,2} norm on intervals for alpha = 1/2.", "sqrt",
      {num("alpha", 0.5), integer("n", 1024)}, {"beta_over_w_norm"}, holder_entry);
  add("norm_quotients", "calculus", "convex difference quotients",
      "difference quotients define an increasing function",
      "(||x + t v|| - ||x||) / t is nondecreasing in t for seeded pairs in every space kind.", "",
      {integer("pairs", 200)}, {"violations", "worst_drop_over_rounding"}, norm_quotients_entry);
  add("extend_reflect", "gridfn", "extension theorem", "\\mathcal{E}(u)_{|\\Omega}=u",
      "Even reflection of seeded smooth samples: exact restriction and the 3^d norm bound.", "",
      {integer("count", 50)}, {"max_norm_ratio", "restriction_mismatches"}, extension_entry);
  add("embedding_check", "theorems", "embedding theorem", "the norm of the embedding remains the same",
      "Vector embedding ratio against the scalar constant measured on seeded probes.", "chain_gridlr2_sheet",
      {num("p", 2.0), num("r", 4.0), integer("probes", 20)}, {"transfer_ratio"}, embedding_entry);
  add("morrey_check", "theorems", "Morrey theorem",
      "\\|u(\\xi)-u(\\eta)\\|_X\\leq C\\|u\\|_{W^{1,p}(\\Omega,X)}|\\xi-\\eta|^{\\alpha}",
      "Holder constant of order 1 - d/p against the scalar Morrey constant times the W norm.", "chain_l1_wave",
      {num("p", 2.0), integer("probes", 20)}, {"beta_over_bound"}, morrey_entry);
  add("poincare_check", "theorems", "Poincare inequality", "\\|D_ju\\|_{L^p(\\Omega,X)}\\geq C\\|u\\|_{L^p(\\Omega,X)}",
      "Derivative-to-value ratio of a zero-trace sample and the discrete first Dirichlet eigenvalue.",
      "w0_in_sine_hilbert", {num("p", 2.0), integer("axis", 0), integer("eigen_n", 512)},
      {"precondition_ok", "ratio_over_constant", "eigenvalue_gap"}, poincare_entry);
  add("w0_membership", "theorems", "W1p0 norm theorem and trace theorem",
      "if and only if $\\|u\\|_X\\in W^{1,p}_0(\\Omega,\\R)$; $u\\in W^{1,p}_0(\\Omega,X)$ if and only if $\\text{Tr}_Xu=0",
      "Trace-based membership of the vector function and of its norm over the 20-sample zero-trace corpus.", "",
      {integer("n", 128)}, {"agreement", "boundary_order"}, std::bind(w0_entry, _1, _2, false));
  add("weak_w0_check", "theorems", "weak characterization of W1p0",
      "<u,x'> in W^{1,p}_0(Omega,R) for every x' in a separating subset of X'",
      "Coordinate functionals as the separating set, against the strong verdict over the zero-trace corpus.", "",
      {integer("n", 128)}, {"agreement"}, std::bind(w0_entry, _1, _2, true));
  add("ideal_property_check", "theorems", "ideal property corollary",
      "such that $\\|v\\|_Y\\leq\\|u\\|_X$ almost everywhere, then $v\\in W^{1,p}_0(\\Omega,Y)$",
      "A dominated function inherits membership; an undominated control is rejected with a witness node.",
      "w0_in_sine_hilbert", {}, {"holds", "control_rejected"}, ideal_entry);
  add("norm_map_continuity_check", "theorems", "norm continuity proposition",
      "The mapping $\\|\\cdot\\|_X:W^{1,p}(\\Omega,X)\\rightarrow W^{1,p}(\\Omega,\\R)$ is continuous",
      "Distances of ||u_k|| to ||u|| along a sequence u_k -> u.", "chain_l1_wave", {integer("terms", 8)}, {"holds"},
      norm_continuity_entry);
  add("aubin_lions_probe", "theorems", "Aubin-Lions theorem",
      "W^{1,p}(\\Omega,X)\\cap L^p(\\Omega,Y)\\hookrightarrow L^p(\\Omega,X)$ is compact",
      "Greedy covering numbers across refinement/truncation levels: a compact family stays within 2x, the "
      "bounded-in-L^p control grows.",
      "", {integer("members", 200), nums("eps", {0.05, 0.1, 0.2}), integer("finest", 128)},
      {"max_growth", "control_growth"}, aubin_lions_entry);
  add("mollifier_family_check", "theorems", "uniform convolution lemma",
      "\\sup_{f\\in\\mathcal{F}}\\|\\rho_n\\ast f-f\\|_{L^p(\\R^d,X)}\\rightarrow0",
      "Family sup of mollification errors: monotone, bounded by C/n, decaying at order 1.", "",
      {integer("count", 20), integer("n", 1024), nums("levels", {4, 8, 16, 32, 64})},
      {"monotone", "bounded", "decay_order"}, mollifier_entry);
  add("tensor_extend", "theorems", "Hilbert extension lemma",
      "\\tilde{T}(f\\otimes x)=Tf\\otimes x; \\|\\tilde{T}\\|_{\\mathcal{L}}=\\|T\\|_{\\mathcal{L}}",
      "Operator norm of T (x) I against ||T|| for seeded matrices, and the defining identity.", "",
      {integer("count", 50), integer("max_size", 32), integer("h_dim", 3), num("p", 2.0)},
      {"max_gap", "identity_mismatches"}, tensor_entry);
  add("indicator_path_witness", "counterexamples", "indicator path example",
      "u(t):=1_{(0,t)}; is nowhere differentiable",
      "Strong quotient against h^{1/r - 1}; coordinate functionals stay Lipschitz.", "",
      {num("r", 2.0), nums("h_list", dyadic), integer("coords", 4096)},
      {"confirms_failure", "positive_side", "slope_error", "weak_max_constant"}, indicator_entry);
  add("c0_sine_witness", "counterexamples", "sine sequence example in c0",
      "u(t):=\\left(\\frac{\\sin(nt)}{n}\\right); not in $c_0$ for any $t$",
      "Tail sup of the candidate derivative (cos(nt)) stays near 1.", "",
      {ints("n_list", {64, 256, 1024, 4096, 10000}), nums("t_samples", {0.5, 1.0, 2.0, std::numbers::e})},
      {"confirms_failure", "positive_side", "min_tail_sup", "pairing_derivative_sup"}, c0_entry);
  add("ck_pospart_witness", "counterexamples", "positive part example in C(K)",
      "u(t)(r)=r-t; Thus $u^+$ cannot be distributionally differentiable",
      "Sup distance of the u+ quotient from its candidate derivative; L^2 contrast.", "",
      {nums("h_list", {0.1, 0.01, 0.001}), integer("grid_k", 100000)},
      {"confirms_failure", "positive_side", "finest_distance", "l2_contrast"}, ck_entry);
  return ops;
}

}  // namespace

double Args::number(const std::string& name) const { return as_number(spec.params.at(name)); }

std::size_t Args::integer(const std::string& name) const { return spec.params.at(name).get<std::size_t>(); }

std::string Args::string(const std::string& name) const { return spec.params.at(name).get<std::string>(); }

std::vector<double> Args::numbers(const std::string& name) const {
  std::vector<double> out;
  for (const auto& v : spec.params.at(name)) out.push_back(as_number(v));
  return out;
}

std::vector<std::size_t> Args::integers(const std::string& name) const {
  return spec.params.at(name).get<std::vector<std::size_t>>();
}

corpus::SampleSpec Args::sample() const { return corpus::find_sample(spec.sample); }

const std::vector<Op>& ops() {
  static const std::vector<Op> all = build_ops();
  return all;
}

}  // namespace sobolev::suite::detail
