#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sobolev/calculus.hpp"
#include "sobolev/errors.hpp"

using namespace sobolev;
using namespace sobolev::calculus;
using banach::kInf;
using grid::BoxDomain;
using grid::GridSpec;

namespace {

const Vec kX0{1.0, -2.0, 0.5};
constexpr double kPi = std::numbers::pi;

Vec scaled(double a, const Vec& x) {
  Vec out(x);
  for (auto& v : out) v *= a;
  return out;
}

GridFunction sample_1d(std::size_t n, const SpaceDescriptor& space, std::function<Vec(double)> f, double lo = 0.0,
                       double hi = 1.0) {
  return grid::sample(BoxDomain::interval(lo, hi), GridSpec::uniform(1, n), space,
                      [&](std::span<const double> xi) { return f(xi[0]); });
}

GridFunction indicator_path(std::size_t n, std::size_t m, double r) {
  return sample_1d(n, SpaceDescriptor::grid_lr(m, r), [m](double t) {
    Vec v(m);
    for (std::size_t s = 0; s < m; ++s) v[s] = (s + 0.5) / m < t ? 1.0 : 0.0;
    return v;
  });
}

GridFunction circle(std::size_t n) {
  return sample_1d(n, SpaceDescriptor::hilbert(2), [](double t) { return Vec{std::cos(t), std::sin(t)}; }, 0.0,
                   2 * kPi);
}

std::size_t nearest_node(const GridFunction& u, double t) {
  std::size_t best = 0;
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    if (std::abs(u.center(node)[0] - t) < std::abs(u.center(best)[0] - t)) best = node;
  }
  return best;
}

}  // namespace

TEST_CASE("difference-quotient criterion examples") {
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const std::size_t n = 128;
  const auto affine = sample_1d(n, l2, [](double t) { return scaled(t, kX0); });
  const auto r = dq_criterion(affine, 2.0, {1, 2, 4, 8});
  const double nx0 = banach::norm(l2, kX0);
  // Exact quotient over omega: ||x0|| (1 - s h)^{1/2}.
  CHECK(r.c_est == doctest::Approx(nx0 * std::sqrt(1.0 - 1.0 / n)).epsilon(1e-12));
  CHECK(r.verdict == Growth::Bounded);
  CHECK(r.table.size() == 4);

  const auto c = sample_1d(n, l2, [](double) { return kX0; });
  const auto rc = dq_criterion(c, 2.0, {1, 2, 4, 8});
  CHECK(rc.c_est == 0.0);
  CHECK(rc.verdict == Growth::Bounded);

  const auto path = indicator_path(1024, 1024, 2.0);
  const auto rp = dq_criterion(path, 2.0, {1, 2, 4, 8, 16});
  for (const auto& row : rp.table) {
    CHECK(row.quotient == doctest::Approx(std::pow(row.h, -0.5) * std::sqrt(1.0 - row.h)).epsilon(1e-10));
  }
  CHECK(rp.fit.slope == doctest::Approx(-0.5).epsilon(0.1));
  CHECK(std::abs(rp.fit.slope + 0.5) <= 0.05);
  CHECK(rp.verdict == Growth::Divergent);

  // Fewer than four step sizes never yields a divergence verdict.
  CHECK(dq_criterion(path, 2.0, {1, 2, 4}).verdict == Growth::Bounded);
  CHECK_THROWS_AS(dq_criterion(path, 2.0, {}), ContractError);
}

TEST_CASE("criterion constant approaches the derivative norm at order one") {
  // ||pi cos(pi t) x0||_{L^2(0,1)} = pi ||x0|| / sqrt(2)
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const double exact = kPi * banach::norm(l2, kX0) / std::sqrt(2.0);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n : {32, 64, 128, 256, 512}) {
    const auto u = sample_1d(n, l2, [](double t) { return scaled(std::sin(kPi * t), kX0); });
    pts.emplace_back(1.0 / n, std::abs(dq_criterion(u, 2.0, {1, 2}).c_est - exact));
  }
  const auto conv = fit::convergence(pts, 1.0);
  CHECK(conv.fitted_order >= 1.0);
  CHECK(conv.pass);
}

TEST_CASE("Lipschitz composition") {
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const auto u = sample_1d(64, l2, [](double t) { return Vec{std::sin(3 * t), t * t - 0.3, std::cos(t)}; });

  const auto id = compose_lipschitz(identity_map(l2), u);
  CHECK(id.value.flat() == u.flat());
  CHECK(id.bound_holds);
  CHECK(id.bound_excess <= 0.0);
  CHECK(id.lipschitz.max_quotient == doctest::Approx(1.0));

  const auto nm = compose_lipschitz(norm_map(l2), u);
  CHECK(nm.value.flat() == grid::pointwise_norm(u).flat());
  CHECK(nm.bound_holds);

  // F(x) = |<x, x'>| with <x0, x'> = 1 composed with t x0 gives |t|.
  const Vec functional{1.0, 0.0, 0.0};
  const auto line = sample_1d(64, l2, [](double t) { return scaled(t, kX0); }, -1.0, 1.0);
  const auto F = functional_abs_map(l2, functional);
  CHECK(F.lipschitz == 1.0);
  const auto fl = compose_lipschitz(F, line);
  for (std::size_t node = 0; node < line.node_count(); ++node) {
    CHECK(fl.value.at(node)[0] == std::abs(line.center(node)[0]));
  }
  CHECK(fl.bound_holds);

  // The functional norm uses the conjugate exponent.
  const auto l1 = SpaceDescriptor::finite_lr(3, 1.0);
  CHECK(functional_abs_map(l1, Vec{1.0, -3.0, 2.0}).lipschitz == 3.0);
  CHECK(functional_abs_map(SpaceDescriptor::sampled_sup(3), Vec{1.0, -3.0, 2.0}).lipschitz == 6.0);

  auto bad = norm_map(l2);
  bad.lipschitz = 0.5;
  try {
    validate_lipschitz(bad, u, 1);
    FAIL("expected a Lipschitz violation");
  } catch (const LipschitzViolation& e) {
    CHECK(e.first_node < e.second_node);
    CHECK(std::string(e.what()).find("nodes") != std::string::npos);
  }
}

TEST_CASE("Lipschitz validation samples at most the requested number of pairs") {
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const auto u = sample_1d(512, l2, [](double t) { return scaled(t, kX0); });
  const auto a = validate_lipschitz(norm_map(l2), u, 7);
  const auto b = validate_lipschitz(norm_map(l2), u, 7);
  CHECK(a.pairs <= 10000);
  CHECK(a.pairs > 9000);
  CHECK(a.max_quotient == b.max_quotient);
}

TEST_CASE("Gateaux chain field examples") {
  const auto u = circle(256);
  const auto ch = gateaux_chain_field(norm_map(SpaceDescriptor::hilbert(2)), u, 2.0);
  for (std::size_t node = 1; node + 1 < u.node_count(); ++node) {
    CHECK(std::abs(ch.plus[0].at(node)[0]) < 1e-12);
    CHECK(std::abs(ch.minus[0].at(node)[0]) < 1e-12);
  }
  CHECK(ch.disagreement_measure == 0.0);

  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const auto v = sample_1d(32, l2, [](double t) { return Vec{t, std::exp(t), -t * t}; });
  const auto id = gateaux_chain_field(identity_map(l2), v, 2.0);
  const auto dv = grid::finite_difference(v);
  CHECK(id.plus[0].flat() == dv[0].flat());
  CHECK(id.minus[0].flat() == dv[0].flat());
  CHECK(id.fd_gap_lp == 0.0);

  // ||(t, t^2)||_1 = t + t^2 on (0.1, 1): derivative 1 + 2t, equal to 2 at t = 0.5.
  const auto l1 = SpaceDescriptor::finite_lr(2, 1.0);
  const auto w = sample_1d(90, l1, [](double t) { return Vec{t, t * t}; }, 0.1, 1.0);
  const auto cw = gateaux_chain_field(norm_map(l1), w, 2.0);
  const std::size_t k = nearest_node(w, 0.5);
  const double tk = w.center(k)[0];
  CHECK(cw.plus[0].at(k)[0] == doctest::Approx(1.0 + 2.0 * tk).epsilon(1e-12));
  const double t_next = w.center(k + 1)[0];
  const double a = cw.plus[0].at(k)[0], b = cw.plus[0].at(k + 1)[0];
  CHECK(a + (b - a) * (0.5 - tk) / (t_next - tk) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(gateaux_chain_field(LipschitzMap{"bare", l2, l2, [](VecView x) { return Vec(x.begin(), x.end()); }, 1.0, {}}, v, 2.0),
                  CapabilityError);
}

TEST_CASE("chain field disagreement shrinks under refinement") {
  // |t - 1/2| on odd grids: the kink sits exactly on a node.
  const auto scalar = SpaceDescriptor::finite_lr(1, 2.0);
  double prev_measure = 1.0, prev_lp = kInf;
  for (std::size_t n : {33, 65, 129, 257}) {
    const auto u = sample_1d(n, scalar, [](double t) { return Vec{t - 0.5}; });
    const auto ch = gateaux_chain_field(lattice_abs_map(scalar), u, 2.0);
    CHECK(ch.disagreement_measure > 0.0);
    CHECK(ch.disagreement_measure < prev_measure);
    CHECK(ch.disagreement_lp < prev_lp);
    prev_measure = ch.disagreement_measure;
    prev_lp = ch.disagreement_lp;
  }
}

TEST_CASE("norm derivative field examples") {
  // Central differences of the circle are orthogonal to it; the boundary
  // ring uses one-sided differences and is left out.
  const auto nf = norm_derivative_field(circle(512));
  for (std::size_t node = 1; node + 1 < 512; ++node) CHECK(std::abs(nf.field[0].at(node)[0]) < 1e-12);
  CHECK(nf.flagged_count == 0);

  // Sup norm with a unique maximizing coordinate.
  const auto sup = SpaceDescriptor::sampled_sup(3);
  const auto u = sample_1d(64, sup, [](double t) { return Vec{std::sin(t), -2.0 - t, 0.5 * t}; });
  const auto su = norm_derivative_field(u);
  const auto du = grid::finite_difference(u);
  for (std::size_t node = 0; node < u.node_count(); ++node) CHECK(su.field[0].at(node)[0] == -du[0].at(node)[1]);

  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const auto line = sample_1d(64, l2, [](double t) { return scaled(t, kX0); });
  const auto lf = norm_derivative_field(line);
  for (const auto& v : lf.field[0].flat()) CHECK(v == doctest::Approx(banach::norm(l2, kX0)).epsilon(1e-12));

  // Zero nodes get the value 0 and are flagged.
  const auto through_zero = sample_1d(33, l2, [](double t) { return scaled(t - 0.5, kX0); });
  const auto zf = norm_derivative_field(through_zero);
  CHECK(zf.zero[16]);
  CHECK(zf.flagged[16]);
  CHECK(zf.field[0].at(16)[0] == 0.0);
}

TEST_CASE("norm estimate holds nodewise") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const auto& space : {SpaceDescriptor::hilbert(4), SpaceDescriptor::finite_lr(4, 1.0),
                            SpaceDescriptor::sampled_sup(4), SpaceDescriptor::grid_lr(4, 1.5),
                            SpaceDescriptor::grid_lr(4, 3.0)}) {
    std::vector<double> values(20 * 20 * 4);
    for (auto& v : values) v = g(rng);
    GridFunction u(BoxDomain::unit(2), GridSpec::uniform(2, 20), space, values);
    const auto nf = norm_derivative_field(u);
    CHECK(nf.estimate_excess <= 1e-12);
  }
}

TEST_CASE("norm derivative field converges to the derivative of the norm") {
  const auto space = SpaceDescriptor::grid_lr(3, 3.0);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n : {32, 64, 128, 256}) {
    const auto u = sample_1d(n, space, [](double t) { return Vec{std::sin(2 * t) + 0.2, t - 0.3, std::cos(t)}; });
    pts.emplace_back(1.0 / n, norm_derivative_field(u).consistency_l1);
  }
  CHECK(fit::convergence(pts, 0.9).pass);
}

TEST_CASE("lattice derivative fields") {
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const auto pos = sample_1d(32, l2, [](double t) { return Vec{1.0 + t, t * t + 0.1, std::exp(t)}; });
  const auto du = grid::finite_difference(pos);
  CHECK(abs_derivative_field(pos).field[0].flat() == du[0].flat());
  CHECK(pos_derivative_field(pos).field[0].flat() == du[0].flat());

  const auto scalar = SpaceDescriptor::finite_lr(1, 2.0);
  const auto s = sample_1d(40, scalar, [](double t) { return Vec{std::sin(7 * t)}; });
  const auto ds = grid::finite_difference(s);
  const auto ps = pos_derivative_field(s);
  for (std::size_t node = 0; node < s.node_count(); ++node) {
    CHECK(ps.field[0].at(node)[0] == (s.at(node)[0] > 0.0 ? ds[0].at(node)[0] : 0.0));
  }

  // GridLr over S = (0,1), u(xi)(s) = xi - s: d/dxi |xi - s| = sign(xi - s).
  const std::size_t m = 16;
  const auto space = SpaceDescriptor::grid_lr(m, 2.0);
  const auto u = sample_1d(24, space, [m](double xi) {
    Vec v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = xi - (k + 0.5) / m;
    return v;
  });
  const auto af = abs_derivative_field(u);
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    const double xi = u.center(node)[0];
    for (std::size_t k = 0; k < m; ++k) {
      const double sign = xi > (k + 0.5) / m ? 1.0 : -1.0;
      CHECK(af.field[0].at(node)[k] == doctest::Approx(sign).epsilon(1e-10));
    }
  }

  CHECK_THROWS_AS(abs_derivative_field(sample_1d(8, SpaceDescriptor::sampled_sup(1), [](double t) { return Vec{t}; })),
                  HypothesisError);
  CHECK_THROWS_AS(pos_derivative_field(sample_1d(8, SpaceDescriptor::hilbert(1), [](double t) { return Vec{t}; })),
                  CapabilityError);
}

TEST_CASE("positive part field is half of abs field plus derivative") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  const auto space = SpaceDescriptor::grid_lr(5, 1.5);
  std::vector<double> values(12 * 12 * 5);
  for (auto& v : values) v = g(rng);
  GridFunction u(BoxDomain::unit(2), GridSpec::uniform(2, 12), space, values);
  const auto a = abs_derivative_field(u);
  const auto p = pos_derivative_field(u);
  const auto du = grid::finite_difference(u);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (a.flagged[i / 5]) continue;
      REQUIRE(p.field[j].flat()[i] == 0.5 * (a.field[j].flat()[i] + du[j].flat()[i]));
    }
  }
}

TEST_CASE("lattice fields converge away from the zero set") {
  const std::size_t m = 8;
  const auto space = SpaceDescriptor::grid_lr(m, 2.0);
  std::vector<std::pair<double, double>> abs_pts, pos_pts;
  for (std::size_t n : {32, 64, 128, 256}) {
    const auto u = sample_1d(n, space, [m](double t) {
      Vec v(m);
      for (std::size_t k = 0; k < m; ++k) v[k] = std::sin(3 * t + k) - 0.2 * k / m;
      return v;
    });
    abs_pts.emplace_back(1.0 / n, abs_derivative_field(u).consistency_l1);
    pos_pts.emplace_back(1.0 / n, pos_derivative_field(u).consistency_l1);
  }
  CHECK(fit::convergence(abs_pts, 0.9).pass);
  CHECK(fit::convergence(pos_pts, 0.9).pass);
}

TEST_CASE("Stampacchia check") {
  const auto l2 = SpaceDescriptor::finite_lr(4, 2.0);
  const auto u = sample_1d(16, l2, [](double t) { return Vec{t, std::sin(t), 0.0, 0.0}; });
  const auto r = stampacchia_check(u, Vec{0, 0, 1, 2});
  CHECK(r.precondition_ok);
  CHECK(r.holds);
  CHECK(stampacchia_check(u, Vec{0, 0, 0, 0}).holds);

  const std::size_t m = 10;
  const auto space = SpaceDescriptor::grid_lr(m, 2.0);
  Vec w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = (k + 0.5) / m >= 0.5 ? 1.0 : 0.0;
  const auto v = sample_1d(20, space, [m](double xi) {
    Vec out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = (k + 0.5) / m < 0.5 ? xi : 0.0;
    return out;
  });
  const auto rv = stampacchia_check(v, w);
  CHECK(rv.precondition_ok);
  CHECK(rv.holds);

  const auto overlap = stampacchia_check(u, Vec{1, 0, 0, 0});
  CHECK_FALSE(overlap.precondition_ok);
  CHECK(overlap.precondition_violations.size() == u.node_count());
}

TEST_CASE("quotient rule field") {
  const auto h2 = SpaceDescriptor::hilbert(2);
  // u(t) = (2 + cos t, sin t), ||u|| >= 1 >= phi_hat = sin(pi t).
  auto u_rule = [](double t) { return Vec{2.0 + std::cos(t), std::sin(t)}; };
  auto phi_rule = [](double t) { return std::sin(kPi * t); };
  auto v_exact = [&](double t) {
    const Vec x = u_rule(t);
    const double r = std::hypot(x[0], x[1]);
    return Vec{x[0] / r * phi_rule(t), x[1] / r * phi_rule(t)};
  };
  // Richardson-extrapolated central differences of the exact v as oracle.
  auto dv_oracle = [&](double t) {
    auto cd = [&](double d) {
      const Vec a = v_exact(t + d), b = v_exact(t - d);
      return Vec{(a[0] - b[0]) / (2 * d), (a[1] - b[1]) / (2 * d)};
    };
    const Vec c1 = cd(1e-3), c2 = cd(5e-4);
    return Vec{(4 * c2[0] - c1[0]) / 3, (4 * c2[1] - c1[1]) / 3};
  };
  const std::size_t n = 256;
  const auto u = sample_1d(n, h2, u_rule);
  const auto phi = grid::sample_scalar(BoxDomain::unit(1), GridSpec::uniform(1, n),
                                       [&](std::span<const double> xi) { return phi_rule(xi[0]); });
  const auto q = quotient_rule_field(u, phi);
  double worst = 0.0;
  for (std::size_t node = 1; node + 1 < n; ++node) {
    const Vec d = dv_oracle(u.center(node)[0]);
    for (std::size_t k = 0; k < 2; ++k) worst = std::max(worst, std::abs(q.formula[0].at(node)[k] - d[k]));
  }
  CHECK(worst < 1e-3);
  CHECK(q.consistency_l1 < 1e-3);

  const auto zero = grid::sample_scalar(BoxDomain::unit(1), GridSpec::uniform(1, n), [](std::span<const double>) { return 0.0; });
  const auto qz = quotient_rule_field(u, zero);
  CHECK(grid::bochner_norm(qz.v, kInf) == 0.0);
  CHECK(grid::bochner_norm(qz.formula[0], kInf) == 0.0);

  const Vec c{3.0, 4.0};
  const auto uc = sample_1d(n, h2, [&](double) { return c; });
  const auto qc = quotient_rule_field(uc, phi);
  const auto dphi = grid::finite_difference(phi);
  for (std::size_t node = 0; node < n; ++node) {
    CHECK(qc.v.at(node)[0] == doctest::Approx(0.6 * phi.at(node)[0]).epsilon(1e-14));
    CHECK(qc.formula[0].at(node)[1] == doctest::Approx(0.8 * dphi[0].at(node)[0]).epsilon(1e-12));
  }
}

TEST_CASE("product rule") {
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  const std::size_t n = 64;
  const auto u = sample_1d(n, l2, [](double t) { return scaled(t, kX0); });
  const auto one = grid::sample_scalar(BoxDomain::unit(1), GridSpec::uniform(1, n), [](std::span<const double>) { return 1.0; });
  const auto r1 = product_rule_check(u, one);
  CHECK(r1.error_l1 == 0.0);
  CHECK(r1.holds);

  const auto psi = grid::sample_scalar(BoxDomain::unit(1), GridSpec::uniform(1, n), [](std::span<const double> xi) { return xi[0]; });
  const auto r = product_rule_check(u, psi);
  CHECK(r.holds);
  const auto dprod = grid::finite_difference(grid::multiply(psi, u));
  for (std::size_t node = 1; node + 1 < n; ++node) {
    const double t = u.center(node)[0];
    for (std::size_t k = 0; k < 3; ++k) CHECK(dprod[0].at(node)[k] == doctest::Approx(2 * t * kX0[k]).epsilon(1e-10));
  }

  const auto c = sample_1d(n, l2, [](double) { return kX0; });
  const auto rc = product_rule_check(c, psi);
  CHECK(rc.error_l1 < 1e-12);

  const auto wavy = sample_1d(n, l2, [](double t) { return Vec{std::sin(5 * t), t * t, std::cos(2 * t)}; });
  const auto psi2 = grid::sample_scalar(BoxDomain::unit(1), GridSpec::uniform(1, n),
                                        [](std::span<const double> xi) { return std::exp(xi[0]); });
  CHECK(product_rule_check(wavy, psi2).holds);
}

TEST_CASE("Holder constant") {
  const auto l2 = SpaceDescriptor::finite_lr(3, 2.0);
  CHECK(holder_beta(sample_1d(32, l2, [](double) { return kX0; }), 0.5).beta == 0.0);
  const auto affine = holder_beta(sample_1d(32, l2, [](double t) { return scaled(t, kX0); }), 1.0);
  CHECK(affine.beta == doctest::Approx(banach::norm(l2, kX0)).epsilon(1e-12));
  CHECK(affine.exhaustive);
  CHECK(affine.pairs == 32 * 31 / 2);

  const auto root = holder_beta(sample_1d(1024, l2, [](double t) { return scaled(std::sqrt(t), kX0); }), 0.5);
  CHECK(root.beta <= banach::norm(l2, kX0));
  CHECK(root.beta >= 0.95 * banach::norm(l2, kX0));

  const auto sub = holder_beta(sample_1d(1024, l2, [](double t) { return scaled(std::sqrt(t), kX0); }), 0.5, 1000, 4);
  CHECK_FALSE(sub.exhaustive);
  CHECK(sub.pairs == 1000);
  CHECK(sub.beta <= root.beta);
  CHECK_THROWS_AS(holder_beta(sample_1d(8, l2, [](double) { return kX0; }), 1.5), ContractError);
}

TEST_CASE("difference quotients of convex norms are monotone") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  const std::vector<double> ts{-2.0, -0.5, -0.1, -1e-3, 1e-3, 0.1, 0.5, 2.0};
  for (const auto& space : {SpaceDescriptor::hilbert(5), SpaceDescriptor::finite_lr(5, 1.0),
                            SpaceDescriptor::sampled_sup(5), SpaceDescriptor::grid_lr(5, 3.0)}) {
    for (int i = 0; i < 200; ++i) {
      Vec x(5), v(5);
      for (auto& a : x) a = g(rng);
      for (auto& a : v) a = g(rng);
      const auto q = norm_quotients(space, x, v, ts);
      for (std::size_t k = 1; k < q.size(); ++k) REQUIRE(q[k] >= q[k - 1] - 1e-9 * (1 + std::abs(q[k - 1])));
    }
  }
}
