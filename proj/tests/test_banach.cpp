#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "sobolev/banach.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/io.hpp"

using namespace sobolev;
using namespace sobolev::banach;

namespace {

std::vector<SpaceDescriptor> all_kinds(std::size_t dim) {
  return {SpaceDescriptor::hilbert(dim),          SpaceDescriptor::finite_lr(dim, 1.0),
          SpaceDescriptor::finite_lr(dim, 3.0),   SpaceDescriptor::sampled_sup(dim),
          SpaceDescriptor::grid_lr(dim, 1.5),     SpaceDescriptor::grid_lr(dim, 2.0),
          SpaceDescriptor::grid_lr(dim, 3.0),     SpaceDescriptor::finite_lr(dim, kInf)};
}

Vec random_vec(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(dim);
  for (auto& x : v) x = g(rng);
  return v;
}

Vec axpy(const Vec& x, double t, const Vec& h) {
  Vec out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += t * h[i];
  return out;
}

// Independent oracle: Richardson-extrapolated one-sided difference quotients
// of the norm. Returns nullopt when the extrapolants disagree (x sits too
// close to a kink of the norm for the quotient ladder to resolve it).
std::optional<std::pair<double, double>> fd_one_sided(const SpaceDescriptor& s, const Vec& x, const Vec& h) {
  const double base = norm(s, x);
  auto q = [&](double t) { return (norm(s, axpy(x, t, h)) - base) / t; };
  auto richardson = [&](double t) { return 2.0 * q(t / 2.0) - q(t); };
  std::pair<double, double> out;
  for (int side : {+1, -1}) {
    const double a = richardson(side * 1e-4);
    const double b = richardson(side * 1e-5);
    if (std::abs(a - b) > 1e-7 * (1.0 + std::abs(b))) return std::nullopt;
    (side > 0 ? out.first : out.second) = b;
  }
  return out;
}

}  // namespace

TEST_CASE("norm examples") {
  CHECK(norm(SpaceDescriptor::hilbert(2), Vec{3, 4}) == 5.0);
  CHECK(norm(SpaceDescriptor::finite_lr(2, 1.0), Vec{1, -2}) == 3.0);
  CHECK(norm(SpaceDescriptor::sampled_sup(3), Vec{2, -5, 1}) == 5.0);
  CHECK(norm(SpaceDescriptor::finite_lr(3, kInf), Vec{2, -5, 1}) == 5.0);
  CHECK(norm(SpaceDescriptor::grid_lr(4, 2.0), Vec{1, 1, 1, 1}) == doctest::Approx(1.0));
  CHECK(norm(SpaceDescriptor::grid_lr(2, 1.0, {0.25, 0.75}), Vec{4, -4}) == 4.0);
}

TEST_CASE("dimension mismatch and malformed descriptors are contract errors") {
  CHECK_THROWS_AS(norm(SpaceDescriptor::hilbert(2), Vec{1, 2, 3}), ContractError);
  CHECK_THROWS_AS(norm(SpaceDescriptor::hilbert(1), Vec{NAN}), ContractError);
  CHECK_THROWS_AS(SpaceDescriptor::finite_lr(0, 2.0), ContractError);
  CHECK_THROWS_AS(SpaceDescriptor::finite_lr(2, 0.5), ContractError);
  CHECK_THROWS_AS(SpaceDescriptor::grid_lr(2, 2.0, {1.0}), ContractError);
  CHECK_THROWS_AS(SpaceDescriptor::grid_lr(2, 2.0, {1.0, -1.0}), ContractError);
}

TEST_CASE("capability flags") {
  CHECK_FALSE(SpaceDescriptor::hilbert(3).lattice_capable());
  CHECK(SpaceDescriptor::finite_lr(3, 2.0).lattice_capable());
  CHECK(SpaceDescriptor::sampled_sup(3).lattice_capable());
  CHECK_FALSE(SpaceDescriptor::sampled_sup(3).order_continuous());
  CHECK_FALSE(SpaceDescriptor::grid_lr(3, kInf).order_continuous());
  CHECK(SpaceDescriptor::grid_lr(3, 1.0).order_continuous());
  CHECK(SpaceDescriptor::hilbert(3).order_continuous());
}

TEST_CASE("Hilbert and FiniteLr r=2 norms are bit-identical") {
  std::mt19937_64 rng(7);
  const auto h = SpaceDescriptor::hilbert(9);
  const auto f = SpaceDescriptor::finite_lr(9, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec x = random_vec(rng, 9);
    REQUIRE(norm(h, x) == norm(f, x));
  }
}

TEST_CASE("norm axioms on seeded random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(-5.0, 5.0);
  for (const auto& s : all_kinds(6)) {
    CAPTURE(to_string(s.kind()));
    CAPTURE(s.exponent());
    for (int i = 0; i < 1000; ++i) {
      const Vec x = random_vec(rng, 6);
      const Vec y = random_vec(rng, 6);
      const double nx = norm(s, x);
      const double ny = norm(s, y);
      REQUIRE(norm(s, axpy(x, 1.0, y)) <= nx + ny + 1e-12 * (nx + ny));
      const double l = lam(rng);
      Vec lx(x);
      for (auto& v : lx) v *= l;
      REQUIRE(norm(s, lx) == doctest::Approx(std::abs(l) * nx).epsilon(1e-14));
      REQUIRE(nx > 0.0);
    }
    REQUIRE(norm(s, Vec(6, 0.0)) == 0.0);
  }
}

TEST_CASE("one-sided norm derivative examples") {
  const auto r = one_sided_norm_derivative(SpaceDescriptor::hilbert(2), Vec{1, 0}, Vec{0, 1});
  CHECK(r.plus == 0.0);
  CHECK(r.minus == 0.0);
  CHECK(r.unique);

  // l^1 at a smooth point: oracle first, then the closed form.
  const auto l1 = SpaceDescriptor::finite_lr(2, 1.0);
  const auto fd = fd_one_sided(l1, Vec{1, -2}, Vec{3, 4});
  REQUIRE(fd);
  CHECK(fd->first == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fd->second == doctest::Approx(-1.0).epsilon(1e-9));
  const auto d1 = one_sided_norm_derivative(l1, Vec{1, -2}, Vec{3, 4});
  CHECK(d1.plus == -1.0);
  CHECK(d1.minus == -1.0);
  CHECK(d1.unique);

  // Sup norm with a two-point argmax carrying opposite signs.
  const auto sup = SpaceDescriptor::sampled_sup(2);
  const auto fds = fd_one_sided(sup, Vec{2, -2}, Vec{1, 1});
  REQUIRE(fds);
  CHECK(fds->first == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fds->second == doctest::Approx(-1.0).epsilon(1e-9));
  const auto ds = one_sided_norm_derivative(sup, Vec{2, -2}, Vec{1, 1});
  CHECK(ds.plus == 1.0);
  CHECK(ds.minus == -1.0);
  CHECK_FALSE(ds.unique);
}

TEST_CASE("norm derivative at zero is (||h||, -||h||)") {
  for (const auto& s : all_kinds(3)) {
    const Vec h{1.0, -2.0, 0.5};
    const auto d = one_sided_norm_derivative(s, Vec(3, 0.0), h);
    CHECK(d.plus == norm(s, h));
    CHECK(d.minus == -norm(s, h));
    CHECK_FALSE(d.unique);
  }
}

TEST_CASE("one-sided norm derivative matches the finite-difference oracle") {
  std::mt19937_64 rng(23);
  for (const auto& s : all_kinds(5)) {
    CAPTURE(to_string(s.kind()));
    CAPTURE(s.exponent());
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
      const Vec x = random_vec(rng, 5);
      const Vec h = random_vec(rng, 5);
      const auto fd = fd_one_sided(s, x, h);
      if (!fd) continue;
      ++checked;
      const auto d = one_sided_norm_derivative(s, x, h);
      REQUIRE(d.plus >= d.minus);
      REQUIRE(d.plus == doctest::Approx(fd->first).epsilon(1e-6));
      REQUIRE(d.minus == doctest::Approx(fd->second).epsilon(1e-6));
    }
    CHECK(checked >= 450);
  }
}

TEST_CASE("difference quotients of the norm are nondecreasing in t") {
  std::mt19937_64 rng(5);
  const std::vector<double> ts{-1.0, -0.3, -0.1, -1e-2, -1e-3, 1e-3, 1e-2, 0.1, 0.3, 1.0};
  for (const auto& s : all_kinds(4)) {
    for (int i = 0; i < 200; ++i) {
      const Vec x = random_vec(rng, 4);
      const Vec h = random_vec(rng, 4);
      const double base = norm(s, x);
      double prev = -kInf;
      for (double t : ts) {
        const double q = (norm(s, axpy(x, t, h)) - base) / t;
        REQUIRE(q >= prev - 1e-9 * (1.0 + std::abs(prev)));
        prev = q;
      }
    }
  }
}

TEST_CASE("lattice operations") {
  const auto e = SpaceDescriptor::finite_lr(3, 2.0);
  CHECK(lattice_abs(e, Vec{1, -2, 0}) == Vec{1, 2, 0});
  CHECK(lattice_pos(e, Vec{1, -2, 0}) == Vec{1, 0, 0});
  CHECK(lattice_abs(e, Vec{0, 0, 0}) == Vec{0, 0, 0});
  CHECK(sign_apply(e, Vec{3, -1, 0}, Vec{1, 1, 1}) == Vec{1, -1, 0});
  CHECK(band_projection_disjoint(e, Vec{1, 0, -2}, Vec{9, 9, 9}) == Vec{0, 9, 0});
  CHECK(band_projection_disjoint(e, Vec{1, 3, -2}, Vec{9, 9, 9}) == Vec{0, 0, 0});

  CHECK_THROWS_AS(lattice_abs(SpaceDescriptor::hilbert(2), Vec{1, 2}), CapabilityError);
  CHECK_THROWS_AS(sign_apply(SpaceDescriptor::hilbert(2), Vec{1, 2}, Vec{1, 2}), CapabilityError);
  CHECK_THROWS_AS(abs_one_sided(SpaceDescriptor::sampled_sup(2), Vec{1, 2}, Vec{1, 2}), HypothesisError);
}

TEST_CASE("sign decomposition via band projections") {
  // P_{v+} w - P_{v-} w from the ideal decomposition of v = (2,-2):
  // the ideal of v+ is the first coordinate, the ideal of v- the second.
  const auto e = SpaceDescriptor::finite_lr(2, 1.0);
  const Vec v{2, -2};
  const Vec w{5, 7};
  const Vec p_plus{w[0], 0.0};
  const Vec p_minus{0.0, w[1]};
  CHECK(sign_apply(e, v, w) == Vec{p_plus[0] - p_minus[0], p_plus[1] - p_minus[1]});
}

TEST_CASE("abs one-sided derivative matches coordinatewise limits") {
  // d/dt |v_s + t w_s| at t = 0+ is sign(v_s) w_s, or |w_s| where v_s = 0.
  const auto e = SpaceDescriptor::grid_lr(2, 2.0);
  const Vec v{1, 0};
  const Vec w{2, 3};
  const auto d = abs_one_sided(e, v, w);
  for (std::size_t s = 0; s < 2; ++s) {
    const double t = 1e-8;
    const double fd_plus = (std::abs(v[s] + t * w[s]) - std::abs(v[s])) / t;
    CHECK(d.plus[s] == doctest::Approx(fd_plus).epsilon(1e-7));
  }
  CHECK(d.plus == Vec{2, 3});
  CHECK(d.minus == Vec{2, -3});
}

TEST_CASE("lattice identities on random vectors") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coin(0, 3);
  const auto e = SpaceDescriptor::grid_lr(8, 1.5);
  for (int i = 0; i < 500; ++i) {
    Vec v = random_vec(rng, 8);
    for (auto& x : v) {
      if (coin(rng) == 0) x = 0.0;
    }
    const Vec w = random_vec(rng, 8);
    REQUIRE(sign_apply(e, v, v) == lattice_abs(e, v));
    const auto d = abs_one_sided(e, v, w);
    const Vec band = band_projection_disjoint(e, v, lattice_abs(e, w));
    for (std::size_t s = 0; s < 8; ++s) REQUIRE(d.plus[s] - d.minus[s] == 2.0 * band[s]);
    // u+ = (|u| + u) / 2
    const Vec a = lattice_abs(e, v);
    const Vec p = lattice_pos(e, v);
    for (std::size_t s = 0; s < 8; ++s) REQUIRE(p[s] == 0.5 * (a[s] + v[s]));
  }
}

TEST_CASE("space descriptor JSON round trip") {
  for (const auto& s : all_kinds(3)) {
    CHECK(io::space_from_json(io::space_to_json(s)) == s);
  }
  const auto weighted = SpaceDescriptor::grid_lr(2, 3.0, {0.5, 2.0});
  CHECK(io::space_from_json(io::space_to_json(weighted)) == weighted);
  CHECK(io::space_to_json(SpaceDescriptor::sampled_sup(2))["exponent"] == "inf");
  CHECK(io::space_to_json(SpaceDescriptor::hilbert(2))["weights"].is_null());
}
