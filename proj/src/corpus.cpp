#include "sobolev/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sobolev/errors.hpp"

namespace sobolev::corpus {

namespace {

constexpr double kPi = std::numbers::pi;
using Rule = std::function<Vec(std::span<const double>)>;
using grid::BoxDomain;
using grid::GridSpec;

SampleSpec spec(std::string name, std::size_t dim, SpaceDescriptor space, Rule rule, bool smooth = true,
                bool member = false) {
  return {std::move(name), dim, std::move(space), std::move(rule), smooth, member};
}

/// Rule producing m coordinates from a per-coordinate scalar formula.
Rule coords(std::size_t m, std::function<double(std::span<const double>, double)> f) {
  return [m, f](std::span<const double> xi) {
    Vec v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = f(xi, static_cast<double>(k));
    return v;
  };
}

Rule scaled(std::function<double(std::span<const double>)> g, Vec x) {
  return [g, x](std::span<const double> xi) {
    Vec v(x);
    const double s = g(xi);
    for (auto& c : v) c *= s;
    return v;
  };
}

std::vector<SampleSpec> build_chain() {
  const std::vector<std::pair<std::string, SpaceDescriptor>> spaces{
      {"hilbert", SpaceDescriptor::hilbert(3)},       {"l1", SpaceDescriptor::finite_lr(3, 1.0)},
      {"sup", SpaceDescriptor::sampled_sup(3)},       {"gridlr1.5", SpaceDescriptor::grid_lr(4, 1.5)},
      {"gridlr2", SpaceDescriptor::grid_lr(4, 2.0)}, {"gridlr3", SpaceDescriptor::grid_lr(4, 3.0)}};
  std::vector<SampleSpec> out;
  for (const auto& [label, space] : spaces) {
    const std::size_t m = space.dim();
    out.push_back(spec("chain_" + label + "_wave", 1, space, coords(m, [](auto xi, double k) {
                         return std::sin(2.0 * xi[0] + k) + 0.3 * k;
                       })));
    out.push_back(spec("chain_" + label + "_ramp", 1, space, coords(m, [](auto xi, double k) {
                         return (xi[0] - 0.3 - 0.1 * k) * (1.0 + k);
                       })));
    out.push_back(spec("chain_" + label + "_damped", 1, space, coords(m, [](auto xi, double k) {
                         return std::exp(-k * xi[0]) * std::cos(3.0 * xi[0] + 0.5 * k) + 0.1;
                       })));
    out.push_back(spec("chain_" + label + "_sheet", 2, space, coords(m, [](auto xi, double k) {
                         return std::sin(kPi * xi[0] + k + 0.2) * std::cos(xi[1]) + 0.2 * k * xi[0] * xi[1];
                       })));
    out.push_back(spec("chain_" + label + "_bowl", 2, space, coords(m, [](auto xi, double k) {
                         const double a = xi[0] - 0.5, b = xi[1] - 0.2 * k;
                         return a * a + b * b - 0.1 * (k + 1.0);
                       })));
  }
  return out;
}

std::vector<SampleSpec> build_w0() {
  const auto h3 = SpaceDescriptor::hilbert(3);
  const auto h2 = SpaceDescriptor::hilbert(2);
  const auto l1_2 = SpaceDescriptor::finite_lr(2, 1.0);
  const auto l1_3 = SpaceDescriptor::finite_lr(3, 1.0);
  const auto sup3 = SpaceDescriptor::sampled_sup(3);
  const auto sup2 = SpaceDescriptor::sampled_sup(2);
  const auto g2 = SpaceDescriptor::grid_lr(4, 2.0);
  const auto g15 = SpaceDescriptor::grid_lr(4, 1.5);
  const auto g3 = SpaceDescriptor::grid_lr(4, 3.0);
  const auto g2_3 = SpaceDescriptor::grid_lr(3, 2.0);
  auto bump1 = [](std::span<const double> xi) { return std::sin(kPi * xi[0]); };
  auto bump2 = [](std::span<const double> xi) { return std::sin(kPi * xi[0]) * std::sin(kPi * xi[1]); };

  std::vector<SampleSpec> out;
  auto member = [&](std::string name, std::size_t d, SpaceDescriptor s, Rule r) {
    out.push_back(spec("w0_in_" + name, d, std::move(s), std::move(r), true, true));
  };
  auto outside = [&](std::string name, std::size_t d, SpaceDescriptor s, Rule r) {
    out.push_back(spec("w0_out_" + name, d, std::move(s), std::move(r), true, false));
  };

  member("sine_hilbert", 1, h3, scaled(bump1, {1.0, -2.0, 0.5}));
  member("parabola_l1", 1, l1_2, scaled([](auto xi) { return xi[0] * (1.0 - xi[0]); }, {1.0, -2.0}));
  member("sine_sup", 1, sup3, [](std::span<const double> xi) {
    const double s = std::sin(kPi * xi[0]);
    return Vec{s * std::cos(xi[0]), s * std::sin(2.0 * xi[0]), s};
  });
  member("sine_gridlr2", 1, g2, coords(4, [](auto xi, double k) { return std::sin(kPi * xi[0]) * (1.0 + k * xi[0]); }));
  member("harmonics_gridlr1.5", 1, g15,
         coords(4, [](auto xi, double k) { return std::sin(kPi * xi[0]) * std::sin((k + 1.0) * kPi * xi[0]); }));
  member("parabola_gridlr3", 1, g3,
         coords(4, [](auto xi, double k) { return xi[0] * (1.0 - xi[0]) * (k + 1.0) * std::exp(xi[0]); }));
  member("sheet_hilbert", 2, h2, scaled(bump2, {1.0, 0.5}));
  member("quartic_l1", 2, l1_3,
         scaled([](auto xi) { return xi[0] * (1.0 - xi[0]) * xi[1] * (1.0 - xi[1]); }, {1.0, 2.0, -1.0}));
  member("sheet_sup", 2, sup2, [](std::span<const double> xi) {
    const double s = std::sin(kPi * xi[0]) * std::sin(kPi * xi[1]);
    return Vec{s * std::cos(xi[0]), s * (std::sin(xi[1]) + 1.0)};
  });
  member("sheet_gridlr2", 2, g2_3, coords(3, [](auto xi, double k) {
           return std::sin(kPi * xi[0]) * std::sin(kPi * xi[1]) * (1.0 + k * xi[0] * xi[1]);
         }));

  outside("constant_hilbert", 1, h3, [](std::span<const double>) { return Vec{1.0, -2.0, 0.5}; });
  outside("ramp_l1", 1, l1_2, scaled([](auto xi) { return 1.0 + xi[0]; }, {1.0, 2.0}));
  outside("cosine_sup", 1, sup3, scaled([](auto xi) { return std::cos(kPi * xi[0]); }, {1.0, 0.5, -0.25}));
  outside("one_coordinate_gridlr2", 1, g2, coords(4, [](auto xi, double k) {
            return std::sin(kPi * xi[0]) * (1.0 + k * xi[0]) + (k == 2.0 ? 1.0 : 0.0);
          }));
  outside("linear_gridlr1.5", 1, g15, coords(4, [](auto xi, double) { return xi[0]; }));
  outside("quarter_sine_gridlr3", 1, g3,
          coords(4, [](auto xi, double k) { return std::sin(0.5 * kPi * xi[0]) * (k + 1.0); }));
  outside("linear_hilbert", 2, h2, scaled([](auto xi) { return xi[0]; }, {1.0, 1.0}));
  outside("one_coordinate_l1", 2, l1_3, [](std::span<const double> xi) {
    const double s = std::sin(kPi * xi[0]) * std::sin(kPi * xi[1]);
    return Vec{s, 2.0 * s, -s + xi[1]};
  });
  outside("saddle_sup", 2, sup2, scaled([](auto xi) { return 1.0 + xi[0] * xi[1]; }, {1.0, -1.0}));
  outside("strip_gridlr2", 2, g2_3, coords(3, [](auto xi, double) { return std::sin(kPi * xi[0]); }));
  return out;
}

}  // namespace

GridFunction materialize(const SampleSpec& s, std::size_t n) {
  return grid::sample(BoxDomain::unit(s.dim), GridSpec::uniform(s.dim, n), s.space, s.rule);
}

const std::vector<SampleSpec>& chain_corpus() {
  static const std::vector<SampleSpec> corpus = build_chain();
  return corpus;
}

const std::vector<SampleSpec>& w0_corpus() {
  static const std::vector<SampleSpec> corpus = build_w0();
  return corpus;
}

std::vector<SampleSpec> lattice_corpus() {
  std::vector<SampleSpec> out;
  for (const auto& s : chain_corpus()) {
    if (s.space.lattice_capable() && s.space.order_continuous()) out.push_back(s);
  }
  return out;
}

Vec sqrt_direction() { return {1.0, -2.0, 0.5}; }

std::vector<SampleSpec> all_samples() {
  std::vector<SampleSpec> out = chain_corpus();
  out.insert(out.end(), w0_corpus().begin(), w0_corpus().end());
  out.push_back(spec("circle", 1, SpaceDescriptor::hilbert(2), [](std::span<const double> xi) {
    const double t = 2.0 * kPi * xi[0];
    return Vec{std::cos(t), std::sin(t)};
  }));
  out.push_back(spec("sqrt", 1, SpaceDescriptor::finite_lr(3, 2.0),
                     scaled([](auto xi) { return std::sqrt(xi[0]); }, sqrt_direction()), false));
  out.push_back(spec("sup_diagonal_tie", 2, SpaceDescriptor::sampled_sup(2), [](std::span<const double> xi) {
    return Vec{1.0 + xi[0], 1.0 + xi[1]};
  }));
  out.push_back(spec("indicator_path", 1, SpaceDescriptor::grid_lr(256, 2.0),
                     coords(256, [](auto xi, double k) { return (k + 0.5) / 256.0 < xi[0] ? 1.0 : 0.0; }), false));
  return out;
}

SampleSpec find_sample(const std::string& name) {
  for (auto& s : all_samples()) {
    if (s.name == name) return s;
  }
  throw ContractError("unknown sample '" + name + "'");
}

GridFunction circle(std::size_t n) {
  return grid::sample(BoxDomain::interval(0.0, 2.0 * kPi), GridSpec::uniform(1, n), SpaceDescriptor::hilbert(2),
                      [](std::span<const double> xi) { return Vec{std::cos(xi[0]), std::sin(xi[0])}; });
}

GridFunction sqrt_path(std::size_t n) { return materialize(find_sample("sqrt"), n); }

GridFunction indicator_path(std::size_t n, std::size_t coords_count, double r) {
  const double m = static_cast<double>(coords_count);
  return grid::sample(BoxDomain::unit(1), GridSpec::uniform(1, n), SpaceDescriptor::grid_lr(coords_count, r),
                      coords(coords_count, [m](auto xi, double k) { return (k + 0.5) / m < xi[0] ? 1.0 : 0.0; }));
}

std::vector<GridFunction> scalar_probes(std::size_t d, std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> a(-2.0, 2.0);
  std::vector<GridFunction> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double c0 = a(rng), c1 = a(rng), c2 = a(rng), c3 = a(rng);
    out.push_back(grid::sample_scalar(BoxDomain::unit(d), GridSpec::uniform(d, n), [=](std::span<const double> xi) {
      double s = c0;
      for (std::size_t j = 0; j < xi.size(); ++j) s += c1 * std::sin(1.5 * c2 * xi[j] + j) + c3 * xi[j] * xi[j];
      return s;
    }));
  }
  return out;
}

std::vector<GridFunction> smooth_samples(std::size_t n, std::size_t count, std::uint64_t seed) {
  const std::vector<SpaceDescriptor> spaces{SpaceDescriptor::hilbert(3), SpaceDescriptor::finite_lr(3, 1.0),
                                            SpaceDescriptor::sampled_sup(3), SpaceDescriptor::grid_lr(3, 1.5)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> a(-2.0, 2.0);
  std::vector<GridFunction> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vec c(8);
    for (auto& v : c) v = a(rng);
    out.push_back(grid::sample(BoxDomain::unit(1), GridSpec::uniform(1, n), spaces[i % spaces.size()],
                               [&](std::span<const double> xi) {
                                 const double t = xi[0];
                                 return Vec{c[0] + c[1] * t, std::cos(c[2] * t) * c[3],
                                            c[4] * std::sin(c[5] * t + c[6]) + c[7] * t * t};
                               }));
  }
  return out;
}

std::vector<std::size_t> aubin_lions_ladder(std::size_t finest) {
  std::vector<std::size_t> out;
  for (std::size_t n = 8; n <= finest; n *= 2) out.push_back(n);
  return out;
}

std::vector<theorems::ProbeLevel> compact_family(const std::vector<std::size_t>& ladder, std::size_t members,
                                                 std::uint64_t seed) {
  if (ladder.empty()) throw ContractError("empty refinement ladder");
  const std::size_t top = ladder.back();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> slope(0.0, 1.0);
  std::vector<Vec> xs;
  std::vector<double> cs;
  for (std::size_t i = 0; i < members; ++i) {
    Vec z(top);
    double norm = 0.0;
    for (std::size_t s = 0; s < top; ++s) {
      z[s] = g(rng) / static_cast<double>(s + 1);
      norm += z[s] * z[s];
    }
    norm = std::sqrt(norm);
    // x_s = z_s / 2^{s-1}: then sum_s 4^{s-1} x_s^2 = |z|^2 = 1.
    for (std::size_t s = 0; s < top; ++s) z[s] = std::ldexp(z[s] / norm, -static_cast<int>(s));
    xs.push_back(std::move(z));
    cs.push_back(i % 2 == 0 ? -1.0 : slope(rng));
  }
  std::vector<theorems::ProbeLevel> levels;
  for (std::size_t n : ladder) {
    const std::size_t m = n;
    Vec y_weights(m);
    for (std::size_t s = 0; s < m; ++s) y_weights[s] = std::ldexp(1.0, 2 * static_cast<int>(s));
    const auto x_space = SpaceDescriptor::grid_lr(m, 2.0, Vec(m, 1.0));
    theorems::ProbeLevel level{{}, SpaceDescriptor::grid_lr(m, 2.0, y_weights)};
    for (std::size_t i = 0; i < members; ++i) {
      const Vec& x = xs[i];
      const double c = cs[i];
      level.family.push_back(grid::sample(BoxDomain::unit(1), GridSpec::uniform(1, n), x_space,
                                          [&](std::span<const double> xi) {
                                            const double f = c < 0.0 ? 1.0 : 0.5 * (1.0 - c * xi[0]);
                                            Vec v(m);
                                            for (std::size_t s = 0; s < m; ++s) v[s] = f * x[s];
                                            return v;
                                          }));
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

theorems::FamilyBounds compact_family_bounds() { return {2.0, 1.0, banach::kInf}; }

std::vector<theorems::ProbeLevel> control_family(const std::vector<std::size_t>& ladder) {
  std::vector<theorems::ProbeLevel> levels;
  for (std::size_t n : ladder) {
    const std::size_t m = n;
    const auto x_space = SpaceDescriptor::grid_lr(m, 2.0, Vec(m, 1.0));
    theorems::ProbeLevel level{{}, std::nullopt};
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n);
      level.family.push_back(grid::sample(BoxDomain::unit(1), GridSpec::uniform(1, n), x_space,
                                          [&](std::span<const double> xi) {
                                            Vec v(m, 0.0);
                                            v[0] = xi[0] < t ? 1.0 : 0.0;
                                            return v;
                                          }));
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

theorems::FamilyBounds control_family_bounds() { return {banach::kInf, banach::kInf, 1.0}; }

theorems::Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  theorems::Matrix m{n, n, Vec(n * n)};
  for (auto& v : m.a) v = g(rng);
  return m;
}

}  // namespace sobolev::corpus
