#include "sobolev/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sobolev/errors.hpp"

namespace sobolev::counterexamples {

namespace {

using banach::kInf;
using banach::SpaceDescriptor;
using banach::Vec;
using grid::BoxDomain;
using grid::GridSpec;

WitnessRow row(double param, double measured, double oracle, double aux = 0.0) {
  return {param, measured, oracle, measured / oracle, aux};
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

const char* to_string(Verdict v) { return v == Verdict::ConfirmsFailure ? "CONFIRMS_FAILURE" : "UNEXPECTED"; }

double WitnessTable::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw ContractError("witness " + name + " has no metric " + key);
}

bool rows_track_oracle(const std::vector<WitnessRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const WitnessRow& r) { return r.ratio >= 0.9 && r.ratio <= 1.1; });
}

WitnessTable indicator_path_witness(double r, const std::vector<double>& h_list, std::size_t coords, double t,
                                    std::size_t time_cells) {
  if (!(r >= 1.0)) throw ContractError("indicator path needs r in [1, inf]");
  if (h_list.size() < 2) throw ContractError("indicator path needs at least two step sizes");
  if (coords < 2 || time_cells < 16) throw ContractError("indicator path grids are too coarse");
  const double res = 1.0 / static_cast<double>(coords);
  for (double h : h_list) {
    if (h < res) {
      throw ContractError("step " + std::to_string(h) + " is below the grid resolution " + std::to_string(res));
    }
    if (!(t > 0.0) || t + h > 1.0) throw ContractError("t + h must stay inside (0, 1]");
  }
  const auto space = SpaceDescriptor::grid_lr(coords, r);
  auto indicator = [&](double upto) {
    Vec x(coords);
    for (std::size_t k = 0; k < coords; ++k) x[k] = (static_cast<double>(k) + 0.5) * res < upto ? 1.0 : 0.0;
    return x;
  };

  WitnessTable w;
  w.name = "indicator_path";
  w.parameter = "h";
  const Vec base = indicator(t);
  std::vector<double> hs, qs;
  for (double h : h_list) {
    Vec diff = indicator(t + h);
    for (std::size_t k = 0; k < coords; ++k) diff[k] -= base[k];
    const double q = banach::norm(space, diff) / h;
    const double oracle = r == kInf ? 1.0 / h : std::pow(h, 1.0 / r - 1.0);
    w.rows.push_back(row(h, q, oracle));
    hs.push_back(h);
    qs.push_back(q);
  }
  const auto line = fit::loglog(hs, qs);
  const double expected = r == kInf ? -1.0 : 1.0 / r - 1.0;
  w.metrics = {{"r", r}, {"fitted_slope", line.slope}, {"expected_slope", expected}, {"fit_r2", line.r2}};

  // Weak side: t -> <u(t), g> for bounded densities g on (0,1).
  const auto path = grid::sample(BoxDomain::interval(0.0, 1.0), GridSpec::uniform(1, time_cells), space,
                                 [&](std::span<const double> xi) { return indicator(xi[0]); });
  std::vector<std::pair<std::string, std::function<double(double)>>> densities{
      {"1_(0,0.25)", [](double s) { return s < 0.25 ? 1.0 : 0.0; }},
      {"1_(0,0.5)", [](double s) { return s < 0.5 ? 1.0 : 0.0; }},
      {"1_(0,0.75)", [](double s) { return s < 0.75 ? 1.0 : 0.0; }},
      {"1", [](double) { return 1.0; }},
      {"cos(pi s)", [](double s) { return std::cos(std::numbers::pi * s); }}};
  double worst = 0.0;
  bool bounded = true;
  for (const auto& [label, g] : densities) {
    Vec f(coords);
    for (std::size_t k = 0; k < coords; ++k) f[k] = g((static_cast<double>(k) + 0.5) * res);
    const auto scalar = grid::apply_functional(path, f);
    const auto crit = calculus::dq_criterion(scalar, 2.0, {1, 2, 4, 8});
    bounded = bounded && crit.verdict == calculus::Growth::Bounded;
    worst = std::max(worst, crit.c_est / sup_abs(f));
  }
  w.metrics.emplace_back("weak_paths", static_cast<double>(densities.size()));
  w.metrics.emplace_back("weak_max_constant", worst);
  w.positive_side_holds = bounded && worst <= 1.01;

  const bool tracks = rows_track_oracle(w.rows) && std::abs(line.slope - expected) <= 0.05;
  if (r == 1.0) {
    w.note = "r = 1: the quotient stays bounded, so there is no failure to confirm";
    w.verdict = Verdict::Unexpected;
  } else {
    w.verdict = tracks ? Verdict::ConfirmsFailure : Verdict::Unexpected;
  }
  return w;
}

WitnessTable c0_sine_witness(const std::vector<std::size_t>& n_list, const std::vector<double>& t_samples) {
  if (n_list.empty() || t_samples.empty()) throw ContractError("c0 witness needs truncation levels and t samples");
  if (!std::is_sorted(n_list.begin(), n_list.end()) || n_list.front() < 2) {
    throw ContractError("truncation levels must be ascending and >= 2");
  }
  WitnessTable w;
  w.name = "c0_sine";
  w.parameter = "N";
  double min_tail = kInf;
  for (double t : t_samples) {
    for (std::size_t n : n_list) {
      double tail = 0.0;
      for (std::size_t k = n / 2 + 1; k <= n; ++k) tail = std::max(tail, std::abs(std::cos(static_cast<double>(k) * t)));
      w.rows.push_back(row(static_cast<double>(n), tail, 1.0, t));
      min_tail = std::min(min_tail, tail);
    }
  }
  w.metrics = {{"min_tail_sup", min_tail}};

  // Weak side on [0, 2 pi] with central differences.
  const std::size_t cells = 1 << 14;
  const double h = 2.0 * std::numbers::pi / cells;
  auto fd_sup = [&](const std::function<double(double)>& f, const std::function<double(double)>& df, double& err) {
    double sup = 0.0;
    err = 0.0;
    for (std::size_t i = 1; i < cells; ++i) {
      const double x = static_cast<double>(i) * h;
      const double d = (f(x + h) - f(x - h)) / (2.0 * h);
      sup = std::max(sup, std::abs(d));
      err = std::max(err, std::abs(d - df(x)));
    }
    return sup;
  };
  double coord_sup = 0.0, coord_err = 0.0, err = 0.0;
  for (double k : {1.0, 10.0, 100.0, 1000.0}) {
    coord_sup = std::max(coord_sup, fd_sup([k](double x) { return std::sin(k * x) / k; },
                                           [k](double x) { return std::cos(k * x); }, err));
    coord_err = std::max(coord_err, err / (k * k));
  }
  const int terms = 60;
  auto pairing = [](double x) {
    double s = 0.0;
    for (int k = 1; k <= terms; ++k) s += std::ldexp(1.0, -k) * std::sin(k * x) / k;
    return s;
  };
  auto pairing_derivative = [](double x) {
    double s = 0.0;
    for (int k = 1; k <= terms; ++k) s += std::ldexp(1.0, -k) * std::cos(k * x);
    return s;
  };
  double pair_err = 0.0;
  const double pair_sup = fd_sup(pairing, pairing_derivative, pair_err);
  w.metrics.emplace_back("coordinate_derivative_sup", coord_sup);
  w.metrics.emplace_back("pairing_derivative_sup", pair_sup);
  w.metrics.emplace_back("pairing_fd_error", pair_err);
  w.positive_side_holds = coord_sup <= 1.0 + 1e-12 && pair_sup <= 1.0 + 1e-12 && pair_err <= 1e-4 && coord_err <= 1e-3;
  w.verdict = rows_track_oracle(w.rows) ? Verdict::ConfirmsFailure : Verdict::Unexpected;
  return w;
}

WitnessTable ck_pospart_witness(const std::vector<double>& h_list, std::size_t grid_k, double t) {
  if (h_list.empty()) throw ContractError("C(K) witness needs step sizes");
  if (grid_k < 3) throw ContractError("grid_K must be >= 3");
  const double res = 1.0 / static_cast<double>(grid_k - 1);
  for (double h : h_list) {
    if (h < 2.0 * res) {
      throw ContractError("grid_K = " + std::to_string(grid_k) + " is too coarse for step " + std::to_string(h));
    }
    if (t - 1.5 * h < 0.0 || t + 1.5 * h > 1.0) throw ContractError("t -/+ 1.5 h must stay inside [0, 1]");
  }
  WitnessTable w;
  w.name = "ck_pospart";
  w.parameter = "h";
  bool above_floor = true;
  double affine_err = 0.0;
  for (double h : h_list) {
    double dist = 0.0;
    for (std::size_t i = 0; i < grid_k; ++i) {
      const double r = static_cast<double>(i) * res;
      const double q = (std::max(r - (t + h), 0.0) - std::max(r - t, 0.0)) / h;
      dist = std::max(dist, std::abs(q + (r > t ? 1.0 : 0.0)));
      affine_err = std::max(affine_err, std::abs(((r - (t + h)) - (r - t)) / h + 1.0));
    }
    w.rows.push_back(row(h, dist, 1.0));
    above_floor = above_floor && dist >= 1.0 - 10.0 * h - 1.0 / static_cast<double>(grid_k);
  }
  w.metrics = {{"affine_quotient_error", affine_err}};

  // Contrast in L^2(0,1): positive-part field against central differences of u^+.
  const auto l2 = SpaceDescriptor::grid_lr(grid_k, 2.0);
  double contrast_worst_ratio = 0.0;
  double contrast_last = 0.0, oracle_last = 0.0;
  for (double h : h_list) {
    const auto u = grid::sample(BoxDomain::interval(t - 1.5 * h, t + 1.5 * h), GridSpec::uniform(1, 3), l2,
                                [&](std::span<const double> xi) {
                                  Vec v(grid_k);
                                  for (std::size_t k = 0; k < grid_k; ++k) {
                                    v[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(grid_k) - xi[0];
                                  }
                                  return v;
                                });
    const auto field = calculus::pos_derivative_field(u).field[0];
    const auto upos = grid::map_pointwise(u, l2, [&](banach::VecView x) { return banach::lattice_pos(l2, x); });
    const auto fd = grid::finite_difference(upos)[0];
    Vec gap(grid_k);
    for (std::size_t k = 0; k < grid_k; ++k) gap[k] = field.at(1)[k] - fd.at(1)[k];
    contrast_last = banach::norm(l2, gap);
    oracle_last = std::sqrt(h / 6.0);
    contrast_worst_ratio = std::max(contrast_worst_ratio, std::abs(contrast_last / oracle_last - 1.0));
  }
  w.metrics.emplace_back("l2_contrast", contrast_last);
  w.metrics.emplace_back("l2_contrast_oracle", oracle_last);
  w.metrics.emplace_back("l2_contrast_max_relative_gap", contrast_worst_ratio);
  w.positive_side_holds = contrast_worst_ratio <= 0.1 && affine_err <= 1e-6;
  w.verdict = rows_track_oracle(w.rows) && above_floor ? Verdict::ConfirmsFailure : Verdict::Unexpected;
  return w;
}

}  // namespace sobolev::counterexamples
