// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--suite-binary PATH --suite-config PATH --work-dir DIR]
//
// Without the suite options the determinism criterion is reported as FAIL.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sobolev/corpus.hpp"
#include "sobolev/counterexamples.hpp"

using namespace sobolev;
using banach::kInf;
using banach::Vec;
using grid::GridFunction;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<std::size_t> kLadder{32, 64, 128, 256};

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
public:
  template <typename... Args>
  void add(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  void fail(const std::string& what) {
    pass_ = false;
    if (failures_ < 6) add("%s", what.c_str());
    ++failures_;
  }
  Outcome done() {
    if (failures_ > 6) add("... %zu failures in total", failures_);
    return {pass_, text_};
  }

private:
  std::string text_;
  bool pass_ = true;
  std::size_t failures_ = 0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::pair<double, double>> ladder_points(const std::vector<double>& errors) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < kLadder.size(); ++i) pts.emplace_back(1.0 / static_cast<double>(kLadder[i]), errors[i]);
  return pts;
}

// ---------------------------------------------------------------------------
// Independent oracle for ||D_j u||_{L^2(Omega, X)}: Gauss-Legendre panels on
// the exact rule, derivatives by a fourth-order difference of the rule.

std::vector<std::pair<double, double>> gauss_legendre(std::size_t k) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i <= k; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) - 0.25) / (static_cast<double>(k) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t n = 2; n <= k; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / static_cast<double>(n);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(k) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
  }
  return out;
}

double derivative_norm_oracle(const corpus::SampleSpec& s, std::size_t axis) {
  const std::size_t panels = s.dim == 1 ? 128 : 32;
  const auto gl = gauss_legendre(8);
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t q = 0; q < panels; ++q) {
    const double a = static_cast<double>(q) / panels, w = 1.0 / panels;
    for (const auto& [x, wt] : gl) nodes.emplace_back(a + 0.5 * w * (x + 1.0), 0.5 * w * wt);
  }
  const double d = 1e-3;
  auto partial = [&](std::vector<double> xi) {
    auto at = [&](double shift) {
      auto p = xi;
      p[axis] += shift;
      return s.rule(p);
    };
    const Vec a = at(-2 * d), b = at(-d), c = at(d), e = at(2 * d);
    Vec g(a.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = (a[k] - 8.0 * b[k] + 8.0 * c[k] - e[k]) / (12.0 * d);
    return g;
  };
  double sum = 0.0;
  if (s.dim == 1) {
    for (const auto& [x, w] : nodes) sum += w * std::pow(banach::norm(s.space, partial({x})), 2);
  } else {
    for (const auto& [x, wx] : nodes) {
      for (const auto& [y, wy] : nodes) sum += wx * wy * std::pow(banach::norm(s.space, partial({x, y})), 2);
    }
  }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------

Outcome norm_chain_rule() {
  Detail d;
  double worst = kInf;
  std::string worst_name;
  std::vector<double> total(kLadder.size(), 0.0);
  for (const auto& s : corpus::chain_corpus()) {
    std::vector<double> errs;
    for (std::size_t n : kLadder) errs.push_back(calculus::norm_derivative_field(corpus::materialize(s, n)).consistency_l1);
    for (std::size_t i = 0; i < errs.size(); ++i) total[i] += errs[i];
    const auto conv = fit::convergence(ladder_points(errs), 0.9);
    if (conv.fitted_order < worst) {
      worst = conv.fitted_order;
      worst_name = s.name;
    }
    if (!conv.pass) d.fail(s.name + " order " + fmt("%.3f", conv.fitted_order));
  }
  d.add("%zu samples, min order %.3f (%s)", corpus::chain_corpus().size(), worst, worst_name.c_str());
  d.add("corpus-total order %.3f", fit::convergence(ladder_points(total), 0.9).fitted_order);
  return d.done();
}

Outcome norm_estimate() {
  Detail d;
  double worst = -kInf;
  std::size_t flagged = 0, nodes = 0;
  for (const auto& s : corpus::chain_corpus()) {
    for (std::size_t n : kLadder) {
      const auto f = calculus::norm_derivative_field(corpus::materialize(s, n));
      worst = std::max(worst, f.estimate_excess);
      flagged += f.flagged_count;
      nodes += f.flagged.size();
      if (f.estimate_excess > 1e-12) d.fail(s.name + " n=" + std::to_string(n) + " excess " + fmt("%.2e", f.estimate_excess));
    }
  }
  d.add("max relative excess %.2e over %zu nodes (%zu flagged)", worst, nodes, flagged);

  const auto u = corpus::circle(256);
  const auto f = calculus::norm_derivative_field(u);
  const auto du = grid::finite_difference(u);
  double lhs = 0.0, rhs_gap = 0.0;
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    if (!u.grid().interior(node) || f.flagged[node]) continue;
    lhs = std::max(lhs, std::abs(f.field[0].at(node)[0]));
    rhs_gap = std::max(rhs_gap, std::abs(banach::norm(u.space(), du[0].at(node)) - 1.0));
  }
  d.add("circle: max |D||u||| = %.2e, max | ||Du|| - 1 | = %.2e", lhs, rhs_gap);
  if (lhs > 1e-10) d.fail("circle LHS too large");
  if (rhs_gap > 1e-3) d.fail("circle RHS not near 1");
  return d.done();
}

Outcome lattice_rules() {
  Detail d;
  double worst = kInf;
  std::size_t checked = 0;
  const auto samples = corpus::lattice_corpus();
  for (const auto& s : samples) {
    std::vector<double> abs_errs, pos_errs;
    for (std::size_t n : kLadder) {
      const auto u = corpus::materialize(s, n);
      const auto a = calculus::abs_derivative_field(u);
      const auto p = calculus::pos_derivative_field(u);
      abs_errs.push_back(a.consistency_l1);
      pos_errs.push_back(p.consistency_l1);
      const auto du = grid::finite_difference(u);
      for (std::size_t j = 0; j < u.dim(); ++j) {
        for (std::size_t node = 0; node < u.node_count(); ++node) {
          if (a.flagged[node]) continue;
          for (std::size_t k = 0; k < u.value_dim(); ++k) {
            ++checked;
            const double lhs = p.field[j].at(node)[k];
            const double rhs = 0.5 * (a.field[j].at(node)[k] + du[j].at(node)[k]);
            if (lhs != rhs) d.fail(s.name + ": pos != (abs + D)/2 at node " + std::to_string(node));
          }
        }
      }
    }
    for (const auto* errs : {&abs_errs, &pos_errs}) {
      const auto conv = fit::convergence(ladder_points(*errs), 0.9);
      worst = std::min(worst, conv.fitted_order);
      if (!conv.pass) d.fail(s.name + (errs == &abs_errs ? " abs" : " pos") + " order " + fmt("%.3f", conv.fitted_order));
    }
  }
  d.add("%zu samples, min order %.3f, identity checked on %zu values", samples.size(), worst, checked);
  return d.done();
}

Outcome difference_quotient() {
  Detail d;
  double worst = kInf;
  std::string worst_name;
  for (const auto& s : corpus::chain_corpus()) {
    double target = 0.0;
    for (std::size_t j = 0; j < s.dim; ++j) target = std::max(target, derivative_norm_oracle(s, j));
    std::vector<double> errs;
    for (std::size_t n : kLadder) {
      errs.push_back(std::abs(calculus::dq_criterion(corpus::materialize(s, n), 2.0, {1, 2}).c_est - target));
    }
    const auto conv = fit::convergence(ladder_points(errs), 1.0);
    if (conv.fitted_order < worst) {
      worst = conv.fitted_order;
      worst_name = s.name;
    }
    if (!conv.pass) d.fail(s.name + " order " + fmt("%.4f", conv.fitted_order));
  }
  d.add("C^1 samples: min order %.4f (%s)", worst, worst_name.c_str());

  const auto path = corpus::indicator_path(1024, 1024, 2.0);
  const auto r = calculus::dq_criterion(path, 2.0, {1, 2, 4, 8, 16});
  d.add("indicator path r=2: slope %.4f, verdict %s", r.fit.slope, calculus::to_string(r.verdict));
  if (std::abs(r.fit.slope + 0.5) > 0.05) d.fail("indicator slope out of range");
  if (r.verdict != calculus::Growth::Divergent) d.fail("indicator verdict not DIVERGENT");
  return d.done();
}

Outcome poincare() {
  Detail d;
  const double lambda = theorems::dirichlet_first_eigenvalue(512, 1.0);
  const double rel = std::abs(lambda / (kPi * kPi) - 1.0);
  d.add("lambda_1 = %.6f, relative gap to pi^2 %.2e", lambda, rel);
  if (rel > 0.01) d.fail("eigenvalue off by more than 1%");
  double worst = kInf;
  std::size_t checked = 0;
  for (const auto& s : corpus::w0_corpus()) {
    if (!s.w0_member) continue;
    const auto u = corpus::materialize(s, 256);
    for (std::size_t j = 0; j < s.dim; ++j) {
      const auto r = theorems::poincare_check(u, 2.0, j, 0.01);
      ++checked;
      worst = std::min(worst, r.ratio / kPi);
      if (!r.holds) d.fail(s.name + " axis " + std::to_string(j) + " ratio " + fmt("%.4f", r.ratio));
    }
  }
  d.add("%zu member directions, min ||D_j u|| / (pi ||u||) = %.4f", checked, worst);
  return d.done();
}

Outcome w0_equivalences() {
  Detail d;
  std::size_t agree = 0;
  double worst = kInf;
  const auto& samples = corpus::w0_corpus();
  for (const auto& s : samples) {
    const auto u = corpus::materialize(s, 128);
    const bool strong = theorems::w0_membership(u, 2.0).member;
    const bool weak = theorems::weak_w0_check(u, theorems::coordinate_functionals(u.space()), 2.0).member;
    const bool scalar = theorems::w0_membership(grid::pointwise_norm(u), 2.0).member;
    if (strong == s.w0_member && weak == s.w0_member && scalar == s.w0_member) {
      ++agree;
    } else {
      d.fail(s.name + " verdicts " + std::to_string(strong) + std::to_string(weak) + std::to_string(scalar));
    }
    if (!s.w0_member) continue;
    std::vector<double> norms;
    for (std::size_t n : kLadder) norms.push_back(theorems::w0_membership(corpus::materialize(s, n), 2.0).boundary_norm);
    const auto conv = fit::convergence(ladder_points(norms), 1.9);
    worst = std::min(worst, conv.fitted_order);
    if (!conv.pass) d.fail(s.name + " boundary order " + fmt("%.3f", conv.fitted_order));
  }
  d.add("%zu/%zu agree, min member boundary-norm order %.3f", agree, samples.size(), worst);
  return d.done();
}

Outcome morrey() {
  Detail d;
  std::size_t checked = 0;
  double worst = 0.0;
  for (const auto& s : corpus::all_samples()) {
    if (s.dim != 1) continue;
    const auto u = corpus::materialize(s, 256);
    const double beta = calculus::holder_beta(u, 0.5).beta;
    const double w = grid::sobolev_norm(u, 2.0);
    ++checked;
    worst = std::max(worst, beta / w);
    if (beta > w) d.fail(s.name + " beta " + fmt("%.4f", beta) + " > " + fmt("%.4f", w));
  }
  d.add("%zu one-dimensional samples, max beta / ||u||_W = %.4f", checked, worst);

  const auto root = corpus::sqrt_path(1024);
  const auto h = calculus::holder_beta(root, 0.5);
  const double x0 = banach::norm(root.space(), corpus::sqrt_direction());
  const double near = std::min(root.center(h.first_node)[0], root.center(h.second_node)[0]);
  d.add("sqrt sample: beta / ||x0|| = %.4f attained from t = %.2e", h.beta / x0, near);
  if (std::abs(h.beta / x0 - 1.0) > 0.05) d.fail("sqrt sample beta not within 5% of ||x0||");
  if (near > 0.01) d.fail("sqrt sample supremum not attained near 0");
  return d.done();
}

Outcome aubin_lions() {
  Detail d;
  const auto ladder = corpus::aubin_lions_ladder(128);
  const std::vector<double> eps{0.05, 0.1, 0.2};
  const auto prof = theorems::aubin_lions_probe(corpus::compact_family(ladder, 200, 42), eps, 2.0,
                                                corpus::compact_family_bounds());
  for (std::size_t e = 0; e < eps.size(); ++e) {
    d.add("eps %.2f: N %zu -> %zu", eps[e], prof.counts.front()[e], prof.counts.back()[e]);
    if (prof.counts.back()[e] > 2 * prof.counts.front()[e]) d.fail("compact family grows beyond 2x");
  }
  const auto ctrl = theorems::aubin_lions_probe(corpus::control_family(ladder), {0.1}, 2.0,
                                                corpus::control_family_bounds());
  const double growth = static_cast<double>(ctrl.counts.back()[0]) / static_cast<double>(ctrl.counts.front()[0]);
  d.add("control N(0.1) %zu -> %zu (x%.2f)", ctrl.counts.front()[0], ctrl.counts.back()[0], growth);
  if (growth < 4.0) d.fail("control family grows less than 4x");
  return d.done();
}

Outcome tensor_extension() {
  Detail d;
  double worst = 0.0, worst_oracle = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 2 + (seed * 7) % 31;
    const auto T = corpus::random_matrix(n, 1000 + seed);
    const auto r = theorems::tensor_extend(T, 3, 2.0, seed);
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) M(i, j) = T(i, j);
    }
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
    const double gap = std::abs(r.extended_norm - r.scalar_norm) / std::max(1.0, r.scalar_norm);
    const double oracle_gap = std::abs(r.scalar_norm - sigma) / std::max(1.0, sigma);
    worst = std::max(worst, gap);
    worst_oracle = std::max(worst_oracle, oracle_gap);
    if (gap > 1e-8 || oracle_gap > 1e-8 || !r.holds) d.fail("matrix " + std::to_string(seed) + " gap " + fmt("%.2e", gap));
  }
  d.add("50 matrices: max |ext - scalar| %.2e, max |scalar - SVD| %.2e", worst, worst_oracle);

  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 4 + 3 * seed, m = 3;
    const auto T = corpus::random_matrix(n, 5000 + seed);
    const auto fs = corpus::random_matrix(n, 6000 + seed);
    Vec f(fs.a.begin(), fs.a.begin() + static_cast<long>(n));
    const Vec x{1.0, -0.5, 4.0};
    Vec vals;
    for (double fi : f) {
      for (double xk : x) vals.push_back(fi * xk);
    }
    const auto space = banach::SpaceDescriptor::hilbert(m);
    const auto u = grid::GridFunction(grid::BoxDomain::unit(1), grid::GridSpec::uniform(1, n), space, vals);
    const auto tu = theorems::tensor_apply(T, u);
    const Vec tf = theorems::apply(T, f);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < m; ++k) mismatches += tu.at(i)[k] != tf[i] * x[k];
    }
  }
  d.add("T~(f x) = (Tf) x mismatches: %zu", mismatches);
  if (mismatches != 0) d.fail("tensor identity not bit-exact");
  return d.done();
}

Outcome witnesses() {
  using namespace counterexamples;
  Detail d;
  std::vector<double> hs;
  for (int j = 3; j <= 10; ++j) hs.push_back(std::ldexp(1.0, -j));
  for (double r : {2.0, 4.0, kInf}) {
    const auto w = indicator_path_witness(r, hs);
    const double expected = r == kInf ? -1.0 : 1.0 / r - 1.0;
    d.add("indicator r=%g slope %.4f (%s)", r, w.metric("fitted_slope"), to_string(w.verdict));
    if (std::abs(w.metric("fitted_slope") - expected) > 0.05) d.fail("indicator slope out of range");
    if (w.verdict != Verdict::ConfirmsFailure) d.fail("indicator verdict");
  }
  const auto c0 = c0_sine_witness({64, 256, 1024, 4096, 10000}, {0.5, 1.0, 2.0, std::numbers::e});
  d.add("c0 min tail sup %.4f (%s)", c0.metric("min_tail_sup"), to_string(c0.verdict));
  if (c0.metric("min_tail_sup") < 0.99) d.fail("c0 tail below 0.99");
  if (c0.verdict != Verdict::ConfirmsFailure) d.fail("c0 verdict");
  const auto ck = ck_pospart_witness({1e-1, 1e-2, 1e-3}, 100000);
  d.add("C(K) distance %.4f at h=1e-3, L2 contrast %.4f (%s)", ck.rows.back().measured, ck.metric("l2_contrast"),
        to_string(ck.verdict));
  if (ck.rows.back().measured < 0.98) d.fail("C(K) distance below 0.98");
  if (ck.metric("l2_contrast") > 0.05) d.fail("L2 contrast above 0.05");
  if (ck.verdict != Verdict::ConfirmsFailure) d.fail("C(K) verdict");
  return d.done();
}

struct SuiteRun {
  std::string binary, config, work_dir;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const SuiteRun& run) {
  Detail d;
  if (run.binary.empty() || run.config.empty() || run.work_dir.empty()) {
    d.fail("suite binary, config or work directory not given");
    return d.done();
  }
  namespace fs = std::filesystem;
  std::vector<std::string> csvs;
  for (const char* tag : {"a", "b"}) {
    const fs::path out = fs::path(run.work_dir) / tag;
    fs::remove_all(out);
    const std::string cmd = "\"" + run.binary + "\" run \"" + run.config + "\" --seed 42 --out \"" + out.string() + "\"";
    const int status = std::system(cmd.c_str());
    d.add("run %s exit %d", tag, status);
    const auto csv = out / "summary.csv";
    if (!fs::exists(csv)) {
      d.fail(std::string("run ") + tag + " wrote no summary.csv");
      return d.done();
    }
    csvs.push_back(slurp(csv));
  }
  std::size_t lines = std::count(csvs[0].begin(), csvs[0].end(), '\n');
  d.add("%zu summary lines", lines);
  if (csvs[0] != csvs[1]) d.fail("summary CSVs differ");
  if (lines < 2) d.fail("summary CSV is empty");
  return d.done();
}

}  // namespace

int main(int argc, char** argv) {
  SuiteRun suite;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--suite-binary") suite.binary = argv[i + 1];
    else if (key == "--suite-config") suite.config = argv[i + 1];
    else if (key == "--work-dir") suite.work_dir = argv[i + 1];
  }

  struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "norm chain rule", 120.0, norm_chain_rule},
      {2, "norm estimate", 0.0, norm_estimate},
      {3, "lattice rules", 0.0, lattice_rules},
      {4, "difference-quotient criterion", 0.0, difference_quotient},
      {5, "Poincare", 10.0, poincare},
      {6, "W0 equivalences", 0.0, w0_equivalences},
      {7, "Morrey", 0.0, morrey},
      {8, "Aubin-Lions probe", 180.0, aubin_lions},
      {9, "tensor extension", 0.0, tensor_extension},
      {10, "counterexample witnesses", 0.0, witnesses},
      {11, "determinism", 600.0, [&] { return determinism(suite); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      out.pass = false;
      out.detail += "; runtime " + fmt("%.1f", secs) + " s over budget " + fmt("%.0f", c.budget_s) + " s";
    }
    std::printf("criterion %2d %-30s %s  %7.2f s  %s\n", c.id, c.title, out.pass ? "PASS" : "FAIL", secs,
                out.detail.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
