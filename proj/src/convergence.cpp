#include "sobolev/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sobolev/errors.hpp"

namespace sobolev::fit {

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("fit needs equally long x and y");
  LineFit f;
  f.points = x.size();
  if (x.size() < 2) throw ContractError("fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ContractError("fit needs at least two distinct abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  f.r2 = syy > 0.0 ? 1.0 - ss / syy : 1.0;
  return f;
}

LineFit loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(i < y.size() && y[i] > 0.0)) throw ContractError("log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return least_squares(lx, ly);
}

ConvergenceReport convergence(std::vector<std::pair<double, double>> points, double threshold, double floor) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  ConvergenceReport r;
  r.points = points;
  r.threshold = threshold;
  r.floor = floor;
  bool all_floor = true;
  std::vector<double> hs, es;
  for (const auto& [h, e] : points) {
    hs.push_back(h);
    es.push_back(std::max(e, floor));
    all_floor = all_floor && e <= floor;
  }
  if (points.size() >= 2) {
    const LineFit f = loglog(hs, es);
    r.fitted_order = f.slope;
    r.residual = f.residual;
    r.r2 = f.r2;
  } else {
    r.fitted_order = std::numeric_limits<double>::quiet_NaN();
  }
  r.pass = all_floor || (points.size() >= 2 && r.fitted_order >= threshold);
  return r;
}

}  // namespace sobolev::fit
