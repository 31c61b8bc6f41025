#pragma once

// Least-squares line fits and refinement-ladder convergence summaries.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sobolev::fit {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;        // 1 when y has no spread
  double residual = 0.0;  // RMS of residuals
  std::size_t points = 0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);
/// Fit of log y against log x; all values must be positive.
LineFit loglog(std::span<const double> x, std::span<const double> y);

/// Errors measured along a refinement ladder, fitted as error ~ C h^order.
struct ConvergenceReport {
  std::vector<std::pair<double, double>> points;  // (h, error), decreasing h
  double fitted_order = 0.0;
  double residual = 0.0;
  double r2 = 1.0;
  double threshold = 0.0;
  double floor = 0.0;
  bool pass = false;
};

/// Errors below `floor` are clamped to it before fitting; the ladder passes
/// when the fitted order reaches `threshold` or every error is at the floor.
ConvergenceReport convergence(std::vector<std::pair<double, double>> points, double threshold, double floor = 1e-14);

}  // namespace sobolev::fit
