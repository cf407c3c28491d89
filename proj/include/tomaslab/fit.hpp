#pragma once

#include <span>
#include <utility>
#include <vector>

namespace tomaslab {

/// Least-squares line through (log x, log y).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  /// Largest |log y - (intercept + slope log x)| over the points.
  double max_residual = 0.0;
  int points = 0;
};

/// Throws std::invalid_argument on fewer than 3 points or nonpositive data.
FitResult loglog_fit(std::span<const double> x, std::span<const double> y);
FitResult loglog_fit(std::span<const std::pair<double, double>> points);

}  // namespace tomaslab
