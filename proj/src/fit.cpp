#include "tomaslab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tomaslab {

FitResult loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_fit: x and y differ in length");
  if (x.size() < 3) throw std::invalid_argument("loglog_fit: need at least 3 points");
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("loglog_fit: values must be positive and finite");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_fit: x values are all equal");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(x.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(ly[i] - fit.intercept - fit.slope * lx[i]));
  }
  return fit;
}

FitResult loglog_fit(std::span<const std::pair<double, double>> points) {
  std::vector<double> x, y;
  x.reserve(points.size());
  y.reserve(points.size());
  for (const auto& [px, py] : points) {
    x.push_back(px);
    y.push_back(py);
  }
  return loglog_fit(x, y);
}

}  // namespace tomaslab
