#include "tomaslab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tomaslab {

void validate_exponent(const LorentzExponent& e) {
  if (!(e.p > 0.0) || !std::isfinite(e.p)) throw std::invalid_argument("Lorentz exponent: p must be positive and finite");
  if (!(e.s > 0.0)) throw std::invalid_argument("Lorentz exponent: s must be positive or infinite");
}

RearrangementSteps decreasing_rearrangement(std::span<const double> magnitudes,
                                            std::span<const double> volumes) {
  if (magnitudes.size() != volumes.size()) {
    throw std::invalid_argument("decreasing_rearrangement: magnitudes and volumes differ in length");
  }
  std::vector<std::size_t> order;
  order.reserve(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    if (magnitudes[i] > 0.0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return magnitudes[a] > magnitudes[b]; });
  RearrangementSteps steps;
  for (std::size_t i : order) {
    if (!steps.empty() && steps.back().value == magnitudes[i]) {
      steps.back().width += volumes[i];
    } else {
      steps.push_back({magnitudes[i], volumes[i]});
    }
  }
  return steps;
}

RearrangementSteps decreasing_rearrangement(std::span<const Complex> values, double cell_volume) {
  std::vector<double> mags(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  RearrangementSteps steps;
  for (double m : mags) {
    if (!(m > 0.0)) break;
    if (!steps.empty() && steps.back().value == m) {
      steps.back().width += cell_volume;
    } else {
      steps.push_back({m, cell_volume});
    }
  }
  return steps;
}

RearrangementSteps decreasing_rearrangement(const SampledField& f) {
  return decreasing_rearrangement(f.values, f.cell_volume());
}

// Each step contributes v^s (p/s) (T_i^{s/p} - T_{i-1}^{s/p}). Values are
// scaled by the largest one, which makes scaling by powers of two exact, and
// the power difference is formed with expm1 to avoid cancellation.
double lorentz_norm(const RearrangementSteps& steps, const LorentzExponent& e) {
  validate_exponent(e);
  if (steps.empty()) return 0.0;
  const double vmax = steps.front().value;
  if (std::isinf(e.s)) {
    double best = 0.0;
    double t = 0.0;
    for (const auto& st : steps) {
      t += st.width;
      best = std::max(best, std::pow(t, 1.0 / e.p) * (st.value / vmax));
    }
    return vmax * best;
  }
  const double r = e.s / e.p;
  double total = 0.0;
  double t_prev = 0.0;
  for (const auto& st : steps) {
    const double t = t_prev + st.width;
    double increment = 0.0;
    if (t_prev == 0.0) {
      increment = std::pow(t, r);
    } else {
      increment = std::pow(t_prev, r) * std::expm1(r * std::log1p(st.width / t_prev));
    }
    total += std::pow(st.value / vmax, e.s) * increment;
    t_prev = t;
  }
  return vmax * std::pow((e.p / e.s) * total, 1.0 / e.s);
}

double lorentz_norm(const SampledField& f, const LorentzExponent& e) {
  return lorentz_norm(decreasing_rearrangement(f), e);
}

double lp_norm(const SampledField& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  double vmax = 0.0;
  for (const auto& v : f.values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0.0;
  if (std::isinf(p)) return vmax;
  double total = 0.0;
  for (const auto& v : f.values) total += std::pow(std::abs(v) / vmax, p);
  return vmax * std::pow(total * f.cell_volume(), 1.0 / p);
}

}  // namespace tomaslab
