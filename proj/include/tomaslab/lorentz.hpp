#pragma once

#include <limits>
#include <span>
#include <vector>

#include "tomaslab/sampled_field.hpp"

namespace tomaslab {

/// f* as a step function: `value` on an interval of length `width`.
struct RearrangementStep {
  double value = 0.0;
  double width = 0.0;
};

using RearrangementSteps = std::vector<RearrangementStep>;

/// Lorentz exponent (p, s); s may be infinite.
struct LorentzExponent {
  double p = 2.0;
  double s = 2.0;

  static constexpr double infinity = std::numeric_limits<double>::infinity();
};

void validate_exponent(const LorentzExponent& e);

/// |values| sorted descending with equal values merged; zero cells dropped.
RearrangementSteps decreasing_rearrangement(std::span<const Complex> values, double cell_volume);
RearrangementSteps decreasing_rearrangement(const SampledField& f);

/// Weighted version: cell i has its own volume.
RearrangementSteps decreasing_rearrangement(std::span<const double> magnitudes,
                                            std::span<const double> volumes);

/// (int_0^inf (t^{1/p} f*(t))^s dt/t)^{1/s}, exact on the step function;
/// for s = inf, the max over steps of T_i^{1/p} v_i with T_i the cumulative width.
double lorentz_norm(const RearrangementSteps& steps, const LorentzExponent& e);
double lorentz_norm(const SampledField& f, const LorentzExponent& e);

/// Plain L^p norm (sum |f|^p dx)^{1/p}.
double lp_norm(const SampledField& f, double p);

}  // namespace tomaslab
