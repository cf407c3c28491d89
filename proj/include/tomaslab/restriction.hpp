#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tomaslab/exponents.hpp"
#include "tomaslab/lorentz.hpp"
#include "tomaslab/measure_lab.hpp"
#include "tomaslab/sampled_field.hpp"

namespace tomaslab {

using FieldOperator = std::function<SampledField(const SampledField&)>;

struct OperatorNormEstimate {
  double value = 0.0;
  std::string method;  ///< "power-iteration" or "test-family-max"
  int iterations = 0;  ///< or family size
  double residual = 0.0;
  bool converged = true;
  bool lower_bound = false;
  std::vector<double> rayleigh;        ///< power iteration: ||T v_k||^2 per step
  std::vector<std::string> notices;
};

/// x -> sum_k g_k w_k exp(2 pi i <x_k, x>) on the cells of `grid`.
SampledField extend(std::span<const Complex> g, const DiscreteMeasure& mu, const GridSpec& grid);

/// f^ at each atom by direct Riemann-sum quadrature over the cells of `f`.
std::vector<Complex> restrict_to_atoms(const SampledField& f, const DiscreteMeasure& mu);

/// sum_k w_k |f^(x_k)|^2.
double restrict_sq_integral(const SampledField& f, const DiscreteMeasure& mu);

/// <f, f * mu^(-.)> on the grid, which equals restrict_sq_integral by the T*T identity.
Complex tomas_pairing(const SampledField& f, const DiscreteMeasure& mu);

/// (f * mu^)(x) = sum_k w_k f^(-x_k) exp(-2 pi i <x_k, x>) on the cells of `f`.
/// `f` must vanish outside the inner half of its box.
SampledField convolve_mu_hat(const SampledField& f, const DiscreteMeasure& mu);

/// Reflection x -> -x of the atoms.
DiscreteMeasure reflect(const DiscreteMeasure& mu);

/// f -> F^{-1}[m F f] on the grid; `symbol` lives on frequency_field(grid).
FieldOperator fourier_multiplier(const GridSpec& grid, SampledField symbol);

struct PowerIterationOptions {
  double tol = 1e-8;
  int max_iter = 2000;
  std::uint64_t seed = 0;
};

/// sqrt of the top eigenvalue of T*T by power iteration from a seeded random
/// start. Without `adjoint`, T is taken to be self-adjoint.
OperatorNormEstimate l2_operator_norm(const FieldOperator& apply, const SampledField& domain,
                                      const PowerIterationOptions& options = {},
                                      const FieldOperator& adjoint = nullptr);
OperatorNormEstimate l2_operator_norm(const FieldOperator& apply, const GridSpec& grid,
                                      const PowerIterationOptions& options = {},
                                      const FieldOperator& adjoint = nullptr);

/// max over the family of ||T f||_out / ||f||_in; a lower bound for the norm.
OperatorNormEstimate lorentz_operator_lower_bound(const FieldOperator& apply,
                                                  const LorentzExponent& in_exp,
                                                  const LorentzExponent& out_exp,
                                                  std::span<const SampledField> family);

/// sqrt(restrict_sq_integral(f, mu)) / ||f||_{L^{p_circ,2}}.
double stein_tomas_ratio(const SampledField& f, const DiscreteMeasure& mu, const ExponentProfile& profile);

/// exp(-4 pi t^2 |x|^2) on `grid`.
SampledField gaussian_dilate(const GridSpec& grid, double t);

/// Anisotropic Gaussian of frequency extent delta x delta^2 centred at the
/// frequency origin, on a grid sized to it. Pair with the circle translated
/// by (0, -1), which puts the north pole at the origin; since modulation does
/// not change |f|, this equals the modulated cap against the circle itself.
SampledField knapp_cap(double delta);

/// Random cell values under a smooth window supported in the inner half of the box.
SampledField random_windowed_field(const GridSpec& grid, std::uint64_t seed);

/// Sum of three modulated Gaussian packets centred within L/8 of the origin,
/// widths up to L/16, so that the field is smooth and negligible outside the inner half.
SampledField random_packet_field(const GridSpec& grid, std::uint64_t seed);

}  // namespace tomaslab
