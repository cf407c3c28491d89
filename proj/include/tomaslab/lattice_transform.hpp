#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tomaslab/sampled_field.hpp"

namespace tomaslab {

/// Tensor lattice of evaluation points origin + n * spacing, n in [0, shape).
struct Lattice {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<std::size_t> shape;

  std::size_t size() const;
};

/// Lattice carrying the same points as the cells of `f`.
Lattice lattice_of(const SampledField& f);

/// Exponential sum over scattered points evaluated on a lattice:
///   F(n) = sum_k c_k exp(sign * 2 pi i <x_k, origin + n * spacing>),
/// row-major in n. `points` holds the x_k flat (k-major, `dimension` each).
///
/// Uses Gaussian gridding onto a 2x oversampled grid followed by an FFT
/// (Greengard-Lee); agrees with direct summation to within 1e-10 * sum_k |c_k|.
std::vector<Complex> lattice_transform(std::span<const double> points, int dimension,
                                       std::span<const Complex> coeffs, const Lattice& lattice,
                                       int sign = -1);

/// Same sum by direct evaluation, O(#points * #lattice).
std::vector<Complex> lattice_transform_direct(std::span<const double> points, int dimension,
                                              std::span<const Complex> coeffs,
                                              const Lattice& lattice, int sign = -1);

/// In-place unnormalized multidimensional DFT, row-major; sign -1 is forward.
void fft_nd(std::vector<Complex>& data, std::span<const std::size_t> shape, int sign);

/// Frequency lattice dual to `grid`: N points per axis, spacing 1/(2L),
/// centred so that index N/2 is frequency zero. Values are zero.
SampledField frequency_field(const GridSpec& grid);

/// Riemann-sum synthesis  u(x) = sum_xi F(xi) exp(2 pi i <x, xi>) dxi^d  on the
/// cells of `grid`, where F lives on frequency_field(grid). Uses one FFT.
SampledField synthesize_on_grid(const SampledField& spectrum, const GridSpec& grid);

/// Riemann-sum analysis  F(xi) = sum_x f(x) exp(-2 pi i <x, xi>) dx^d  on the
/// frequency lattice of `grid`; `f` must carry the cells of `grid`.
SampledField analyze_on_grid(const SampledField& f, const GridSpec& grid);

}  // namespace tomaslab
