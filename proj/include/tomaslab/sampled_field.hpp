#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tomaslab {

using Complex = std::complex<double>;

/// Complex samples on a uniform tensor grid. Cell i along axis a sits at
/// origin[a] + i * spacing[a]; values are row-major (last axis fastest).
struct SampledField {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<std::size_t> shape;
  std::vector<Complex> values;

  std::size_t dimension() const { return shape.size(); }
  std::size_t size() const { return values.size(); }
  double cell_volume() const;

  /// Coordinates of the cell with flat index `flat`.
  void point(std::size_t flat, std::span<double> out) const;
  std::vector<double> point(std::size_t flat) const;

  /// Multi-index to flat index.
  std::size_t flat_index(std::span<const std::size_t> index) const;
};

/// Zero field; throws on empty shape, zero counts or nonpositive spacing.
SampledField make_field(std::vector<double> origin, std::vector<double> spacing,
                        std::vector<std::size_t> shape);

/// Same grid as `like`, zero values.
SampledField zeros_like(const SampledField& like);

/// Throws if the grid is malformed or any value is not finite.
void validate_field(const SampledField& f);

/// Square grid [-L, L)^d with N points per axis (N a power of two, N >= 8).
struct GridSpec {
  int dimension = 2;
  double half_width = 1.0;
  std::size_t points = 64;

  double spacing() const { return 2.0 * half_width / static_cast<double>(points); }
  double frequency_spacing() const { return 1.0 / (2.0 * half_width); }
  double nyquist() const { return static_cast<double>(points) / (4.0 * half_width); }
  SampledField zero_field() const;
};

GridSpec make_grid(int dimension, double half_width, std::size_t points);
void validate_grid(const GridSpec& grid);

/// sum_x conj(a(x)) b(x) times the cell volume.
Complex inner_product(const SampledField& a, const SampledField& b);
double l2_norm(const SampledField& f);

}  // namespace tomaslab
