#include "tomaslab/sampled_field.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tomaslab {

double SampledField::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

void SampledField::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t a = shape.size(); a-- > 0;) {
    const std::size_t i = flat % shape[a];
    flat /= shape[a];
    out[a] = origin[a] + static_cast<double>(i) * spacing[a];
  }
}

std::vector<double> SampledField::point(std::size_t flat) const {
  std::vector<double> p(shape.size());
  point(flat, p);
  return p;
}

std::size_t SampledField::flat_index(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < shape.size(); ++a) flat = flat * shape[a] + index[a];
  return flat;
}

SampledField make_field(std::vector<double> origin, std::vector<double> spacing,
                        std::vector<std::size_t> shape) {
  if (shape.empty() || origin.size() != shape.size() || spacing.size() != shape.size()) {
    throw std::invalid_argument("make_field: origin, spacing and shape must have equal nonzero length");
  }
  std::size_t count = 1;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (shape[a] == 0) throw std::invalid_argument("make_field: zero points on an axis");
    if (!(spacing[a] > 0.0)) throw std::invalid_argument("make_field: spacing must be positive");
    count *= shape[a];
  }
  SampledField f{std::move(origin), std::move(spacing), std::move(shape), {}};
  f.values.assign(count, Complex{});
  return f;
}

SampledField zeros_like(const SampledField& like) {
  return make_field(like.origin, like.spacing, like.shape);
}

void validate_field(const SampledField& f) {
  std::size_t count = 1;
  for (auto n : f.shape) count *= n;
  if (f.shape.empty() || count != f.values.size()) {
    throw std::invalid_argument("SampledField: value count does not match grid size");
  }
  if (!(f.cell_volume() > 0.0)) throw std::invalid_argument("SampledField: cell volume must be positive");
  for (const auto& v : f.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("SampledField: non-finite value");
    }
  }
}

void validate_grid(const GridSpec& grid) {
  if (grid.dimension < 1) throw std::invalid_argument("GridSpec: dimension must be positive");
  if (!(grid.half_width > 0.0)) throw std::invalid_argument("GridSpec: half width must be positive");
  if (grid.points < 8 || !std::has_single_bit(grid.points)) {
    throw std::invalid_argument("GridSpec: points per axis must be a power of two >= 8, got " +
                                std::to_string(grid.points));
  }
}

GridSpec make_grid(int dimension, double half_width, std::size_t points) {
  GridSpec g{dimension, half_width, points};
  validate_grid(g);
  return g;
}

SampledField GridSpec::zero_field() const {
  validate_grid(*this);
  const auto d = static_cast<std::size_t>(dimension);
  return make_field(std::vector<double>(d, -half_width), std::vector<double>(d, spacing()),
                    std::vector<std::size_t>(d, points));
}

Complex inner_product(const SampledField& a, const SampledField& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("inner_product: size mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
  return s * a.cell_volume();
}

double l2_norm(const SampledField& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.cell_volume());
}

}  // namespace tomaslab
