#include "tomaslab/lattice_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tomaslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Oversampling factor 2 and half-width 12 give double-precision-level
// accuracy for Gaussian gridding.
constexpr std::size_t kOversample = 2;
constexpr int kSpread = 12;

void check_inputs(std::span<const double> points, int dimension, std::span<const Complex> coeffs,
                  const Lattice& lattice) {
  if (dimension < 1) throw std::invalid_argument("lattice_transform: dimension must be positive");
  const auto d = static_cast<std::size_t>(dimension);
  if (points.size() != coeffs.size() * d) {
    throw std::invalid_argument("lattice_transform: points and coefficients disagree in count");
  }
  if (lattice.origin.size() != d || lattice.spacing.size() != d || lattice.shape.size() != d) {
    throw std::invalid_argument("lattice_transform: lattice dimension mismatch");
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (lattice.shape[a] == 0) throw std::invalid_argument("lattice_transform: empty lattice axis");
  }
}

struct Window {
  std::vector<std::size_t> index;
  std::vector<double> weight;
};

}  // namespace

std::size_t Lattice::size() const {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

Lattice lattice_of(const SampledField& f) { return Lattice{f.origin, f.spacing, f.shape}; }

void fft_nd(std::vector<Complex>& data, std::span<const std::size_t> shape, int sign) {
  std::vector<int> n(shape.begin(), shape.end());
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total != data.size()) throw std::invalid_argument("fft_nd: shape does not match data");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  // FFTW_ESTIMATE keeps plan choice, and therefore rounding, reproducible.
  fftw_plan plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), ptr, ptr,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (plan == nullptr) throw std::runtime_error("fft_nd: FFTW planning failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::vector<Complex> lattice_transform_direct(std::span<const double> points, int dimension,
                                              std::span<const Complex> coeffs,
                                              const Lattice& lattice, int sign) {
  check_inputs(points, dimension, coeffs, lattice);
  const auto d = static_cast<std::size_t>(dimension);
  const std::size_t total = lattice.size();
  std::vector<Complex> out(total);
  std::vector<double> xi(d);
  const double s = sign < 0 ? -kTwoPi : kTwoPi;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = d; a-- > 0;) {
      xi[a] = lattice.origin[a] + static_cast<double>(rem % lattice.shape[a]) * lattice.spacing[a];
      rem /= lattice.shape[a];
    }
    Complex acc{};
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      double dot = 0.0;
      for (std::size_t a = 0; a < d; ++a) dot += points[k * d + a] * xi[a];
      acc += coeffs[k] * std::polar(1.0, s * dot);
    }
    out[flat] = acc;
  }
  return out;
}

std::vector<Complex> lattice_transform(std::span<const double> points, int dimension,
                                       std::span<const Complex> coeffs, const Lattice& lattice,
                                       int sign) {
  check_inputs(points, dimension, coeffs, lattice);
  if (sign > 0) {
    std::vector<Complex> conj_coeffs(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) conj_coeffs[k] = std::conj(coeffs[k]);
    auto out = lattice_transform(points, dimension, conj_coeffs, lattice, -1);
    for (auto& v : out) v = std::conj(v);
    return out;
  }

  const auto d = static_cast<std::size_t>(dimension);
  const std::size_t n_points = coeffs.size();

  // Shift the lattice to be centred: n = m + c with m in [-c, M - c).
  std::vector<std::size_t> center(d), fine(d);
  std::vector<double> tau(d);
  for (std::size_t a = 0; a < d; ++a) {
    const std::size_t m = lattice.shape[a];
    center[a] = m / 2;
    fine[a] = kOversample * std::max<std::size_t>(m, 8);
    const double mm = static_cast<double>(std::max<std::size_t>(m, 8));
    tau[a] = std::numbers::pi * kSpread /
             (mm * mm * static_cast<double>(kOversample) * (static_cast<double>(kOversample) - 0.5));
  }
  std::size_t fine_total = 1;
  for (auto f : fine) fine_total *= f;
  std::vector<Complex> grid(fine_total);

  std::vector<Window> windows(d);
  for (auto& w : windows) {
    w.index.resize(2 * kSpread);
    w.weight.resize(2 * kSpread);
  }
  std::vector<std::size_t> counter(d);

  for (std::size_t k = 0; k < n_points; ++k) {
    double shift = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double x = points[k * d + a];
      shift += x * (lattice.origin[a] + static_cast<double>(center[a]) * lattice.spacing[a]);
      double t = std::fmod(kTwoPi * lattice.spacing[a] * x, kTwoPi);
      if (t < 0.0) t += kTwoPi;
      const double cell = kTwoPi / static_cast<double>(fine[a]);
      const auto j0 = static_cast<long long>(std::floor(t / cell));
      for (int l = 0; l < 2 * kSpread; ++l) {
        const long long j = j0 + l - kSpread + 1;
        const double dist = t - cell * static_cast<double>(j);
        const auto nf = static_cast<long long>(fine[a]);
        windows[a].index[static_cast<std::size_t>(l)] = static_cast<std::size_t>(((j % nf) + nf) % nf);
        windows[a].weight[static_cast<std::size_t>(l)] = std::exp(-dist * dist / (4.0 * tau[a]));
      }
    }
    const Complex c = coeffs[k] * std::polar(1.0, -kTwoPi * shift);
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      std::size_t flat = 0;
      double w = 1.0;
      for (std::size_t a = 0; a < d; ++a) {
        flat = flat * fine[a] + windows[a].index[counter[a]];
        w *= windows[a].weight[counter[a]];
      }
      grid[flat] += c * w;
      std::size_t a = d;
      while (a-- > 0) {
        if (++counter[a] < 2 * kSpread) break;
        counter[a] = 0;
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
  }

  fft_nd(grid, fine, -1);

  std::vector<std::vector<double>> correction(d);
  std::vector<std::vector<std::size_t>> source(d);
  for (std::size_t a = 0; a < d; ++a) {
    const std::size_t m = lattice.shape[a];
    correction[a].resize(m);
    source[a].resize(m);
    for (std::size_t n = 0; n < m; ++n) {
      const auto mi = static_cast<long long>(n) - static_cast<long long>(center[a]);
      const auto nf = static_cast<long long>(fine[a]);
      source[a][n] = static_cast<std::size_t>(((mi % nf) + nf) % nf);
      correction[a][n] = std::sqrt(std::numbers::pi / tau[a]) *
                         std::exp(static_cast<double>(mi * mi) * tau[a]) /
                         static_cast<double>(fine[a]);
    }
  }

  const std::size_t total = lattice.size();
  std::vector<Complex> out(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    std::size_t src = 0;
    std::size_t stride = 1;
    double scale = 1.0;
    for (std::size_t a = d; a-- > 0;) {
      const std::size_t n = rem % lattice.shape[a];
      rem /= lattice.shape[a];
      src += source[a][n] * stride;
      stride *= fine[a];
      scale *= correction[a][n];
    }
    out[flat] = grid[src] * scale;
  }
  return out;
}

}  // namespace tomaslab

namespace tomaslab {

namespace {

void check_grid_field(const SampledField& f, const GridSpec& grid, const char* who) {
  validate_grid(grid);
  const auto d = static_cast<std::size_t>(grid.dimension);
  if (f.dimension() != d) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  for (std::size_t a = 0; a < d; ++a) {
    if (f.shape[a] != grid.points) {
      throw std::invalid_argument(std::string(who) + ": field shape does not match the grid");
    }
  }
}

// Sign pattern (-1)^{n_1 + ... + n_d} for the half-period shift between the
// centred and uncentred index conventions.
double parity(std::size_t flat, std::size_t n, std::size_t d) {
  std::size_t sum = 0;
  for (std::size_t a = 0; a < d; ++a) {
    sum += flat % n;
    flat /= n;
  }
  return (sum % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

SampledField frequency_field(const GridSpec& grid) {
  validate_grid(grid);
  const auto d = static_cast<std::size_t>(grid.dimension);
  const double dxi = grid.frequency_spacing();
  const double start = -static_cast<double>(grid.points / 2) * dxi;
  return make_field(std::vector<double>(d, start), std::vector<double>(d, dxi),
                    std::vector<std::size_t>(d, grid.points));
}

// With x_n = -L + n h and xi_m = (m - N/2) dxi, h dxi = 1/N, the kernel
// exp(2 pi i x_n xi_m) factors as exp(-2 pi i L xi_m) (-1)^n exp(2 pi i n m / N).
SampledField synthesize_on_grid(const SampledField& spectrum, const GridSpec& grid) {
  check_grid_field(spectrum, grid, "synthesize_on_grid");
  const auto d = static_cast<std::size_t>(grid.dimension);
  const std::size_t n = grid.points;
  const double dxi = grid.frequency_spacing();
  std::vector<Complex> work(spectrum.values);
  std::vector<double> xi(d);
  for (std::size_t flat = 0; flat < work.size(); ++flat) {
    spectrum.point(flat, xi);
    double s = 0.0;
    for (double v : xi) s += v;
    work[flat] *= std::polar(1.0, -kTwoPi * grid.half_width * s);
  }
  std::vector<std::size_t> shape(d, n);
  fft_nd(work, shape, +1);
  SampledField out = grid.zero_field();
  const double scale = std::pow(dxi, static_cast<double>(d));
  for (std::size_t flat = 0; flat < work.size(); ++flat) {
    out.values[flat] = work[flat] * (scale * parity(flat, n, d));
  }
  return out;
}

SampledField analyze_on_grid(const SampledField& f, const GridSpec& grid) {
  check_grid_field(f, grid, "analyze_on_grid");
  const auto d = static_cast<std::size_t>(grid.dimension);
  const std::size_t n = grid.points;
  std::vector<Complex> work(f.values.size());
  for (std::size_t flat = 0; flat < work.size(); ++flat) {
    work[flat] = f.values[flat] * parity(flat, n, d);
  }
  std::vector<std::size_t> shape(d, n);
  fft_nd(work, shape, -1);
  SampledField out = frequency_field(grid);
  const double scale = std::pow(grid.spacing(), static_cast<double>(d));
  std::vector<double> xi(d);
  for (std::size_t flat = 0; flat < work.size(); ++flat) {
    out.point(flat, xi);
    double s = 0.0;
    for (double v : xi) s += v;
    out.values[flat] = work[flat] * std::polar(scale, kTwoPi * grid.half_width * s);
  }
  return out;
}

}  // namespace tomaslab
