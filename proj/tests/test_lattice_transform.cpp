#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tomaslab/lattice_transform.hpp"

using namespace tomaslab;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("gridding transform matches direct summation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> n;
  for (int d = 1; d <= 3; ++d) {
    for (int sign : {-1, 1}) {
      const std::size_t k = 300;
      std::vector<double> pts(k * d);
      for (auto& p : pts) p = 1.3 * u(rng);
      std::vector<Complex> c(k);
      double total = 0.0;
      for (auto& v : c) {
        const double re = n(rng);
        const double im = n(rng);
        v = {re, im};
        total += std::abs(v);
      }
      Lattice lat;
      const std::size_t per = d == 3 ? 12 : (d == 2 ? 33 : 200);
      for (int a = 0; a < d; ++a) {
        lat.origin.push_back(-7.3 + a);
        lat.spacing.push_back(0.41 + 0.1 * a);
        lat.shape.push_back(per);
      }
      const auto fast = lattice_transform(pts, d, c, lat, sign);
      const auto slow = lattice_transform_direct(pts, d, c, lat, sign);
      CHECK(max_abs_diff(fast, slow) <= 1e-10 * total);
    }
  }
}

TEST_CASE("direct transform against a hand sum") {
  const std::vector<double> pts{0.25, -0.5};
  const std::vector<Complex> c{{1, 0}, {0, 2}};
  Lattice lat{{1.0}, {1.0}, {3}};
  const auto f = lattice_transform_direct(pts, 1, c, lat, -1);
  for (std::size_t m = 0; m < 3; ++m) {
    const double xi = 1.0 + m;
    const Complex expect = std::polar(1.0, -2 * kPi * 0.25 * xi) + Complex{0, 2} * std::polar(1.0, 2 * kPi * 0.5 * xi);
    CHECK(std::abs(f[m] - expect) < 1e-14);
  }
}

TEST_CASE("fft_nd equals the naive DFT") {
  const std::vector<std::size_t> shape{4, 6};
  std::vector<Complex> data(24);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (auto& v : data) {
    const double re = n(rng);
    const double im = n(rng);
    v = {re, im};
  }
  std::vector<Complex> naive(24);
  for (std::size_t k0 = 0; k0 < 4; ++k0) {
    for (std::size_t k1 = 0; k1 < 6; ++k1) {
      Complex s{};
      for (std::size_t n0 = 0; n0 < 4; ++n0) {
        for (std::size_t n1 = 0; n1 < 6; ++n1) {
          s += data[n0 * 6 + n1] * std::polar(1.0, -2 * kPi * (double(k0 * n0) / 4 + double(k1 * n1) / 6));
        }
      }
      naive[k0 * 6 + k1] = s;
    }
  }
  fft_nd(data, shape, -1);
  CHECK(max_abs_diff(data, naive) < 1e-12);
}

TEST_CASE("analyze_on_grid reproduces the Gaussian transform") {
  const GridSpec grid = make_grid(2, 4.0, 64);
  SampledField f = grid.zero_field();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.point(i);
    f.values[i] = std::exp(-kPi * (x[0] * x[0] + x[1] * x[1]));
  }
  const SampledField F = analyze_on_grid(f, grid);
  const SampledField lattice = frequency_field(grid);
  CHECK(F.shape == lattice.shape);
  double err = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto xi = F.point(i);
    err = std::max(err, std::abs(F.values[i] - std::exp(-kPi * (xi[0] * xi[0] + xi[1] * xi[1]))));
  }
  CHECK(err < 1e-12);
  // Zero frequency sits at index N/2.
  const std::vector<std::size_t> mid{32, 32};
  const auto zero = F.point(F.flat_index(mid));
  CHECK(std::abs(zero[0]) < 1e-15);
  CHECK(std::abs(zero[1]) < 1e-15);
}

TEST_CASE("synthesis inverts analysis on the grid") {
  const GridSpec grid = make_grid(1, 3.0, 128);
  SampledField f = grid.zero_field();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (auto& v : f.values) {
    const double re = n(rng);
    const double im = n(rng);
    v = {re, im};
  }
  const SampledField back = synthesize_on_grid(analyze_on_grid(f, grid), grid);
  CHECK(max_abs_diff(back.values, f.values) < 1e-12);
}

TEST_CASE("synthesis agrees with a direct Riemann sum") {
  const GridSpec grid = make_grid(1, 2.0, 32);
  SampledField spec = frequency_field(grid);
  for (std::size_t i = 0; i < spec.size(); ++i) spec.values[i] = Complex(std::cos(0.3 * i), std::sin(0.7 * i));
  const SampledField u = synthesize_on_grid(spec, grid);
  const double dxi = grid.frequency_spacing();
  for (std::size_t m = 0; m < u.size(); ++m) {
    const double x = u.point(m)[0];
    Complex s{};
    for (std::size_t i = 0; i < spec.size(); ++i) s += spec.values[i] * std::polar(1.0, 2 * kPi * x * spec.point(i)[0]);
    CHECK(std::abs(u.values[m] - s * dxi) < 1e-12);
  }
}
