#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tomaslab/lattice_transform.hpp"
#include "tomaslab/restriction.hpp"

using namespace tomaslab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// f^(xi) by a plain double loop over the cells.
Complex direct_hat(const SampledField& f, std::span<const double> xi) {
  Complex acc{};
  std::vector<double> x(f.dimension());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, x);
    double dot = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) dot += x[a] * xi[a];
    acc += f.values[flat] * std::polar(1.0, -kTwoPi * dot);
  }
  return acc * f.cell_volume();
}

double max_abs_diff(const SampledField& a, const SampledField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double sup_norm(const SampledField& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

SampledField modulated_gaussian(const GridSpec& grid, double width, double freq) {
  SampledField f = grid.zero_field();
  std::vector<double> x(2);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, x);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    f.values[flat] = std::exp(-std::numbers::pi * r2 / (width * width)) * std::polar(1.0, kTwoPi * freq * x[0]);
  }
  return f;
}

const ExponentProfile& circle_profile() {
  static const ExponentProfile e = exponent_profile(2, Rational(1), Rational(1, 2));
  return e;
}

}  // namespace

TEST_CASE("extend of the point mass at the origin is constant") {
  const auto delta = make_point_mass({0.0, 0.0});
  const std::vector<Complex> g{Complex(1.0, 0.0)};
  const auto f = extend(g, delta, make_grid(2, 2.0, 16));
  for (const auto& v : f.values) CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("extend of g = 1 is the conjugate transform of the measure") {
  const auto mu = make_sphere_measure(2, 256);
  const std::vector<Complex> g(mu.size(), Complex(1.0, 0.0));
  const auto f = extend(g, mu, make_grid(2, 4.0, 32));
  std::vector<double> pts;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const auto x = f.point(flat);
    pts.insert(pts.end(), x.begin(), x.end());
  }
  const auto hat = fourier_transform_at(mu, pts);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f.values[i] - std::conj(hat[i])) < 1e-10);
}

TEST_CASE("restriction agrees with a direct double loop") {
  const auto mu = make_sphere_measure(2, 64);
  const auto f = random_packet_field(make_grid(2, 8.0, 32), 3);
  const auto hat = restrict_to_atoms(f, mu);
  for (std::size_t k = 0; k < mu.size(); ++k) CHECK(std::abs(hat[k] - direct_hat(f, mu.atom(k))) < 1e-11);
}

TEST_CASE("extend and restrict are adjoint") {
  const auto mu = make_sphere_measure(2, 128);
  const GridSpec grid = make_grid(2, 8.0, 32);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto f = random_packet_field(grid, seed);
    std::vector<Complex> g(mu.size());
    for (auto& v : g) v = {normal(rng), normal(rng)};
    const Complex lhs = inner_product(extend(g, mu, grid), f);
    Complex rhs{};
    for (std::size_t k = 0; k < mu.size(); ++k) rhs += std::conj(g[k]) * mu.weights[k] * direct_hat(f, mu.atom(k));
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("convolution with mu^ matches a space-domain sum") {
  const auto mu = make_sphere_measure(2, 256);
  const GridSpec grid = make_grid(2, 4.0, 32);
  const auto f = random_packet_field(grid, 5);
  const auto conv = convolve_mu_hat(f, mu);

  const std::size_t n = grid.points;
  const double h = grid.spacing();
  const auto span = static_cast<long>(n) - 1;
  std::vector<double> diffs;
  for (long i = -span; i <= span; ++i) {
    for (long m = -span; m <= span; ++m) {
      diffs.push_back(static_cast<double>(i) * h);
      diffs.push_back(static_cast<double>(m) * h);
    }
  }
  const auto mu_hat = fourier_transform_at(mu, diffs);
  const auto width = static_cast<std::size_t>(2 * span + 1);
  SampledField oracle = zeros_like(f);
  const double vol = f.cell_volume();
  for (std::size_t xi = 0; xi < n; ++xi) {
    for (std::size_t xm = 0; xm < n; ++xm) {
      Complex acc{};
      for (std::size_t yi = 0; yi < n; ++yi) {
        for (std::size_t ym = 0; ym < n; ++ym) {
          const auto di = static_cast<std::size_t>(static_cast<long>(xi) - static_cast<long>(yi) + span);
          const auto dm = static_cast<std::size_t>(static_cast<long>(xm) - static_cast<long>(ym) + span);
          acc += f.values[yi * n + ym] * mu_hat[di * width + dm];
        }
      }
      oracle.values[xi * n + xm] = acc * vol;
    }
  }
  CHECK(max_abs_diff(conv, oracle) <= 1e-6 * sup_norm(oracle));
}

TEST_CASE("convolution with the transform of the point mass integrates f") {
  const GridSpec grid = make_grid(2, 8.0, 32);
  const auto f = random_packet_field(grid, 2);
  Complex integral{};
  for (const auto& v : f.values) integral += v;
  integral *= f.cell_volume();
  const auto conv = convolve_mu_hat(f, make_point_mass({0.0, 0.0}));
  for (const auto& v : conv.values) CHECK(std::abs(v - integral) < 1e-10 * std::max(1.0, std::abs(integral)));
}

TEST_CASE("convolution rejects fields reaching the outer half") {
  const GridSpec grid = make_grid(2, 2.0, 16);
  SampledField f = grid.zero_field();
  for (auto& v : f.values) v = 1.0;
  CHECK_THROWS_AS(convolve_mu_hat(f, make_sphere_measure(2, 16)), std::invalid_argument);
}

TEST_CASE("Tomas pairing equals the restricted L2 mass") {
  const auto mu = make_sphere_measure(2, 512);
  const GridSpec grid = make_grid(2, 8.0, 64);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = random_packet_field(grid, seed);
    const double mass = restrict_sq_integral(f, mu);
    const Complex pairing = tomas_pairing(f, mu);
    CHECK(std::abs(pairing - mass) <= 1e-8 * mass);
  }
}

TEST_CASE("a narrow Gaussian has f^ close to 1 on the circle") {
  const double s = 0.02;
  const GridSpec grid = make_grid(2, 0.5, 256);
  SampledField f = grid.zero_field();
  std::vector<double> x(2);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, x);
    f.values[flat] = std::exp(-std::numbers::pi * (x[0] * x[0] + x[1] * x[1]) / (s * s)) / (s * s);
  }
  const double mass = restrict_sq_integral(f, make_sphere_measure(2, 128));
  CHECK(mass == doctest::Approx(std::exp(-2.0 * std::numbers::pi * s * s)).epsilon(1e-9));
}

TEST_CASE("power iteration on the identity and on a multiplier") {
  const GridSpec grid = make_grid(2, 4.0, 32);
  const auto id = l2_operator_norm([](const SampledField& f) { return f; }, grid);
  CHECK(id.converged);
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));

  SampledField symbol = frequency_field(grid);
  const double levels[3] = {2.0, 1.0, 0.5};
  for (std::size_t i = 0; i < symbol.size(); ++i) symbol.values[i] = levels[i % 3];
  const auto est = l2_operator_norm(fourier_multiplier(grid, symbol), grid);
  CHECK(est.converged);
  CHECK(est.value == doctest::Approx(2.0).epsilon(1e-6));
  for (std::size_t k = 1; k < est.rayleigh.size(); ++k) CHECK(est.rayleigh[k] >= est.rayleigh[k - 1] * (1.0 - 1e-12));
}

TEST_CASE("dyadic pieces of the circle grow like 2^j as multipliers") {
  const GridSpec grid = make_grid(2, 16.0, 128);
  const auto mu = make_sphere_measure(2, 4096);
  const GridSpec dual = make_grid(2, grid.nyquist(), grid.points);
  std::vector<double> scaled;
  for (int j = 1; j <= 4; ++j) {
    const auto piece = dyadic_piece(reflect(mu), j, dual);
    PowerIterationOptions opts;
    opts.max_iter = 300;
    opts.tol = 1e-7;
    const auto est = l2_operator_norm(fourier_multiplier(grid, piece.mu_j), grid, opts);
    const double sup = sup_norm(piece.mu_j);
    CHECK(est.value <= sup * (1.0 + 1e-9));
    CHECK(est.value >= 0.9 * sup);
    scaled.push_back(est.value / std::ldexp(1.0, j));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo <= 10.0);
}

TEST_CASE("Lorentz lower bound over a test family") {
  const GridSpec grid = make_grid(2, 4.0, 16);
  std::vector<SampledField> family{gaussian_dilate(grid, 0.5), gaussian_dilate(grid, 1.0), grid.zero_field()};
  const auto triple = [](const SampledField& f) {
    SampledField out = f;
    for (auto& v : out.values) v *= 3.0;
    return out;
  };
  const auto est = lorentz_operator_lower_bound(triple, {2.0, 2.0}, {2.0, 2.0}, family);
  CHECK(est.lower_bound);
  CHECK(est.iterations == 3);
  CHECK(est.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(est.notices.size() == 1);
  CHECK_THROWS_AS(lorentz_operator_lower_bound(triple, {2.0, 2.0}, {2.0, 2.0}, {}), std::invalid_argument);
}

TEST_CASE("Stein-Tomas ratios stay bounded for Knapp caps and Gaussian dilates") {
  const double shift[2] = {0.0, -1.0};
  const auto circle = translate(make_sphere_measure(2, 4096), shift);
  std::vector<double> caps;
  for (int k = 2; k <= 5; ++k) caps.push_back(stein_tomas_ratio(knapp_cap(std::ldexp(1.0, -k)), circle, circle_profile()));
  const auto [lo, hi] = std::minmax_element(caps.begin(), caps.end());
  CHECK(*lo > 0.0);
  CHECK(*hi / *lo <= 2.0);

  const auto mu = make_sphere_measure(2, 2048);
  const GridSpec grid = make_grid(2, 4.0, 256);
  std::vector<double> dilates;
  for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) dilates.push_back(stein_tomas_ratio(gaussian_dilate(grid, t), mu, circle_profile()));
  for (double r : dilates) {
    CHECK(r > 0.0);
    CHECK(r < 1.5);
  }
  CHECK(dilates[4] < dilates[3]);
  CHECK(dilates[3] < dilates[2]);
}

TEST_CASE("Stein-Tomas ratio is translation invariant") {
  const auto mu = make_sphere_measure(2, 1024);
  const GridSpec grid = make_grid(2, 8.0, 64);
  const auto f = modulated_gaussian(grid, 1.0, 0.3);
  SampledField g = zeros_like(f);
  const std::size_t n = grid.points;
  for (std::size_t i = 0; i + 5 < n; ++i) {
    for (std::size_t m = 0; m + 3 < n; ++m) g.values[(i + 5) * n + m + 3] = f.values[i * n + m];
  }
  const double a = stein_tomas_ratio(f, mu, circle_profile());
  const double b = stein_tomas_ratio(g, mu, circle_profile());
  CHECK(std::abs(a - b) <= 1e-8 * a);
}

TEST_CASE("frequencies far from the circle are invisible to restriction") {
  const GridSpec grid = make_grid(2, 8.0, 256);
  const auto f = modulated_gaussian(grid, 2.0, 5.0);
  CHECK(stein_tomas_ratio(f, make_sphere_measure(2, 512), circle_profile()) < 1e-12);
}

TEST_CASE("argument validation") {
  const auto mu = make_sphere_measure(2, 16);
  CHECK_THROWS_AS(extend(std::vector<Complex>(3), mu, make_grid(2, 1.0, 8)), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to_atoms(make_grid(3, 1.0, 8).zero_field(), mu), std::invalid_argument);
  CHECK_THROWS_AS(stein_tomas_ratio(make_grid(2, 1.0, 8).zero_field(), mu, circle_profile()), std::invalid_argument);
  CHECK_THROWS_AS(knapp_cap(0.75), std::invalid_argument);
}
