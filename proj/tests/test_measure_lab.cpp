#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "tomaslab/bump.hpp"
#include "tomaslab/measure_lab.hpp"

using namespace tomaslab;

namespace {

constexpr double kPi = std::numbers::pi;

Complex transform_at(const DiscreteMeasure& mu, std::vector<double> xi) { return fourier_transform_at(mu, xi).at(0); }

/// max over atom centres of mu(B(c, r)) by scanning every pair.
double brute_ball_mass(const DiscreteMeasure& mu, double r) {
  double best = 0.0;
  const auto d = static_cast<std::size_t>(mu.dimension);
  for (std::size_t c = 0; c < mu.size(); ++c) {
    double mass = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double t = mu.atoms[c * d + a] - mu.atoms[k * d + a];
        d2 += t * t;
      }
      if (d2 <= r * r) mass += mu.weights[k];
    }
    best = std::max(best, mass);
  }
  return best;
}

std::vector<double> powers(double base, int lo, int hi) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(std::pow(base, k));
  return v;
}

std::vector<double> descending(double base, int lo, int hi) {
  auto v = powers(base, lo, hi);
  std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("circle measure transform is J0(2 pi |xi|)") {
  const auto circle = make_sphere_measure(2, 1024);
  validate_measure(circle);
  double err = 0.0;
  for (double r = 0.0; r <= 100.0; r += 0.37) {
    for (double angle : {0.0, 0.3, 1.1, 2.9}) {
      const Complex v = transform_at(circle, {r * std::cos(angle), r * std::sin(angle)});
      err = std::max(err, std::abs(v - std::cyl_bessel_j(0.0, 2 * kPi * r)));
    }
  }
  CHECK(err < 1e-6);
  CHECK(std::abs(transform_at(circle, {10.0, 0.0}) - std::cyl_bessel_j(0.0, 20 * kPi)) < 1e-6);
}

TEST_CASE("sixteen equispaced circle atoms") {
  const auto mu = make_sphere_measure(2, 16);
  REQUIRE(mu.size() == 16);
  std::vector<double> angles;
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(mu.weights[k] == doctest::Approx(1.0 / 16.0));
    const auto p = mu.atom(k);
    CHECK(std::hypot(p[0], p[1]) == doctest::Approx(1.0));
    angles.push_back(std::atan2(p[1], p[0]));
  }
  std::sort(angles.begin(), angles.end());
  for (std::size_t k = 1; k < 16; ++k) CHECK(angles[k] - angles[k - 1] == doctest::Approx(2 * kPi / 16));
}

TEST_CASE("sphere measure in R^3 against sin(2 pi r)/(2 pi r)") {
  const auto s2 = make_sphere_measure(3, 4096);
  auto sinc = [](double r) { return r == 0.0 ? 1.0 : std::sin(2 * kPi * r) / (2 * kPi * r); };
  double axis = 0.0;
  for (double r = 0.0; r <= 50.0; r += 0.23) axis = std::max(axis, std::abs(transform_at(s2, {0.0, 0.0, r}) - sinc(r)));
  CHECK(axis < 1e-4);
  double generic = 0.0;
  for (double r = 0.0; r <= 2.0; r += 0.05) {
    const double n = std::sqrt(1.0 + 4.0 + 9.0);
    generic = std::max(generic, std::abs(transform_at(s2, {r / n, 2 * r / n, 3 * r / n}) - sinc(r)));
  }
  CHECK(generic < 1e-4);
}

TEST_CASE("Cantor measure transform is a Riesz product") {
  const auto mu = make_cantor_measure(1.0 / 3.0, 10);
  REQUIRE(mu.size() == 1024);
  for (double w : mu.weights) CHECK(w == doctest::Approx(std::ldexp(1.0, -10)));
  double err = 0.0;
  for (double xi = -200.0; xi <= 200.0; xi += 0.731) {
    double product = 1.0;
    for (int k = 1; k <= 10; ++k) product *= std::cos(kPi * std::pow(1.0 / 3.0, k) * xi * 2.0);
    const Complex v = transform_at(mu, {xi}) * std::polar(1.0, kPi * xi);
    err = std::max(err, std::abs(v - product));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("ratio 1/2 Cantor measure is uniform on a dyadic grid") {
  auto mu = make_cantor_measure(0.5, 3);
  REQUIRE(mu.size() == 8);
  std::vector<double> x(mu.atoms);
  std::sort(x.begin(), x.end());
  for (std::size_t k = 0; k < 8; ++k) CHECK(x[k] - x[0] == doctest::Approx(k / 8.0));
}

TEST_CASE("transform normalisation") {
  const auto delta = make_point_mass({0.0, 0.0});
  CHECK(std::abs(transform_at(delta, {3.7, -1.2}) - 1.0) < 1e-15);
  for (const auto& mu : {make_sphere_measure(2, 100), make_cantor_measure(0.25, 6)}) {
    std::vector<double> zero(static_cast<std::size_t>(mu.dimension), 0.0);
    CHECK(std::abs(transform_at(mu, zero) - 1.0) < 1e-12);
  }
}

TEST_CASE("transform bounds, Hermitian symmetry and translation covariance") {
  const auto circle = make_sphere_measure(2, 500);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  const std::vector<double> shift{0.3, -1.7};
  const auto moved = translate(circle, shift);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> xi{u(rng), u(rng)};
    const Complex v = transform_at(circle, xi);
    CHECK(std::abs(v) <= 1.0 + 1e-12);
    CHECK(std::abs(transform_at(circle, {-xi[0], -xi[1]}) - std::conj(v)) < 1e-12);
    const Complex phase = std::polar(1.0, -2 * kPi * (shift[0] * xi[0] + shift[1] * xi[1]));
    CHECK(std::abs(transform_at(moved, xi) - phase * v) < 1e-11);
  }
}

TEST_CASE("lattice transform agrees with direct evaluation") {
  const auto circle = make_sphere_measure(2, 2000);
  Lattice lat{{-16.0, -16.0}, {0.25, 0.25}, {128, 128}};
  const auto fast = fourier_transform_on_lattice(circle, lat);
  std::vector<double> xi;
  for (std::size_t i = 0; i < 128; ++i) {
    for (std::size_t j = 0; j < 128; ++j) {
      xi.push_back(-16.0 + 0.25 * i);
      xi.push_back(-16.0 + 0.25 * j);
    }
  }
  const auto slow = fourier_transform_at(circle, xi);
  double err = 0.0;
  for (std::size_t k = 0; k < slow.size(); ++k) err = std::max(err, std::abs(fast[k] - slow[k]));
  CHECK(err < 1e-10);
}

TEST_CASE("ball regularity: Frostman exponents") {
  SUBCASE("circle") {
    const auto profile = ball_regularity_profile(make_sphere_measure(2, 4096), descending(2.0, -8, -2));
    CHECK(profile.a_fit >= 0.9);
    CHECK(profile.a_fit <= 1.1);
    CHECK(profile.A_fit >= 1.0);
  }
  SUBCASE("middle thirds") {
    const auto profile = ball_regularity_profile(make_cantor_measure(1.0 / 3.0, 14), descending(3.0, -8, -2));
    CHECK(profile.a_fit >= 0.58);
    CHECK(profile.a_fit <= 0.68);
  }
  SUBCASE("ratio 1/4 against brute-force ball counting") {
    const auto mu = make_cantor_measure(0.25, 8);
    const auto radii = descending(4.0, -6, -2);
    const auto profile = ball_regularity_profile(mu, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      CHECK(profile.max_mass[i] == doctest::Approx(brute_ball_mass(mu, radii[i])).epsilon(1e-12));
    }
    CHECK(std::abs(profile.a_fit - 0.5) < 0.05);
  }
  SUBCASE("circle against brute-force ball counting") {
    const auto mu = make_sphere_measure(2, 700);
    const auto radii = descending(2.0, -7, -1);
    const auto profile = ball_regularity_profile(mu, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      CHECK(profile.max_mass[i] == doctest::Approx(brute_ball_mass(mu, radii[i])).epsilon(1e-12));
    }
  }
  SUBCASE("point mass has dimension zero") {
    const auto profile = ball_regularity_profile(make_point_mass({0.5}), descending(2.0, -6, -1));
    CHECK(std::abs(profile.a_fit) < 1e-12);
  }
  SUBCASE("translation leaves the fit unchanged") {
    const auto mu = make_sphere_measure(2, 1024);
    const std::vector<double> shift{5.0, -2.0};
    const auto a = ball_regularity_profile(mu, descending(2.0, -7, -2)).a_fit;
    const auto b = ball_regularity_profile(translate(mu, shift), descending(2.0, -7, -2)).a_fit;
    CHECK(std::abs(a - b) < 1e-6);
  }
}

TEST_CASE("Fourier decay exponents") {
  SUBCASE("circle") {
    const auto profile = fourier_decay_profile(make_sphere_measure(2, 8192), powers(2.0, 2, 8), 16);
    CHECK(profile.b_fit >= 0.45);
    CHECK(profile.b_fit <= 0.55);
  }
  SUBCASE("middle thirds does not decay along powers of 3") {
    const auto profile = fourier_decay_profile(make_cantor_measure(1.0 / 3.0, 16), powers(3.0, 1, 6), 1);
    CHECK(profile.b_fit < 0.05);
  }
  SUBCASE("point mass") {
    const auto profile = fourier_decay_profile(make_point_mass({0.0, 0.0}), powers(2.0, 0, 5), 8);
    for (double s : profile.annulus_sups) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(profile.b_fit == 0.0);
  }
  SUBCASE("translation leaves the fit unchanged") {
    const auto mu = make_sphere_measure(2, 4096);
    const std::vector<double> shift{0.7, 0.2};
    const auto a = fourier_decay_profile(mu, powers(2.0, 2, 7), 12).b_fit;
    const auto b = fourier_decay_profile(translate(mu, shift), powers(2.0, 2, 7), 12).b_fit;
    CHECK(std::abs(a - b) < 1e-6);
  }
  SUBCASE("radii beyond the aliasing frequency are refused") {
    const auto mu = make_sphere_measure(2, 256);
    CHECK_THROWS_AS(fourier_decay_profile(mu, powers(2.0, 2, 8), 8), std::invalid_argument);
  }
}

TEST_CASE("dyadic pieces") {
  SUBCASE("point mass: mu^_j is the bump itself") {
    const GridSpec grid = make_grid(2, 2.0, 64);
    const auto piece = dyadic_piece(make_point_mass({0.0, 0.0}), 3, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < piece.mu_hat_j.size(); ++i) {
      const auto xi = piece.mu_hat_j.point(i);
      err = std::max(err, std::abs(piece.mu_hat_j.values[i] - dyadic_bump(3, std::hypot(xi[0], xi[1]))));
    }
    CHECK(err < 1e-12);
    CHECK(piece.sup_mu_hat_j == doctest::Approx(1.0));
  }
  SUBCASE("circle: scaled sups stay flat for small j") {
    const auto circle = make_sphere_measure(2, 8192);
    const GridSpec grid = make_grid(2, 2.0, 256);
    std::vector<double> hat, space;
    for (int j = 1; j <= 5; ++j) {
      const auto piece = dyadic_piece(circle, j, grid);
      hat.push_back(piece.sup_mu_hat_j * std::pow(2.0, j / 2.0));
      space.push_back(piece.sup_mu_j * std::ldexp(1.0, -j));
    }
    CHECK(*std::max_element(hat.begin(), hat.end()) / *std::min_element(hat.begin(), hat.end()) <= 10.0);
    CHECK(*std::max_element(space.begin(), space.end()) / *std::min_element(space.begin(), space.end()) <= 10.0);
  }
  SUBCASE("grid must resolve 2^j") {
    CHECK_THROWS_AS(dyadic_piece(make_sphere_measure(2, 8192), 6, make_grid(2, 2.0, 128)), std::invalid_argument);
  }
}

TEST_CASE("measure files round-trip exactly") {
  const auto mu = make_sphere_measure(3, 50);
  std::stringstream io;
  write_measure(mu, io);
  const auto back = read_measure(io);
  CHECK(back.dimension == 3);
  CHECK(back.atoms == mu.atoms);
  CHECK(back.weights == mu.weights);
  CHECK(back.label == mu.label);
}

TEST_CASE("invalid measures are rejected") {
  DiscreteMeasure mu;
  mu.dimension = 1;
  mu.atoms = {0.0, 1.0};
  mu.weights = {0.5, 0.6};
  CHECK_THROWS(validate_measure(mu));
  mu.weights = {1.5, -0.5};
  CHECK_THROWS(validate_measure(mu));
  mu.weights = {1.0};
  CHECK_THROWS(validate_measure(mu));
  CHECK_THROWS(make_cantor_measure(0.6, 3));
  CHECK_THROWS(make_sphere_measure(4, 10));
}
