#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tomaslab/lorentz.hpp"

using namespace tomaslab;

namespace {

SampledField line_field(std::vector<Complex> values, double spacing = 1.0) {
  SampledField f = make_field({0.0}, {spacing}, {values.size()});
  f.values = std::move(values);
  return f;
}

/// (p/s) sum_i v_i^s (T_i^{s/p} - T_{i-1}^{s/p}) over the sorted cells, one cell at a time.
double naive_lorentz(std::vector<double> mags, double vol, double p, double s) {
  std::sort(mags.rbegin(), mags.rend());
  if (std::isinf(s)) {
    double best = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) best = std::max(best, std::pow((i + 1) * vol, 1.0 / p) * mags[i]);
    return best;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    total += std::pow(mags[i], s) * (std::pow((i + 1) * vol, s / p) - std::pow(i * vol, s / p));
  }
  return std::pow(p / s * total, 1.0 / s);
}

}  // namespace

TEST_CASE("decreasing rearrangement") {
  auto steps = decreasing_rearrangement(line_field({3.0, 1.0, 1.0}));
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].value == 3.0);
  CHECK(steps[0].width == 1.0);
  CHECK(steps[1].value == 1.0);
  CHECK(steps[1].width == 2.0);
  CHECK(decreasing_rearrangement(line_field({0.0, 0.0})).empty());
  steps = decreasing_rearrangement(line_field({Complex{-2.0, 0.0}, Complex{0.0, 2.0}}));
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].value == 2.0);
  CHECK(steps[0].width == 2.0);
}

TEST_CASE("weighted rearrangement merges equal magnitudes across volumes") {
  const std::vector<double> mags{1.0, 5.0, 1.0, 0.0}, vols{0.5, 0.25, 2.0, 9.0};
  const auto steps = decreasing_rearrangement(mags, vols);
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].value == 5.0);
  CHECK(steps[0].width == 0.25);
  CHECK(steps[1].value == 1.0);
  CHECK(steps[1].width == 2.5);
}

TEST_CASE("closed forms") {
  SUBCASE("indicator of measure 4, p = 2, s = 1") {
    CHECK(lorentz_norm(line_field({1.0, 1.0, 1.0, 1.0}), {2.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("L^{2,2} is L^2") {
    const auto f = line_field({3.0, 1.0});
    CHECK(lorentz_norm(f, {2.0, 2.0}) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  }
  SUBCASE("indicator with s = inf") {
    for (double p : {1.0, 1.5, 3.0, 7.0}) {
      const auto f = line_field({1.0, 1.0, 1.0}, 0.7);
      CHECK(lorentz_norm(f, {p, LorentzExponent::infinity}) == doctest::Approx(std::pow(2.1, 1.0 / p)).epsilon(1e-14));
    }
  }
  SUBCASE("zero field") { CHECK(lorentz_norm(line_field({0.0, 0.0}), {2.0, 3.0}) == 0.0); }
}

TEST_CASE("agreement with a cell-by-cell sum on random fields") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(u(rng) * 60);
    std::vector<Complex> v(n);
    std::vector<double> mags(n);
    for (int i = 0; i < n; ++i) {
      v[i] = std::polar(std::floor(4.0 * u(rng)) + u(rng) * (t % 2), 6.0 * u(rng));
      mags[i] = std::abs(v[i]);
    }
    const double vol = 0.05 + u(rng);
    const double p = 1.0 + 5.0 * u(rng);
    const double s = t % 5 == 0 ? LorentzExponent::infinity : 0.5 + 6.0 * u(rng);
    const double oracle = naive_lorentz(mags, vol, p, s);
    const double got = lorentz_norm(line_field(v, vol), {p, s});
    CHECK(got == doctest::Approx(oracle).epsilon(1e-11));
  }
}

TEST_CASE("dilation by 2 scales the norm by 2^{-d/p}") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  SampledField f = make_field({-1.0, -1.0}, {0.25, 0.25}, {8, 8});
  for (auto& v : f.values) v = {n(rng), n(rng)};
  SampledField g = make_field({-0.5, -0.5}, {0.125, 0.125}, {8, 8});
  g.values = f.values;
  for (double p : {1.0, 1.5, 4.0}) {
    for (double s : {1.0, 2.0, LorentzExponent::infinity}) {
      CHECK(lorentz_norm(g, {p, s}) == doctest::Approx(std::pow(2.0, -2.0 / p) * lorentz_norm(f, {p, s})).epsilon(1e-10));
    }
  }
}

TEST_CASE("monotone in |f|") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<Complex> a(40), b(40);
    for (int i = 0; i < 40; ++i) {
      const double m = u(rng);
      a[i] = std::polar(m, 6.0 * u(rng));
      b[i] = std::polar(m + u(rng), 6.0 * u(rng));
    }
    const double p = 1.0 + 4.0 * u(rng);
    const double s = 0.5 + 4.0 * u(rng);
    CHECK(lorentz_norm(line_field(a), {p, s}) <= lorentz_norm(line_field(b), {p, s}) * (1.0 + 1e-14));
  }
}

TEST_CASE("exponent validation") {
  CHECK_THROWS(lorentz_norm(line_field({1.0}), {0.0, 1.0}));
  CHECK_THROWS(lorentz_norm(line_field({1.0}), {2.0, -1.0}));
  CHECK_THROWS(lorentz_norm(line_field({1.0}), {LorentzExponent::infinity, 1.0}));
}
