#include <doctest.h>

#include <random>
#include <string>

#include "tomaslab/exponents.hpp"

using namespace tomaslab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

/// Closed forms written out directly from (d, a, b).
struct Closed {
  Rational p_circ, theta, gamma, rho, sigma;
};

Closed closed(int d, const Rational& a, const Rational& b) {
  const Rational D = d - a;
  return {2 * (D + b) / (2 * D + b), D / (D + b), D / (D + 2 * b),
          (D + 2 * b) * (D + b) / (D * D + 3 * b * D + b * b), (D + 2 * b) / b};
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == R(3));
  CHECK(parse_rational("-2/5") == R(-2, 5));
  CHECK(parse_rational("0.25") == R(1, 4));
  CHECK(parse_rational("6/4") == R(3, 2));
  CHECK(to_string(R(6, 4)) == "3/2");
  CHECK(to_string(R(4)) == "4");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}

TEST_CASE("named profiles") {
  const auto p = exponent_profile(3, R(2), R(1));
  CHECK(p.p_circ == R(4, 3));
  CHECK(p.theta == R(1, 2));
  CHECK(p.gamma == R(1, 3));
  CHECK(p.rho == R(6, 5));
  CHECK(p.sigma == R(3));
  CHECK(p.p_circ == R(2 * (3 + 1), 3 + 3));

  const auto q = exponent_profile(2, R(1), R(1, 2));
  CHECK(q.p_circ == R(6, 5));
  CHECK(q.theta == R(2, 3));
  CHECK(q.gamma == R(1, 2));
  CHECK(q.rho == R(12, 11));
  CHECK(q.sigma == R(4));

  CHECK(exponent_profile(2, R(1), R(1, 4)).p_circ == R(10, 9));
}

TEST_CASE("rho and sigma match the kappa formulas at d - a = 1, b = kappa/2") {
  for (int kappa = 1; kappa <= 12; ++kappa) {
    const auto p = exponent_profile(kappa + 2, R(kappa + 1), R(kappa, 2));
    CHECK(p.rho == R(2 * (kappa + 1) * (kappa + 2), kappa * kappa + 6 * kappa + 4));
    CHECK(p.sigma == R(2 * kappa + 2, kappa));
  }
}

TEST_CASE("invalid profiles name the violated inequality") {
  auto message = [](int d, Rational a, Rational b) {
    try {
      exponent_profile(d, a, b);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(3, R(2), R(2)).find("b <= a/2") != std::string::npos);
  CHECK(message(3, R(3), R(1)).find("a < d") != std::string::npos);
  CHECK(message(3, R(2), R(0)).find("b > 0") != std::string::npos);
  CHECK(message(2, R(-1), R(1)).find("a > 0") != std::string::npos);
}

TEST_CASE("critical q") {
  CHECK(critical_q(exponent_profile(2, R(1), R(1, 2)), R(6, 5)).value() == R(2));
  CHECK(critical_q(exponent_profile(3, R(2), R(1)), R(4, 3)).value() == R(2));
  const auto at_one = critical_q(exponent_profile(3, R(2), R(1)), R(1));
  CHECK(at_one.infinite());
  CHECK_THROWS(at_one.value());
  CHECK_THROWS(critical_q(exponent_profile(3, R(2), R(1)), R(3, 2)));
}

TEST_CASE("oscillatory exponents") {
  const auto k1 = oscillatory_exponents(1);
  REQUIRE(k1.q_circ);
  CHECK(*k1.q_circ == R(6));
  CHECK(k1.q_one == R(3));
  const auto k2 = oscillatory_exponents(2);
  CHECK(*k2.q_circ == R(4));
  CHECK(*k2.q_circ == R(2 * 3 + 2, 3 - 1));
  const auto k0 = oscillatory_exponents(0);
  CHECK(k0.q_one == R(4));
  CHECK_FALSE(k0.q_circ.has_value());
  CHECK_THROWS(q_circ(0));
  for (int kappa = 0; kappa <= 10; ++kappa) {
    const auto o = oscillatory_exponents(kappa);
    CHECK(1 - 1 / o.rho_one + 1 / o.sigma_one == R(kappa + 1, kappa + 3));
    CHECK(1 - 1 / o.rho_one + 1 / o.sigma_one < 2 / o.q_one);
    if (kappa >= 1) CHECK(1 - 1 / *o.rho_kappa + 1 / *o.sigma_kappa == 2 / *o.q_circ);
  }
}

TEST_CASE("Hormander exponent") {
  CHECK(hormander_q(2, R(2)) == R(6));
  CHECK(hormander_q(2, R(2)) == q_circ(1));
  CHECK(hormander_q(3, R(2)) == R(4));
  CHECK(hormander_q(2, R(4)) == R(4));
  CHECK_THROWS(hormander_q(2, R(1)));
  CHECK_THROWS(hormander_q(2, R(4, 1) + 1));
}

TEST_CASE("interpolation") {
  SUBCASE("stage one at (2, 1, 1/2)") {
    const auto profile = exponent_profile(2, R(1), R(1, 2));
    const double A = 3.0, B = 5.0;
    const auto in = stage_one_input(profile, A, B);
    CHECK(in.beta0 == R(1, 2));
    CHECK(in.beta1 == R(1));
    const auto out = bourgain_interpolate(in);
    CHECK(out.vartheta == R(1, 3));
    CHECK(out.target.first == R(5, 6));
    CHECK(out.target.second == R(1, 6));
    CHECK(out.target.first == 1 / profile.p_circ);
    CHECK(out.constant_bound == doctest::Approx(std::pow(B, 2.0 / 3.0) * std::pow(A, 1.0 / 3.0)));
    CHECK(out.constant_note == "xC");
  }
  SUBCASE("symmetric input") {
    InterpolationInput in{R(2, 3), R(2, 3), 1.0, 1.0, {R(1), R(0)}, {R(1, 2), R(1, 2)}};
    const auto out = bourgain_interpolate(in);
    CHECK(out.vartheta == R(1, 2));
    CHECK(out.constant_bound == doctest::Approx(1.0));
  }
  SUBCASE("stage two at (2, 1, 1/2)") {
    const auto profile = exponent_profile(2, R(1), R(1, 2));
    const auto in = stage_two_input(profile, 2.0, 2.0);
    CHECK(in.beta1 == R(1, 2));
    CHECK(in.endpoint1 == ExponentPoint{R(5, 6), R(1, 2)});
    const auto out = bourgain_interpolate(in);
    CHECK(out.target == ExponentPoint{R(11, 12), R(1, 4)});
    CHECK(out.target == ExponentPoint{1 / profile.rho, 1 / profile.sigma});
  }
  SUBCASE("rejections") {
    InterpolationInput in{R(0), R(1), 1.0, 1.0, {R(1), R(0)}, {R(1, 2), R(1, 2)}};
    CHECK_THROWS(bourgain_interpolate(in));
  }
}

TEST_CASE("identity suite on random rational profiles") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 7), den(1, 15);
  int tested = 0;
  while (tested < 300) {
    const int d = dim(rng);
    const int da = den(rng), db = den(rng);
    if (d * da < 2) continue;
    const Rational a(std::uniform_int_distribution<long>(1, long(d) * da - 1)(rng), da);
    const Rational half = a / 2 * db;
    const long top = static_cast<long>(boost::multiprecision::numerator(half) / boost::multiprecision::denominator(half));
    if (top < 1) continue;
    const Rational b(std::uniform_int_distribution<long>(1, top)(rng), db);
    const auto profile = exponent_profile(d, a, b);
    for (const auto& check : verify_identities(profile)) {
      INFO(check.name, " at d=", d, " a=", to_string(a), " b=", to_string(b));
      CHECK(check.holds);
    }
    const auto c = closed(d, a, b);
    CHECK(profile.p_circ == c.p_circ);
    CHECK(profile.theta == c.theta);
    CHECK(profile.gamma == c.gamma);
    CHECK(profile.rho == c.rho);
    CHECK(profile.sigma == c.sigma);
    CHECK(profile.p_circ > 1);
    CHECK(profile.p_circ < 2);
    CHECK(critical_q(profile, profile.p_circ).value() == 2);
    CHECK(bourgain_interpolate(stage_one_input(profile, 1.0, 1.0)).target.first == 1 / profile.p_circ);
    CHECK(bourgain_interpolate(stage_one_input(profile, 1.0, 1.0)).vartheta == 1 - profile.theta);
    CHECK(bourgain_interpolate(stage_two_input(profile, 1.0, 1.0)).target ==
          ExponentPoint{1 / profile.rho, 1 / profile.sigma});
    ++tested;
  }
}
