#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "tomaslab/phase.hpp"

using namespace tomaslab;

namespace {

/// phi = 2 x_1^2 y_1 y_2^3 - x_2 y_1.
PhasePtr sample_polynomial() {
  return std::make_shared<PolynomialPhase>(
      2, 2, std::vector<PolynomialPhase::Term>{{2.0, {2, 0}, {1, 3}}, {-1.0, {0, 1}, {1, 0}}}, "sample");
}

class WrongGradient final : public Phase {
 public:
  int x_dim() const override { return 2; }
  int y_dim() const override { return 1; }
  std::string name() const override { return "wrong"; }
  double value(std::span<const double> x, std::span<const double> y) const override { return x[0] * y[0] + x[1] * x[1]; }
  Eigen::VectorXd grad_x(std::span<const double>, std::span<const double> y) const override {
    return Eigen::Vector2d(y[0], 0.0);
  }
};

}  // namespace

TEST_CASE("polynomial derivatives against hand formulas") {
  const auto phi = sample_polynomial();
  const std::vector<double> x{0.7, -1.3}, y{0.4, 1.1};
  const double x1 = x[0], x2 = x[1], y1 = y[0], y2 = y[1];
  CHECK(phi->value(x, y) == doctest::Approx(2 * x1 * x1 * y1 * std::pow(y2, 3) - x2 * y1));

  const auto gx = phi->grad_x(x, y);
  CHECK(gx(0) == doctest::Approx(4 * x1 * y1 * std::pow(y2, 3)));
  CHECK(gx(1) == doctest::Approx(-y1));
  const auto gy = phi->grad_y(x, y);
  CHECK(gy(0) == doctest::Approx(2 * x1 * x1 * std::pow(y2, 3) - x2));
  CHECK(gy(1) == doctest::Approx(6 * x1 * x1 * y1 * y2 * y2));

  const auto m = phi->mixed_hessian(x, y);
  CHECK(m(0, 0) == doctest::Approx(4 * x1 * std::pow(y2, 3)));
  CHECK(m(0, 1) == doctest::Approx(12 * x1 * y1 * y2 * y2));
  CHECK(m(1, 0) == doctest::Approx(-1.0));
  CHECK(m(1, 1) == doctest::Approx(0.0));

  const auto t = phi->third_xyy(x, y);
  REQUIRE(t.size() == 2);
  CHECK(t[0](0, 0) == doctest::Approx(0.0));
  CHECK(t[0](0, 1) == doctest::Approx(12 * x1 * y2 * y2));
  CHECK(t[0](1, 0) == doctest::Approx(12 * x1 * y2 * y2));
  CHECK(t[0](1, 1) == doctest::Approx(24 * x1 * y1 * y2));
  CHECK(t[1].norm() == doctest::Approx(0.0));

  const std::vector<int> dx{2, 0}, dy{1, 2};
  CHECK(std::dynamic_pointer_cast<const PolynomialPhase>(phi)->derivative(x, y, dx, dy) == doctest::Approx(24 * y2));
  CHECK_FALSE(phi->linear_in_x());
}

TEST_CASE("validation of exact derivatives") {
  for (const auto& name : catalog_names()) {
    for (int d : {2, 3}) {
      if (d == 3 && name.rfind("fold", 0) == 0) continue;
      const auto check = validate_derivatives(*catalog_phase(name, d));
      CHECK_MESSAGE(check.passed, name);
      CHECK(check.probes == 100);
    }
  }
  CHECK(validate_derivatives(*sample_polynomial()).passed);
  const auto bad = validate_derivatives(WrongGradient{});
  CHECK_FALSE(bad.passed);
  CHECK(bad.max_discrepancy > 0.1);
}

TEST_CASE("finite differences on a transcendental phase") {
  const FunctionPhase phi(2, 1, [](std::span<const double> x, std::span<const double> y) {
    return std::sin(x[0] * y[0]) + std::exp(x[1] * y[0] * y[0]);
  }, "trig");
  const std::vector<double> x{0.3, -0.2}, y{0.5};
  const auto m = phi.mixed_hessian(x, y);
  CHECK(m(0, 0) == doctest::Approx(std::cos(0.15) - 0.15 * std::sin(0.15)).epsilon(1e-6));
  const double e = std::exp(-0.2 * 0.25);
  CHECK(m(1, 0) == doctest::Approx(2 * 0.5 * e + 0.25 * (-0.2) * 2 * 0.5 * e).epsilon(1e-6));
  const auto t = phi.third_xyy(x, y);
  const double s = std::sin(0.15), c = std::cos(0.15);
  CHECK(t[0](0, 0) == doctest::Approx(-2 * 0.3 * s - 0.3 * 0.3 * 0.5 * c).epsilon(1e-4));
}

TEST_CASE("random rotations are orthogonal") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto q = random_rotation(3, seed);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  }
  CHECK((random_rotation(4, 1) - random_rotation(4, 2)).norm() > 1e-3);
}

TEST_CASE("rotated phases transform their derivatives") {
  const auto base = sample_polynomial();
  const auto Q = random_rotation(2, 3), R = random_rotation(2, 4);
  const RotatedPhase rot(base, Q, R);
  const std::vector<double> x{0.2, -0.4}, y{0.3, 0.6};
  const Eigen::Vector2d qx = Q * Eigen::Vector2d(x[0], x[1]), ry = R * Eigen::Vector2d(y[0], y[1]);
  const std::vector<double> bx{qx(0), qx(1)}, by{ry(0), ry(1)};
  CHECK(rot.value(x, y) == doctest::Approx(base->value(bx, by)));
  CHECK((rot.mixed_hessian(x, y) - Q.transpose() * base->mixed_hessian(bx, by) * R).norm() < 1e-12);
  CHECK((rot.grad_y(x, y) - R.transpose() * base->grad_y(bx, by)).norm() < 1e-12);
  CHECK(validate_derivatives(rot).passed);
  CHECK(rot.name() == "sample-rotated");
}

TEST_CASE("mixed Hessian rank is rotation invariant") {
  const auto base = catalog_phase("parabola", 3);
  const RotatedPhase rot(base, random_rotation(3, 7), random_rotation(2, 8));
  const std::vector<double> x{0.01, 0.02, -0.03}, y{0.02, -0.01};
  Eigen::JacobiSVD<Eigen::MatrixXd> a(base->mixed_hessian(x, y)), b(rot.mixed_hessian(x, y));
  CHECK((a.singularValues() - b.singularValues()).norm() < 1e-12);
}

TEST_CASE("catalog phases") {
  const std::vector<double> x{0.1, 0.2, 0.3}, y{0.4, 0.5};
  CHECK(catalog_phase("parabola", 3)->value(x, y) == doctest::Approx(0.04 + 0.1 + 0.3 * (0.16 + 0.25) / 2));
  CHECK(catalog_phase("cone", 3)->value(x, y) == doctest::Approx(0.04 + 0.1 + 0.3 * 0.16 / 2));
  const std::vector<double> x2{0.1, 0.2}, y2{0.4, 0.5};
  CHECK(catalog_phase("fold-flat", 2)->value(x2, y2) == doctest::Approx(0.04 + 0.2 * 0.25 / 2));
  CHECK(catalog_phase("fold-curved", 2)->value(x2, y2) == doctest::Approx(0.04 + 0.2 * 0.41 / 2));
  CHECK(catalog_phase("zero", 3)->y_dim() == 2);
  CHECK(catalog_phase("zero-fold", 3)->y_dim() == 3);
  CHECK(catalog_phase("parabola", 3)->linear_in_x());
  CHECK_THROWS_WITH_AS(catalog_phase("fold-flat", 3), doctest::Contains("d = 2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(catalog_phase("saddle", 2), doctest::Contains("parabola, cone"), std::invalid_argument);
}

TEST_CASE("phase file parsing") {
  std::istringstream in("2 1 bilinear\n1 1 0 1\n\n0.5 0 1 2\n");
  const auto phi = read_polynomial_phase(in);
  CHECK(phi->name() == "bilinear");
  CHECK(phi->x_dim() == 2);
  CHECK(phi->y_dim() == 1);
  const std::vector<double> x{0.3, 0.4}, y{2.0};
  CHECK(phi->value(x, y) == doctest::Approx(0.6 + 0.5 * 0.4 * 4.0));
  CHECK(phi->linear_in_x());

  std::istringstream short_row("2 1\n1 1 0\n");
  CHECK_THROWS_AS(read_polynomial_phase(short_row), std::runtime_error);
  std::istringstream no_header("");
  CHECK_THROWS_AS(read_polynomial_phase(no_header), std::runtime_error);
  CHECK_THROWS_AS(load_polynomial_phase("/nonexistent/phase.txt"), std::runtime_error);
}

TEST_CASE("amplitude is a product of cutoffs") {
  const auto spec = make_phase_spec(catalog_phase("parabola", 2), 0.3);
  CHECK(spec.support_radius == doctest::Approx(0.09));
  const std::vector<double> origin{0.0, 0.0}, far{0.1, 0.0}, y{0.02};
  CHECK(spec.amplitude(origin, y) == 1.0);
  CHECK(spec.amplitude_x(far) == 0.0);
  const std::vector<double> y_edge{0.09};
  CHECK(spec.amplitude_y(y_edge) == 0.0);
  CHECK_THROWS_AS(make_phase_spec(nullptr), std::invalid_argument);
  CHECK_THROWS_AS(make_phase_spec(catalog_phase("parabola", 2), 1.5), std::invalid_argument);
}
