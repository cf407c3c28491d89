#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tomaslab {

/// Third derivatives phi_{x_i y_j y_k}, indexed [i](j, k).
using ThirdTensor = std::vector<Eigen::MatrixXd>;

/// Real phase phi(x, y) with x in R^d and y in R^{d_y}. The default
/// derivative evaluators are central differences of `value` (step 1e-4 up
/// to second order, 1e-3 for the third-order tensor); subclasses with
/// closed forms override them.
class Phase {
 public:
  virtual ~Phase() = default;

  virtual int x_dim() const = 0;
  virtual int y_dim() const = 0;
  virtual std::string name() const = 0;
  virtual double value(std::span<const double> x, std::span<const double> y) const = 0;

  virtual Eigen::VectorXd grad_x(std::span<const double> x, std::span<const double> y) const;
  virtual Eigen::VectorXd grad_y(std::span<const double> x, std::span<const double> y) const;
  /// (i, j) entry phi_{x_i y_j}.
  virtual Eigen::MatrixXd mixed_hessian(std::span<const double> x, std::span<const double> y) const;
  virtual ThirdTensor third_xyy(std::span<const double> x, std::span<const double> y) const;

  /// True when phi(x, y) = <x, Gamma(y)> + h(y); enables the matrix-product
  /// quadrature path.
  virtual bool linear_in_x() const { return false; }

  /// Finite-difference versions, always available for cross-checks.
  Eigen::VectorXd fd_grad_x(std::span<const double> x, std::span<const double> y) const;
  Eigen::VectorXd fd_grad_y(std::span<const double> x, std::span<const double> y) const;
  Eigen::MatrixXd fd_mixed_hessian(std::span<const double> x, std::span<const double> y) const;
  ThirdTensor fd_third_xyy(std::span<const double> x, std::span<const double> y) const;
};

using PhasePtr = std::shared_ptr<const Phase>;

/// Sum of monomials c * prod x_i^{a_i} * prod y_j^{b_j}; all derivatives exact.
class PolynomialPhase final : public Phase {
 public:
  struct Term {
    double coefficient = 0.0;
    std::vector<int> x_powers;
    std::vector<int> y_powers;
  };

  PolynomialPhase(int x_dim, int y_dim, std::vector<Term> terms, std::string name);

  int x_dim() const override { return x_dim_; }
  int y_dim() const override { return y_dim_; }
  std::string name() const override { return name_; }
  double value(std::span<const double> x, std::span<const double> y) const override;
  Eigen::VectorXd grad_x(std::span<const double> x, std::span<const double> y) const override;
  Eigen::VectorXd grad_y(std::span<const double> x, std::span<const double> y) const override;
  Eigen::MatrixXd mixed_hessian(std::span<const double> x, std::span<const double> y) const override;
  ThirdTensor third_xyy(std::span<const double> x, std::span<const double> y) const override;
  bool linear_in_x() const override;

  /// Partial derivative with orders dx (per x axis) and dy (per y axis).
  double derivative(std::span<const double> x, std::span<const double> y, std::span<const int> dx,
                    std::span<const int> dy) const;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  int x_dim_;
  int y_dim_;
  std::vector<Term> terms_;
  std::string name_;
};

/// Phase given only by its values; every derivative is a finite difference.
class FunctionPhase final : public Phase {
 public:
  using Fn = std::function<double(std::span<const double>, std::span<const double>)>;
  FunctionPhase(int x_dim, int y_dim, Fn fn, std::string name);

  int x_dim() const override { return x_dim_; }
  int y_dim() const override { return y_dim_; }
  std::string name() const override { return name_; }
  double value(std::span<const double> x, std::span<const double> y) const override { return fn_(x, y); }

 private:
  int x_dim_;
  int y_dim_;
  Fn fn_;
  std::string name_;
};

/// phi(Q x, R y) for orthogonal Q, R; derivatives transformed exactly.
class RotatedPhase final : public Phase {
 public:
  RotatedPhase(PhasePtr base, Eigen::MatrixXd Q, Eigen::MatrixXd R);

  int x_dim() const override { return base_->x_dim(); }
  int y_dim() const override { return base_->y_dim(); }
  std::string name() const override { return base_->name() + "-rotated"; }
  double value(std::span<const double> x, std::span<const double> y) const override;
  Eigen::VectorXd grad_x(std::span<const double> x, std::span<const double> y) const override;
  Eigen::VectorXd grad_y(std::span<const double> x, std::span<const double> y) const override;
  Eigen::MatrixXd mixed_hessian(std::span<const double> x, std::span<const double> y) const override;
  ThirdTensor third_xyy(std::span<const double> x, std::span<const double> y) const override;
  bool linear_in_x() const override { return base_->linear_in_x(); }

  /// Base-frame coordinates (Q x, R y).
  std::pair<Eigen::VectorXd, Eigen::VectorXd> to_base(std::span<const double> x, std::span<const double> y) const;

 private:
  PhasePtr base_;
  Eigen::MatrixXd Q_;
  Eigen::MatrixXd R_;
};

/// Haar-random orthogonal matrix of size n.
Eigen::MatrixXd random_rotation(int n, std::uint64_t seed);

/// Phase with amplitude zeta(x, y) = chi_0(|x|/r) prod_j chi_0(|y_j|/r),
/// r = support_radius (epsilon^2 unless set explicitly).
struct PhaseSpec {
  PhasePtr phase;
  double epsilon = 0.3;
  double support_radius = 0.09;

  double amplitude_x(std::span<const double> x) const;
  double amplitude_y(std::span<const double> y) const;
  double amplitude(std::span<const double> x, std::span<const double> y) const {
    return amplitude_x(x) * amplitude_y(y);
  }
};

PhaseSpec make_phase_spec(PhasePtr phase, double epsilon = 0.3);

/// Built-in phases: parabola (<x',y> + x_d|y|^2/2), cone (<x',y> + x_d y_1^2/2),
/// fold-flat (x_1 y_1 + x_2 y_2^2/2), fold-curved (x_1 y_1 + x_2 (y_1^2+y_2^2)/2),
/// zero (y-dimension d-1), zero-fold (y-dimension d).
PhasePtr catalog_phase(const std::string& name, int d);
std::vector<std::string> catalog_names();

/// Coefficient file: header `d d_y [name]`, then one
/// `c a_1 ... a_d b_1 ... b_{d_y}` row per monomial.
PhasePtr read_polynomial_phase(std::istream& in);
PhasePtr load_polynomial_phase(const std::string& path);

struct DerivativeCheck {
  int probes = 0;
  double max_discrepancy = 0.0;  ///< max over probes and entries, scaled by max(1, |exact|)
  bool passed = false;
};

/// Compares the phase's derivative evaluators with central differences at
/// random probes in [-radius, radius]^{d + d_y}.
DerivativeCheck validate_derivatives(const Phase& phase, int n_probes = 100, std::uint64_t seed = 0,
                                     double radius = 0.5, double tol = 1e-5);

}  // namespace tomaslab
