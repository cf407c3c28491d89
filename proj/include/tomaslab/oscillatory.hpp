#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tomaslab/fit.hpp"
#include "tomaslab/phase.hpp"
#include "tomaslab/sampled_field.hpp"

namespace tomaslab {

/// Largest |grad_y phi| over a sample of the x box (support radius) and the given y box.
double max_y_gradient(const PhaseSpec& spec, std::span<const double> y_half_width);

/// Required y spacing 2 pi / (10 lambda G) for the oscillation rule of thumb.
double required_y_spacing(const PhaseSpec& spec, double lambda, std::span<const double> y_half_width);

/// T_lambda f(x) = sum_y zeta(x,y) exp(i lambda phi(x,y)) f(y) dy on the cells
/// of `x_grid`, with f given on its own y grid. Phases linear in x take a
/// matrix-product path; others are summed directly.
/// Throws if the y spacing exceeds required_y_spacing.
SampledField apply_T_lambda(const PhaseSpec& spec, double lambda, const SampledField& f, const SampledField& x_grid);

/// Adjoint: T* g(y) = sum_x zeta(x,y) exp(-i lambda phi(x,y)) g(x) dx on the cells of `y_grid`.
SampledField apply_T_lambda_adjoint(const PhaseSpec& spec, double lambda, const SampledField& g,
                                    const SampledField& y_grid);

/// Default x grid for scaling runs: [-r, r]^d, spacing lambda^{-1/2}/8 on the
/// first d-1 axes and 1/64 on the last.
SampledField scaling_x_grid(const PhaseSpec& spec, double lambda);

/// Smooth test function on a box |y_j| <= half_width[j].
struct TestFunction {
  std::string name;
  std::vector<double> half_width;
  std::function<Complex(std::span<const double>)> f;
};

/// Samples on a tensor grid of spacing <= `spacing` covering the box.
SampledField sample_test_function(const TestFunction& tf, double spacing);

/// Relative L2 change of T_lambda f between spacing h and h/2.
double refinement_error(const PhaseSpec& spec, double lambda, const TestFunction& tf, const SampledField& x_grid);

struct ConditionReport {
  std::string condition;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> probes;
  std::vector<double> values;  ///< per point: rank, curvature rank, or |<b, grad_y> det|
  std::vector<double> secondary;  ///< fold only: second fundamental form rank per point
  std::vector<bool> passed;
  bool verdict = false;
  bool vacuous = false;
  double tolerance = 0.0;
  std::string note;
};

using Probe = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

/// Rank of phi_xy (singular values above tol times the largest) >= target.
ConditionReport check_rank_mixed_hessian(const Phase& phase, std::span<const Probe> probes, int target,
                                         double tol = 1e-6);

/// rank of grad_yy (u . phi_x) >= kappa, u spanning the left kernel of phi_xy.
/// Throws std::domain_error naming the probe when the kernel is not one-dimensional.
ConditionReport check_curvature_rank(const Phase& phase, std::span<const Probe> probes, int kappa,
                                     double tol = 1e-6);

struct FoldOptions {
  double rank_tol = 1e-6;
  double derivative_tol = 1e-4;
  double curvature_tol = 1e-3;
  double surface_step = 1e-3;
};

/// Probes come in pairs (p_0, p_1), (p_2, p_3), ... that span segments.
/// Locates zeros of det Phi_xy along these segments by bisection,
/// then checks the fold condition <b, grad_y> det Phi_xy != 0 and the rank of
/// the second fundamental form of L_x = {Phi_x : det Phi_xy = 0} (>= kappa).
/// With no singular points the report is marked vacuous and passes.
ConditionReport check_fold(const Phase& phase, std::span<const Probe> probes, int kappa,
                           const FoldOptions& options = {});

/// Probe segments crossing y_d = 0 for a few x and y' values.
std::vector<Probe> default_fold_probes(const Phase& phase, double radius = 0.2);
std::vector<Probe> default_probes(const Phase& phase, int count = 9, double radius = 0.05, std::uint64_t seed = 0);

/// grad_y det Phi_xy via the adjugate and the third-derivative tensor.
Eigen::VectorXd grad_y_det_mixed_hessian(const Phase& phase, std::span<const double> x, std::span<const double> y);

/// Pieces of the T T* kernel: b_j (tilde = false) or tilde b_j (tilde = true).
Complex dyadic_kernel(const PhaseSpec& spec, double lambda, int j, std::span<const double> w,
                      std::span<const double> z, bool tilde, double spacing);

/// The T T* kernel int zeta(w,y) zeta(z,y) exp(i lambda (phi(w,y) - phi(z,y))) dy.
Complex tt_star_kernel(const PhaseSpec& spec, double lambda, std::span<const double> w, std::span<const double> z,
                       double spacing);

/// y spacing adequate for kernels at separation |w - z| <= reach.
double kernel_spacing(const PhaseSpec& spec, double lambda, double reach);

/// max |S_j(w, z)| over w = z + (D', D_d) with D_d in [2^{j-2}, 2^j]/lambda
/// (including 2^{j-1}/lambda), D' in {0, small offsets}, and z from a few
/// base points. Zero when 2^j > epsilon lambda.
double dyadic_kernel_sup(const PhaseSpec& spec, double lambda, int j, int samples_per_axis = 5);

struct ScalingOptions {
  std::vector<double> knapp_widths{0.5, 1.0, 2.0};  ///< multiples of lambda^{-1/2}
  bool include_constant = false;
  bool include_random = false;
  std::uint64_t seed = 0;
  double work_budget = 4e9;  ///< max (#x cells) * (#y cells) per application
};

struct ScalingReport {
  std::vector<double> lambdas;
  std::vector<double> ratios;
  std::vector<std::string> best_member;
  FitResult fit;
  double target_slope = 0.0;
  double q = 0.0;
  std::vector<std::string> notices;
};

/// Family members for one lambda.
std::vector<TestFunction> scaling_family(const PhaseSpec& spec, double lambda, const ScalingOptions& options);

/// For each lambda: max over the family of ||T_lambda f||_{L^{q,2}} / ||f||_2,
/// then a log-log fit against lambda, compared with -d/q.
ScalingReport scaling_experiment(const PhaseSpec& spec, double q, std::span<const double> lambdas,
                                 const ScalingOptions& options = {});

}  // namespace tomaslab
