#pragma once

#include <vector>

#include "tomaslab/fit.hpp"
#include "tomaslab/lorentz.hpp"
#include "tomaslab/measure_lab.hpp"
#include "tomaslab/sampled_field.hpp"

namespace tomaslab {

/// eta_0 = chi_0: 1 on |t| <= 1/2, supported in (-1, 1).
double knapp_eta0(double t);
/// eta_1: supported in 3/4 < |t| < 5/4, equal to 1 on 7/8 <= |t| <= 9/8.
double knapp_eta1(double t);

/// Inverse Fourier transforms of eta_0 and eta_1(|.|) on the line (both real
/// and even). Computed by quadrature; identically 0 beyond |u| = 256 (eta_0)
/// and |u| = 1024 (eta_1), where the true values are below 1e-15.
double knapp_eta0_check(double u);
double knapp_eta1_check(double u);

/// Superposition of N Knapp caps on the circle (d = 2):
///   g(xi) = sum_{k=1}^N 2^{k/q} eta_1(2^k |xi_1|) eta_0(2^{2k-shift} |xi_2 - 1|).
/// With shift = 5 the first cap also reaches the south pole; shift = 2 keeps
/// every cap within the northern arc.
struct KnappSpec {
  int N = 1;
  double q = 2.0;
  int shift = 5;
};

double knapp_g(const KnappSpec& spec, double xi1, double xi2);

/// |f| for f = F^{-1}[g] (the modulation exp(2 pi i x_2) dropped).
double knapp_f_modulus(const KnappSpec& spec, double x1, double x2);

/// Bound sup|f| <= sum_k 2^{k/q} ||eta_1(2^k .)||_1 ||eta_0(2^{2k-shift} .)||_1.
double knapp_sup_bound(const KnappSpec& spec);

/// g at the atoms of `circle` together with f on the cells of `grid`
/// (including the modulation). Rejected unless the grid resolves every cap:
/// Nyquist >= 10 and half-width >= 8 * max(2^N, 2^{2N-shift}).
struct KnappFunction {
  std::vector<double> g;
  SampledField f;
};

KnappFunction knapp_function(const KnappSpec& spec, const DiscreteMeasure& circle, const GridSpec& grid);

/// (int |g|^q dsigma)^{1/q} against the atoms of `circle`.
double knapp_g_norm(const KnappSpec& spec, const DiscreteMeasure& circle);

/// Nested anisotropic patches covering the scales of caps 1..N: patch l
/// spans |x_1| < W 2^l, |x_2| < W 2^{2l-shift} with P cells per unit of each
/// cap scale, minus the box of patch l-1.
struct PatchLayout {
  int width = 8;       ///< W
  int resolution = 8;  ///< P
  /// Reject layouts with more cells than this.
  std::size_t max_cells = std::size_t{1} << 24;
};

/// |f| samples and their cell volumes over the patches of `layout`.
struct PatchSamples {
  std::vector<double> magnitudes;
  std::vector<double> volumes;
};

PatchSamples knapp_patch_samples(const KnappSpec& spec, const PatchLayout& layout);

/// Largest N that `layout` admits.
int knapp_max_N(const PatchLayout& layout);

struct KnappReport {
  std::vector<int> N;
  double q = 2.0;
  double p = 0.0;
  std::vector<double> s_list;
  std::vector<double> g_norm;
  std::vector<std::vector<double>> f_norm;  ///< [s index][N index]
  FitResult g_fit;
  std::vector<FitResult> f_fit;             ///< per s
  /// slope_g - slope_f(s) for each s; positive for s > q witnesses unboundedness.
  std::vector<double> gap;
};

/// p is derived from q = (d-1) p' / (d+1) with d = 2, i.e. p' = 3q.
double knapp_p_for_q(double q);

KnappReport knapp_sharpness_experiment(double q, const std::vector<double>& s_list, const std::vector<int>& N_list,
                                       const PatchLayout& layout = {}, std::size_t circle_atoms = 65536,
                                       int shift = 5);

/// |{|f| > level}| from patch samples.
double distribution_measure(const PatchSamples& samples, double level);

}  // namespace tomaslab
