#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tomaslab/fit.hpp"
#include "tomaslab/lattice_transform.hpp"
#include "tomaslab/sampled_field.hpp"

namespace tomaslab {

/// Atomic probability measure on R^d.
struct DiscreteMeasure {
  int dimension = 1;
  std::vector<double> atoms;  ///< flat, `dimension` coordinates per atom
  std::vector<double> weights;
  std::string label;
  /// Frequency beyond which the atoms no longer stand in for the continuous
  /// measure they approximate (infinite for genuinely atomic measures).
  double aliasing_frequency = 0.0;

  std::size_t size() const { return weights.size(); }
  std::span<const double> atom(std::size_t k) const;
};

/// Throws unless weights are nonnegative, sum to 1 within 1e-12 and match the atoms.
void validate_measure(const DiscreteMeasure& mu);

/// Normalized surface measure on S^{d-1}: equispaced angles for d = 2, a
/// Fibonacci (equal-area) point set for d = 3.
DiscreteMeasure make_sphere_measure(int dimension, std::size_t n_atoms);

/// Level-`levels` Cantor construction on [0,1] with two pieces of ratio r;
/// atoms at the centres of the surviving intervals.
DiscreteMeasure make_cantor_measure(double ratio, int levels);

/// Experimental: each level places the two children at random offsets inside
/// the parent. No decay exponent is promised.
DiscreteMeasure make_random_cantor_measure(double ratio, int levels, std::uint64_t seed);

DiscreteMeasure make_point_mass(std::vector<double> at);

DiscreteMeasure translate(const DiscreteMeasure& mu, std::span<const double> shift);

/// mu^(xi) = sum_k w_k exp(-2 pi i <x_k, xi>) by direct summation; `xi` is flat.
std::vector<Complex> fourier_transform_at(const DiscreteMeasure& mu, std::span<const double> xi);

/// mu^ on a lattice through the gridding transform.
std::vector<Complex> fourier_transform_on_lattice(const DiscreteMeasure& mu, const Lattice& lattice);

struct RegularityProfile {
  std::vector<double> radii;
  std::vector<double> max_mass;         ///< max over centres of mu(B(c, r))
  std::vector<double> max_ball_ratios;  ///< max_mass / r^a_fit
  double a_fit = 0.0;
  double A_fit = 1.0;
  FitResult fit;
};

/// Centres are atoms: all of them when n_centers is 0 or exceeds the atom
/// count, otherwise an evenly strided subset.
RegularityProfile ball_regularity_profile(const DiscreteMeasure& mu, std::span<const double> radii,
                                          std::size_t n_centers = 0);

struct DecayProfile {
  std::vector<double> radii;
  std::vector<double> annulus_sups;
  double b_fit = 0.0;
  double B_fit = 1.0;
  FitResult fit;
};

/// Sup of |mu^| over n_directions sampled directions on each sphere |xi| = R.
DecayProfile fourier_decay_profile(const DiscreteMeasure& mu, std::span<const double> R_list,
                                   std::size_t n_directions);

/// Sample directions on S^{d-1} (half sphere suffices by Hermitian symmetry).
std::vector<double> sample_directions(int dimension, std::size_t count);

struct DyadicPiece {
  int j = 0;
  SampledField mu_j;      ///< on the spatial grid
  SampledField mu_hat_j;  ///< on the dual frequency lattice
  double sup_mu_j = 0.0;
  double sup_mu_hat_j = 0.0;
};

/// mu_j = mu * F^{-1}[chi_j]. The grid's Nyquist frequency must reach 2^j,
/// the outer edge of supp chi_j.
DyadicPiece dyadic_piece(const DiscreteMeasure& mu, int j, const GridSpec& grid);

/// Atom file: header `d n label`, then `x_1 ... x_d w` per line.
void write_measure(const DiscreteMeasure& mu, std::ostream& out);
DiscreteMeasure read_measure(std::istream& in);
void save_measure(const DiscreteMeasure& mu, const std::string& path);
DiscreteMeasure load_measure(const std::string& path);

}  // namespace tomaslab
