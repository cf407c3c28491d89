#include "tomaslab/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tomaslab/bump.hpp"

namespace tomaslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

std::span<const double> DiscreteMeasure::atom(std::size_t k) const {
  const auto d = static_cast<std::size_t>(dimension);
  return std::span<const double>(atoms).subspan(k * d, d);
}

void validate_measure(const DiscreteMeasure& mu) {
  if (mu.dimension < 1) throw std::invalid_argument("measure: dimension must be positive");
  if (mu.weights.empty()) throw std::invalid_argument("measure: needs at least one atom");
  if (mu.atoms.size() != mu.weights.size() * static_cast<std::size_t>(mu.dimension)) {
    throw std::invalid_argument("measure: atom and weight counts differ");
  }
  double total = 0.0;
  for (double w : mu.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("measure: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("measure: weights sum to " + format_double(total) + ", not 1");
  }
  for (double x : mu.atoms) {
    if (!std::isfinite(x)) throw std::invalid_argument("measure: atoms must be finite");
  }
}

DiscreteMeasure make_sphere_measure(int dimension, std::size_t n_atoms) {
  if (dimension != 2 && dimension != 3) {
    throw std::invalid_argument("make_sphere_measure: supported dimensions are 2 and 3");
  }
  if (n_atoms < 16) throw std::invalid_argument("make_sphere_measure: need at least 16 atoms");
  DiscreteMeasure mu;
  mu.dimension = dimension;
  mu.weights.assign(n_atoms, 1.0 / static_cast<double>(n_atoms));
  const auto n = static_cast<double>(n_atoms);
  if (dimension == 2) {
    mu.label = "circle";
    mu.aliasing_frequency = n / (kTwoPi * 4.0);
    for (std::size_t k = 0; k < n_atoms; ++k) {
      const double t = kTwoPi * static_cast<double>(k) / n;
      mu.atoms.push_back(std::cos(t));
      mu.atoms.push_back(std::sin(t));
    }
  } else {
    mu.label = "sphere";
    mu.aliasing_frequency = std::sqrt(n) / (kTwoPi * 4.0);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < n_atoms; ++k) {
      const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * static_cast<double>(k);
      mu.atoms.push_back(r * std::cos(t));
      mu.atoms.push_back(r * std::sin(t));
      mu.atoms.push_back(z);
    }
  }
  return mu;
}

namespace {

void check_cantor(double ratio, int levels) {
  if (!(ratio > 0.0 && ratio <= 0.5)) throw std::invalid_argument("cantor: ratio must lie in (0, 1/2]");
  if (levels < 1 || levels > 25) throw std::invalid_argument("cantor: levels must lie in [1, 25]");
}

}  // namespace

DiscreteMeasure make_cantor_measure(double ratio, int levels) {
  check_cantor(ratio, levels);
  DiscreteMeasure mu;
  mu.dimension = 1;
  mu.label = "cantor";
  const std::size_t count = std::size_t{1} << levels;
  mu.weights.assign(count, 1.0 / static_cast<double>(count));
  mu.atoms.resize(count);
  const double cell = std::pow(ratio, levels);
  for (std::size_t i = 0; i < count; ++i) {
    // Digit k (most significant first) picks the left or right child.
    double x = 0.0;
    double scale = 1.0 - ratio;
    for (int k = levels - 1; k >= 0; --k) {
      if ((i >> k) & 1U) x += scale;
      scale *= ratio;
    }
    mu.atoms[i] = x + 0.5 * cell;
  }
  mu.aliasing_frequency = std::pow(1.0 / ratio, levels) / 4.0;
  return mu;
}

DiscreteMeasure make_random_cantor_measure(double ratio, int levels, std::uint64_t seed) {
  check_cantor(ratio, levels);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slack(0.0, 0.5 * (1.0 - 2.0 * ratio));
  std::vector<double> left{0.0};
  double length = 1.0;
  for (int level = 0; level < levels; ++level) {
    std::vector<double> next;
    next.reserve(2 * left.size());
    for (double a : left) {
      next.push_back(a + slack(rng) * length);
      next.push_back(a + (1.0 - ratio - slack(rng)) * length);
    }
    left = std::move(next);
    length *= ratio;
  }
  DiscreteMeasure mu;
  mu.dimension = 1;
  mu.label = "random-cantor";
  mu.weights.assign(left.size(), 1.0 / static_cast<double>(left.size()));
  for (double a : left) mu.atoms.push_back(a + 0.5 * length);
  mu.aliasing_frequency = 1.0 / (4.0 * length);
  return mu;
}

DiscreteMeasure make_point_mass(std::vector<double> at) {
  if (at.empty()) throw std::invalid_argument("make_point_mass: empty location");
  DiscreteMeasure mu;
  mu.dimension = static_cast<int>(at.size());
  mu.atoms = std::move(at);
  mu.weights = {1.0};
  mu.label = "point";
  mu.aliasing_frequency = std::numeric_limits<double>::infinity();
  return mu;
}

DiscreteMeasure translate(const DiscreteMeasure& mu, std::span<const double> shift) {
  const auto d = static_cast<std::size_t>(mu.dimension);
  if (shift.size() != d) throw std::invalid_argument("translate: dimension mismatch");
  DiscreteMeasure out = mu;
  for (std::size_t i = 0; i < out.atoms.size(); ++i) out.atoms[i] += shift[i % d];
  return out;
}

std::vector<Complex> fourier_transform_at(const DiscreteMeasure& mu, std::span<const double> xi) {
  const auto d = static_cast<std::size_t>(mu.dimension);
  if (xi.size() % d != 0) throw std::invalid_argument("fourier_transform_at: dimension mismatch");
  const std::size_t count = xi.size() / d;
  std::vector<Complex> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    Complex acc{};
    for (std::size_t k = 0; k < mu.size(); ++k) {
      double dot = 0.0;
      for (std::size_t a = 0; a < d; ++a) dot += mu.atoms[k * d + a] * xi[m * d + a];
      acc += mu.weights[k] * std::polar(1.0, -kTwoPi * dot);
    }
    out[m] = acc;
  }
  return out;
}

std::vector<Complex> fourier_transform_on_lattice(const DiscreteMeasure& mu, const Lattice& lattice) {
  std::vector<Complex> coeffs(mu.weights.begin(), mu.weights.end());
  return lattice_transform(mu.atoms, mu.dimension, coeffs, lattice, -1);
}

RegularityProfile ball_regularity_profile(const DiscreteMeasure& mu, std::span<const double> radii,
                                          std::size_t n_centers) {
  validate_measure(mu);
  if (radii.size() < 3) throw std::invalid_argument("ball_regularity_profile: need at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 1.0)) {
      throw std::invalid_argument("ball_regularity_profile: radii must lie in (0, 1]");
    }
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw std::invalid_argument("ball_regularity_profile: radii must be strictly decreasing");
    }
  }
  const auto d = static_cast<std::size_t>(mu.dimension);
  const std::size_t n = mu.size();

  // Sort atoms by first coordinate; a ball meets only a window of the order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mu.atoms[a * d] < mu.atoms[b * d]; });
  std::vector<double> first(n), prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    first[i] = mu.atoms[order[i] * d];
    prefix[i + 1] = prefix[i] + mu.weights[order[i]];
  }

  std::vector<std::size_t> centers;
  if (n_centers == 0 || n_centers >= n) {
    centers.resize(n);
    std::iota(centers.begin(), centers.end(), 0);
  } else {
    for (std::size_t c = 0; c < n_centers; ++c) centers.push_back(c * n / n_centers);
  }

  RegularityProfile prof;
  prof.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    double best = 0.0;
    for (std::size_t c : centers) {
      const auto x = mu.atom(c);
      const auto lo = static_cast<std::size_t>(std::lower_bound(first.begin(), first.end(), x[0] - r) - first.begin());
      const auto hi = static_cast<std::size_t>(std::upper_bound(first.begin(), first.end(), x[0] + r) - first.begin());
      double mass = 0.0;
      if (d == 1) {
        mass = prefix[hi] - prefix[lo];
      } else {
        for (std::size_t i = lo; i < hi; ++i) {
          double dist2 = 0.0;
          for (std::size_t a = 0; a < d; ++a) {
            const double diff = mu.atoms[order[i] * d + a] - x[a];
            dist2 += diff * diff;
          }
          if (dist2 <= r * r) mass += mu.weights[order[i]];
        }
      }
      best = std::max(best, mass);
    }
    prof.max_mass.push_back(best);
  }
  prof.fit = loglog_fit(prof.radii, prof.max_mass);
  prof.a_fit = prof.fit.slope;
  prof.A_fit = 1.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double ratio = prof.max_mass[i] / std::pow(radii[i], prof.a_fit);
    prof.max_ball_ratios.push_back(ratio);
    prof.A_fit = std::max(prof.A_fit, ratio);
  }
  return prof;
}

std::vector<double> sample_directions(int dimension, std::size_t count) {
  if (count == 0) throw std::invalid_argument("sample_directions: need at least one direction");
  std::vector<double> out;
  if (dimension == 1) return {1.0};
  if (dimension == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      out.push_back(std::cos(t));
      out.push_back(std::sin(t));
    }
    return out;
  }
  if (dimension == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * static_cast<double>(i);
      out.push_back(r * std::cos(t));
      out.push_back(r * std::sin(t));
      out.push_back(z);
    }
    return out;
  }
  throw std::invalid_argument("sample_directions: supported dimensions are 1, 2 and 3");
}

DecayProfile fourier_decay_profile(const DiscreteMeasure& mu, std::span<const double> R_list,
                                   std::size_t n_directions) {
  validate_measure(mu);
  if (R_list.size() < 3) throw std::invalid_argument("fourier_decay_profile: need at least 3 radii");
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    if (!(R_list[i] >= 1.0)) throw std::invalid_argument("fourier_decay_profile: radii must be >= 1");
    if (i > 0 && !(R_list[i] > R_list[i - 1])) {
      throw std::invalid_argument("fourier_decay_profile: radii must be increasing");
    }
    if (R_list[i] > mu.aliasing_frequency) {
      throw std::invalid_argument("fourier_decay_profile: radius " + format_double(R_list[i]) +
                                  " exceeds the aliasing frequency " +
                                  format_double(mu.aliasing_frequency) + " of measure '" + mu.label + "'");
    }
  }
  const auto dirs = sample_directions(mu.dimension, n_directions);
  DecayProfile prof;
  prof.radii.assign(R_list.begin(), R_list.end());
  for (double R : R_list) {
    std::vector<double> xi(dirs);
    for (double& v : xi) v *= R;
    double best = 0.0;
    for (const auto& value : fourier_transform_at(mu, xi)) best = std::max(best, std::abs(value));
    prof.annulus_sups.push_back(std::min(best, 1.0));
  }
  // Exact zeros (rare) would break the log fit; they carry no decay information.
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    if (prof.annulus_sups[i] > 0.0) {
      fx.push_back(prof.radii[i]);
      fy.push_back(prof.annulus_sups[i]);
    }
  }
  prof.fit = loglog_fit(fx, fy);
  prof.b_fit = std::max(0.0, -prof.fit.slope);
  prof.B_fit = 1.0;
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    prof.B_fit = std::max(prof.B_fit, prof.annulus_sups[i] * std::pow(prof.radii[i], prof.b_fit));
  }
  return prof;
}

DyadicPiece dyadic_piece(const DiscreteMeasure& mu, int j, const GridSpec& grid) {
  validate_measure(mu);
  validate_grid(grid);
  if (j < 0) throw std::invalid_argument("dyadic_piece: j must be nonnegative");
  if (grid.dimension != mu.dimension) throw std::invalid_argument("dyadic_piece: dimension mismatch");
  const double reach = std::ldexp(1.0, j);
  if (grid.nyquist() < reach) {
    const auto need = static_cast<std::size_t>(std::ceil(4.0 * grid.half_width * reach));
    throw std::invalid_argument("dyadic_piece: j = " + std::to_string(j) + " needs Nyquist >= " +
                                format_double(reach) + " (points >= " + std::to_string(need) +
                                " at half-width " + format_double(grid.half_width) + ")");
  }
  if (reach > mu.aliasing_frequency) {
    throw std::invalid_argument("dyadic_piece: frequency 2^j = " + format_double(reach) +
                                " exceeds the aliasing frequency of measure '" + mu.label + "'");
  }
  DyadicPiece piece;
  piece.j = j;
  piece.mu_hat_j = frequency_field(grid);
  auto& spec = piece.mu_hat_j;
  spec.values = fourier_transform_on_lattice(mu, lattice_of(spec));
  const auto d = static_cast<std::size_t>(grid.dimension);
  std::vector<double> xi(d);
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    spec.point(flat, xi);
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    spec.values[flat] *= dyadic_bump(j, std::sqrt(r2));
    piece.sup_mu_hat_j = std::max(piece.sup_mu_hat_j, std::abs(spec.values[flat]));
  }
  piece.mu_j = synthesize_on_grid(spec, grid);
  for (const auto& v : piece.mu_j.values) piece.sup_mu_j = std::max(piece.sup_mu_j, std::abs(v));
  return piece;
}

void write_measure(const DiscreteMeasure& mu, std::ostream& out) {
  validate_measure(mu);
  out << mu.dimension << ' ' << mu.size() << ' ' << (mu.label.empty() ? "unnamed" : mu.label) << '\n';
  out << std::setprecision(17);
  const auto d = static_cast<std::size_t>(mu.dimension);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    for (std::size_t a = 0; a < d; ++a) out << mu.atoms[k * d + a] << ' ';
    out << mu.weights[k] << '\n';
  }
}

DiscreteMeasure read_measure(std::istream& in) {
  DiscreteMeasure mu;
  std::size_t n = 0;
  if (!(in >> mu.dimension >> n)) throw std::runtime_error("read_measure: malformed header");
  std::getline(in, mu.label);
  const auto first = mu.label.find_first_not_of(" \t");
  mu.label = first == std::string::npos ? std::string{} : mu.label.substr(first);
  if (mu.dimension < 1) throw std::runtime_error("read_measure: dimension must be positive");
  const auto d = static_cast<std::size_t>(mu.dimension);
  mu.atoms.resize(n * d);
  mu.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < d; ++a) {
      if (!(in >> mu.atoms[k * d + a])) throw std::runtime_error("read_measure: truncated atom row");
    }
    if (!(in >> mu.weights[k])) throw std::runtime_error("read_measure: truncated atom row");
  }
  mu.aliasing_frequency = std::numeric_limits<double>::infinity();
  validate_measure(mu);
  return mu;
}

void save_measure(const DiscreteMeasure& mu, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_measure(mu, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

DiscreteMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_measure(in);
}

}  // namespace tomaslab
