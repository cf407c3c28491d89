#include "tomaslab/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tomaslab/bump.hpp"
#include "tomaslab/lattice_transform.hpp"

namespace tomaslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sum_x f(x) exp(sign 2 pi i <x, xi>) dx, contracting one axis at a time.
Complex riemann_transform(const SampledField& f, std::span<const double> xi, double sign,
                          std::vector<Complex>& work, std::vector<Complex>& table) {
  const std::size_t d = f.dimension();
  work.assign(f.values.begin(), f.values.end());
  std::size_t outer = work.size();
  for (std::size_t a = d; a-- > 0;) {
    const std::size_t n = f.shape[a];
    table.resize(n);
    const Complex step = std::polar(1.0, sign * kTwoPi * f.spacing[a] * xi[a]);
    // Tabulate by direct evaluation in blocks to avoid drift from repeated multiplication.
    for (std::size_t m = 0; m < n; ++m) {
      table[m] = (m % 64 == 0) ? std::polar(1.0, sign * kTwoPi * (f.origin[a] + static_cast<double>(m) * f.spacing[a]) * xi[a])
                               : table[m - 1] * step;
    }
    outer /= n;
    for (std::size_t i = 0; i < outer; ++i) {
      Complex acc{};
      const Complex* row = work.data() + i * n;
      for (std::size_t m = 0; m < n; ++m) acc += row[m] * table[m];
      work[i] = acc;
    }
  }
  return work[0] * f.cell_volume();
}

void check_measure_field(const SampledField& f, const DiscreteMeasure& mu, const char* who) {
  validate_measure(mu);
  if (f.dimension() != static_cast<std::size_t>(mu.dimension)) {
    throw std::invalid_argument(std::string(who) + ": field and measure dimensions differ");
  }
}

std::vector<Complex> transform_at_atoms(const SampledField& f, const DiscreteMeasure& mu, double sign) {
  std::vector<Complex> out(mu.size());
  std::vector<Complex> work, table;
  for (std::size_t k = 0; k < mu.size(); ++k) out[k] = riemann_transform(f, mu.atom(k), sign, work, table);
  return out;
}

}  // namespace

SampledField extend(std::span<const Complex> g, const DiscreteMeasure& mu, const GridSpec& grid) {
  validate_measure(mu);
  validate_grid(grid);
  if (g.size() != mu.size()) throw std::invalid_argument("extend: g must have one value per atom");
  if (grid.dimension != mu.dimension) throw std::invalid_argument("extend: grid and measure dimensions differ");
  std::vector<Complex> coeffs(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) coeffs[k] = g[k] * mu.weights[k];
  SampledField out = grid.zero_field();
  out.values = lattice_transform(mu.atoms, mu.dimension, coeffs, lattice_of(out), +1);
  return out;
}

std::vector<Complex> restrict_to_atoms(const SampledField& f, const DiscreteMeasure& mu) {
  check_measure_field(f, mu, "restrict_to_atoms");
  return transform_at_atoms(f, mu, -1.0);
}

double restrict_sq_integral(const SampledField& f, const DiscreteMeasure& mu) {
  const auto hat = restrict_to_atoms(f, mu);
  double total = 0.0;
  for (std::size_t k = 0; k < hat.size(); ++k) total += mu.weights[k] * std::norm(hat[k]);
  return total;
}

DiscreteMeasure reflect(const DiscreteMeasure& mu) {
  DiscreteMeasure out = mu;
  for (double& x : out.atoms) x = -x;
  return out;
}

SampledField convolve_mu_hat(const SampledField& f, const DiscreteMeasure& mu) {
  check_measure_field(f, mu, "convolve_mu_hat");
  validate_field(f);
  const std::size_t d = f.dimension();
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    if (std::abs(f.values[flat]) <= 1e-14 * peak) continue;
    f.point(flat, x);
    for (std::size_t a = 0; a < d; ++a) {
      const double lo = f.origin[a];
      const double hi = lo + static_cast<double>(f.shape[a]) * f.spacing[a];
      const double mid = 0.5 * (lo + hi);
      if (std::abs(x[a] - mid) > 0.25 * (hi - lo)) {
        throw std::invalid_argument("convolve_mu_hat: f must vanish outside the inner half of its box");
      }
    }
  }
  const auto hat = transform_at_atoms(f, mu, +1.0);  // f^(-x_k)
  std::vector<Complex> coeffs(hat.size());
  for (std::size_t k = 0; k < hat.size(); ++k) coeffs[k] = mu.weights[k] * hat[k];
  SampledField out = zeros_like(f);
  out.values = lattice_transform(mu.atoms, mu.dimension, coeffs, lattice_of(f), -1);
  return out;
}

Complex tomas_pairing(const SampledField& f, const DiscreteMeasure& mu) {
  return inner_product(f, convolve_mu_hat(f, reflect(mu)));
}

FieldOperator fourier_multiplier(const GridSpec& grid, SampledField symbol) {
  validate_grid(grid);
  const SampledField expected = frequency_field(grid);
  if (symbol.shape != expected.shape) throw std::invalid_argument("fourier_multiplier: symbol shape mismatch");
  return [grid, symbol = std::move(symbol)](const SampledField& f) {
    SampledField spec = analyze_on_grid(f, grid);
    for (std::size_t i = 0; i < spec.size(); ++i) spec.values[i] *= symbol.values[i];
    return synthesize_on_grid(spec, grid);
  };
}

OperatorNormEstimate l2_operator_norm(const FieldOperator& apply, const SampledField& domain,
                                      const PowerIterationOptions& options, const FieldOperator& adjoint) {
  if (options.max_iter < 1) throw std::invalid_argument("l2_operator_norm: max_iter must be positive");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  SampledField v = zeros_like(domain);
  for (auto& value : v.values) value = {normal(rng), normal(rng)};
  auto normalize = [](SampledField& f) {
    const double n = l2_norm(f);
    if (n == 0.0) return false;
    for (auto& value : f.values) value /= n;
    return true;
  };
  normalize(v);

  OperatorNormEstimate est;
  est.method = "power-iteration";
  est.converged = false;
  double previous = -1.0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const SampledField tv = apply(v);
    const double n = l2_norm(tv);
    const double lambda = n * n;  // <v, T*T v> for unit v
    est.rayleigh.push_back(lambda);
    est.iterations = it;
    if (lambda == 0.0) {
      est.value = 0.0;
      est.residual = 0.0;
      est.converged = true;
      return est;
    }
    est.value = n;
    if (previous >= 0.0) {
      est.residual = std::abs(lambda - previous) / lambda;
      if (est.residual <= options.tol) {
        est.converged = true;
        break;
      }
    }
    previous = lambda;
    v = adjoint ? adjoint(tv) : apply(tv);
    if (!normalize(v)) break;
  }
  if (!est.converged) est.notices.push_back("power iteration stopped at max_iter before reaching tol");
  return est;
}

OperatorNormEstimate l2_operator_norm(const FieldOperator& apply, const GridSpec& grid,
                                      const PowerIterationOptions& options, const FieldOperator& adjoint) {
  return l2_operator_norm(apply, grid.zero_field(), options, adjoint);
}

OperatorNormEstimate lorentz_operator_lower_bound(const FieldOperator& apply, const LorentzExponent& in_exp,
                                                  const LorentzExponent& out_exp,
                                                  std::span<const SampledField> family) {
  if (family.empty()) throw std::invalid_argument("lorentz_operator_lower_bound: empty family");
  OperatorNormEstimate est;
  est.method = "test-family-max";
  est.lower_bound = true;
  est.iterations = static_cast<int>(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double denom = lorentz_norm(family[i], in_exp);
    if (denom == 0.0) {
      est.notices.push_back("family member " + std::to_string(i) + " has zero norm; skipped");
      continue;
    }
    est.value = std::max(est.value, lorentz_norm(apply(family[i]), out_exp) / denom);
  }
  return est;
}

double stein_tomas_ratio(const SampledField& f, const DiscreteMeasure& mu, const ExponentProfile& profile) {
  const double denom = lorentz_norm(f, {to_double(profile.p_circ), 2.0});
  if (denom == 0.0) throw std::invalid_argument("stein_tomas_ratio: f is zero");
  return std::sqrt(restrict_sq_integral(f, mu)) / denom;
}

SampledField gaussian_dilate(const GridSpec& grid, double t) {
  SampledField f = grid.zero_field();
  const std::size_t d = f.dimension();
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, x);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    f.values[flat] = std::exp(-4.0 * std::numbers::pi * t * t * r2);
  }
  return f;
}

SampledField knapp_cap(double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("knapp_cap: delta must lie in (0, 1/2]");
  // Axis 1: spacing 0.4 keeps the Riemann-sum period 2.5 above the circle's
  // width 2. Axis 2: spacing (n + 1/2)/2 puts the periodized images of the
  // cap half a period away from the south pole at xi_2 = -2.
  const double h1 = 0.4;
  const double half1 = 4.0 / delta;
  const auto n1 = 2 * static_cast<std::size_t>(std::ceil(half1 / h1));
  const double n = std::round(1.0 / (8.0 * delta * delta));
  const double h2 = (n + 0.5) / 2.0;
  const double half2 = 4.0 / (delta * delta);
  const auto n2 = 2 * static_cast<std::size_t>(std::ceil(half2 / h2));
  SampledField f = make_field({-static_cast<double>(n1 / 2) * h1, -static_cast<double>(n2 / 2) * h2}, {h1, h2}, {n1, n2});
  for (std::size_t i = 0; i < n1; ++i) {
    const double u = delta * (f.origin[0] + static_cast<double>(i) * h1);
    for (std::size_t k = 0; k < n2; ++k) {
      const double v = delta * delta * (f.origin[1] + static_cast<double>(k) * h2);
      f.values[i * n2 + k] = std::exp(-std::numbers::pi * (u * u + v * v));
    }
  }
  return f;
}

SampledField random_windowed_field(const GridSpec& grid, std::uint64_t seed) {
  SampledField f = grid.zero_field();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t d = f.dimension();
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, x);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double re = normal(rng);
    const double im = normal(rng);
    f.values[flat] = Complex{re, im} * chi0(std::sqrt(r2) / (0.5 * grid.half_width));
  }
  return f;
}

SampledField random_packet_field(const GridSpec& grid, std::uint64_t seed) {
  SampledField f = grid.zero_field();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t d = f.dimension();
  const double L = grid.half_width;
  struct Packet {
    Complex c;
    std::vector<double> centre, freq;
    double width;
  };
  std::vector<Packet> packets(3);
  for (auto& pk : packets) {
    const double re = normal(rng);
    const double im = normal(rng);
    pk.c = {re, im};
    for (std::size_t a = 0; a < d; ++a) pk.centre.push_back(unit(rng) * L / (8.0 * std::sqrt(double(d))));
    for (std::size_t a = 0; a < d; ++a) pk.freq.push_back(unit(rng) * 0.25 * grid.nyquist());
    pk.width = L / 16.0 * (0.5 + 0.5 * std::abs(unit(rng)));
  }
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, x);
    Complex v{};
    for (const auto& pk : packets) {
      double r2 = 0.0, phase = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        r2 += (x[a] - pk.centre[a]) * (x[a] - pk.centre[a]);
        phase += pk.freq[a] * x[a];
      }
      v += pk.c * std::exp(-std::numbers::pi * r2 / (pk.width * pk.width)) *
           std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    f.values[flat] = v;
  }
  return f;
}

}  // namespace tomaslab
