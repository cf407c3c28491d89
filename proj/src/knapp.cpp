#include "tomaslab/knapp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tomaslab/bump.hpp"

namespace tomaslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kNodes = 4097;
// Beyond these arguments the transforms are below 1e-15 (checked in tests);
// trapezoid aliasing sets in only at 2048 and 8192 respectively.
constexpr double kEta0Cutoff = 256.0;
constexpr double kEta1Cutoff = 1024.0;

struct Profile {
  double lo = 0.0;
  double step = 0.0;
  std::array<double, kNodes> weights{};
};

// Trapezoid nodes; both profiles vanish to all orders at the ends, so the
// rule converges spectrally.
const Profile& eta0_profile() {
  static const Profile p = [] {
    Profile out;
    out.lo = -1.0;
    out.step = 2.0 / static_cast<double>(kNodes - 1);
    for (std::size_t i = 0; i < kNodes; ++i) out.weights[i] = knapp_eta0(out.lo + static_cast<double>(i) * out.step) * out.step;
    return out;
  }();
  return p;
}

const Profile& eta1_profile() {
  static const Profile p = [] {
    Profile out;
    out.lo = 0.75;
    out.step = 0.5 / static_cast<double>(kNodes - 1);
    for (std::size_t i = 0; i < kNodes; ++i) out.weights[i] = knapp_eta1(out.lo + static_cast<double>(i) * out.step) * out.step;
    return out;
  }();
  return p;
}

double cosine_transform(const Profile& p, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kNodes; ++i) acc += p.weights[i] * std::cos(kTwoPi * (p.lo + static_cast<double>(i) * p.step) * u);
  return acc;
}

// ||eta(2^m .)||_1 over the line.
double eta0_l1() {
  double s = 0.0;
  for (double w : eta0_profile().weights) s += std::abs(w);
  return s;
}

double eta1_l1() {
  double s = 0.0;
  for (double w : eta1_profile().weights) s += std::abs(w);
  return 2.0 * s;
}

void check_spec(const KnappSpec& spec) {
  if (spec.N < 1) throw std::invalid_argument("knapp: N must be at least 1");
  if (!(spec.q >= 1.0) || !std::isfinite(spec.q)) throw std::invalid_argument("knapp: q must be finite and >= 1");
  if (spec.shift < 0 || spec.shift > 8) throw std::invalid_argument("knapp: shift must lie in 0..8");
}

// Per-axis factors of cap k at the given coordinates.
void cap_factors(const KnappSpec& spec, int k, std::span<const double> x1, std::span<const double> x2,
                 std::vector<double>& a, std::vector<double>& b) {
  const double s1 = std::ldexp(1.0, -k);
  const double s2 = std::ldexp(1.0, spec.shift - 2 * k);
  const double amp = std::pow(2.0, k / spec.q);
  a.resize(x1.size());
  b.resize(x2.size());
  for (std::size_t i = 0; i < x1.size(); ++i) a[i] = amp * s1 * knapp_eta1_check(s1 * x1[i]);
  for (std::size_t i = 0; i < x2.size(); ++i) b[i] = s2 * knapp_eta0_check(s2 * x2[i]);
}

}  // namespace

double knapp_eta0(double t) { return chi0(t); }

double knapp_eta1(double t) { return smooth_step(4.0 * std::abs(std::abs(t) - 1.0), 0.5, 1.0); }

double knapp_eta0_check(double u) {
  if (std::abs(u) > kEta0Cutoff) return 0.0;
  return cosine_transform(eta0_profile(), u);
}

double knapp_eta1_check(double u) {
  if (std::abs(u) > kEta1Cutoff) return 0.0;
  return 2.0 * cosine_transform(eta1_profile(), u);
}

double knapp_g(const KnappSpec& spec, double xi1, double xi2) {
  check_spec(spec);
  double g = 0.0;
  for (int k = 1; k <= spec.N; ++k) {
    g += std::pow(2.0, k / spec.q) * knapp_eta1(std::ldexp(std::abs(xi1), k)) *
         knapp_eta0(std::ldexp(std::abs(xi2 - 1.0), 2 * k - spec.shift));
  }
  return g;
}

double knapp_f_modulus(const KnappSpec& spec, double x1, double x2) {
  check_spec(spec);
  double f = 0.0;
  for (int k = 1; k <= spec.N; ++k) {
    const double s1 = std::ldexp(1.0, -k);
    const double s2 = std::ldexp(1.0, spec.shift - 2 * k);
    f += std::pow(2.0, k / spec.q) * s1 * knapp_eta1_check(s1 * x1) * s2 * knapp_eta0_check(s2 * x2);
  }
  return std::abs(f);
}

double knapp_sup_bound(const KnappSpec& spec) {
  check_spec(spec);
  double bound = 0.0;
  for (int k = 1; k <= spec.N; ++k) {
    bound += std::pow(2.0, k / spec.q) * std::ldexp(eta1_l1(), -k) * std::ldexp(eta0_l1(), spec.shift - 2 * k);
  }
  return bound;
}

KnappFunction knapp_function(const KnappSpec& spec, const DiscreteMeasure& circle, const GridSpec& grid) {
  check_spec(spec);
  validate_measure(circle);
  validate_grid(grid);
  if (circle.dimension != 2 || grid.dimension != 2) throw std::invalid_argument("knapp_function: only d = 2 is supported");
  const double extent = 8.0 * std::max(std::ldexp(1.0, spec.N), std::ldexp(1.0, 2 * spec.N - spec.shift));
  if (grid.nyquist() < 10.0 || grid.half_width < extent) {
    int max_n = 0;
    while (grid.nyquist() >= 10.0 &&
           grid.half_width >= 8.0 * std::max(std::ldexp(1.0, max_n + 1), std::ldexp(1.0, 2 * (max_n + 1) - spec.shift))) {
      ++max_n;
    }
    throw std::invalid_argument("knapp_function: grid does not resolve N = " + std::to_string(spec.N) +
                                " (needs Nyquist >= 10 and half-width >= " + std::to_string(extent) +
                                "); this grid supports N <= " + std::to_string(max_n));
  }
  KnappFunction out;
  for (std::size_t k = 0; k < circle.size(); ++k) {
    const auto xi = circle.atom(k);
    out.g.push_back(knapp_g(spec, xi[0], xi[1]));
  }
  out.f = grid.zero_field();
  const std::size_t n = grid.points;
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = out.f.origin[0] + static_cast<double>(i) * out.f.spacing[0];
  std::vector<double> a, b;
  for (int k = 1; k <= spec.N; ++k) {
    cap_factors(spec, k, axis, axis, a, b);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < n; ++m) out.f.values[i * n + m] += a[i] * b[m];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < n; ++m) out.f.values[i * n + m] *= std::polar(1.0, kTwoPi * axis[m]);
  }
  return out;
}

double knapp_g_norm(const KnappSpec& spec, const DiscreteMeasure& circle) {
  check_spec(spec);
  validate_measure(circle);
  if (circle.dimension != 2) throw std::invalid_argument("knapp_g_norm: needs a measure on the plane");
  double total = 0.0;
  for (std::size_t k = 0; k < circle.size(); ++k) {
    const auto xi = circle.atom(k);
    total += circle.weights[k] * std::pow(std::abs(knapp_g(spec, xi[0], xi[1])), spec.q);
  }
  return std::pow(total, 1.0 / spec.q);
}

int knapp_max_N(const PatchLayout& layout) {
  const auto side = static_cast<std::size_t>(2 * layout.width * layout.resolution);
  const auto per_patch = side * side;
  const auto patches = layout.max_cells / per_patch;
  return patches >= 3 ? static_cast<int>(patches) - 2 : 0;
}

PatchSamples knapp_patch_samples(const KnappSpec& spec, const PatchLayout& layout) {
  check_spec(spec);
  if (layout.width < 4 || layout.resolution < 4) throw std::invalid_argument("knapp: patch width and resolution must be >= 4");
  if (spec.N > knapp_max_N(layout)) {
    throw std::invalid_argument("knapp: N = " + std::to_string(spec.N) + " exceeds the cell budget; this layout supports N <= " +
                                std::to_string(knapp_max_N(layout)));
  }
  const auto half = static_cast<std::size_t>(layout.width * layout.resolution);
  const double W = layout.width;
  PatchSamples out;
  std::vector<double> x1(2 * half), x2(2 * half), a, b, f(4 * half * half);
  for (int l = 1; l <= spec.N + 2; ++l) {
    const double h1 = std::ldexp(1.0, l) / layout.resolution;
    const double h2 = std::ldexp(1.0, 2 * l - spec.shift) / layout.resolution;
    for (std::size_t i = 0; i < 2 * half; ++i) {
      const double c = static_cast<double>(i) - static_cast<double>(half) + 0.5;
      x1[i] = c * h1;
      x2[i] = c * h2;
    }
    std::fill(f.begin(), f.end(), 0.0);
    for (int k = 1; k <= spec.N; ++k) {
      cap_factors(spec, k, x1, x2, a, b);
      for (std::size_t i = 0; i < 2 * half; ++i) {
        for (std::size_t m = 0; m < 2 * half; ++m) f[i * 2 * half + m] += a[i] * b[m];
      }
    }
    const double inner1 = W * std::ldexp(1.0, l - 1);
    const double inner2 = W * std::ldexp(1.0, 2 * l - 2 - spec.shift);
    for (std::size_t i = 0; i < 2 * half; ++i) {
      for (std::size_t m = 0; m < 2 * half; ++m) {
        if (l > 1 && std::abs(x1[i]) < inner1 && std::abs(x2[m]) < inner2) continue;
        out.magnitudes.push_back(std::abs(f[i * 2 * half + m]));
        out.volumes.push_back(h1 * h2);
      }
    }
  }
  return out;
}

double distribution_measure(const PatchSamples& samples, double level) {
  double total = 0.0;
  for (std::size_t i = 0; i < samples.magnitudes.size(); ++i) {
    if (samples.magnitudes[i] > level) total += samples.volumes[i];
  }
  return total;
}

double knapp_p_for_q(double q) {
  if (!(q > 1.0 / 3.0)) throw std::invalid_argument("knapp: q must exceed 1/3");
  const double p_dual = 3.0 * q;
  return p_dual / (p_dual - 1.0);
}

KnappReport knapp_sharpness_experiment(double q, const std::vector<double>& s_list, const std::vector<int>& N_list,
                                       const PatchLayout& layout, std::size_t circle_atoms, int shift) {
  if (N_list.size() < 3) throw std::invalid_argument("knapp: need at least 3 values of N");
  if (s_list.empty()) throw std::invalid_argument("knapp: need at least one s");
  KnappReport report;
  report.q = q;
  report.p = knapp_p_for_q(q);
  report.s_list = s_list;
  report.N = N_list;
  report.f_norm.assign(s_list.size(), {});
  const DiscreteMeasure circle = make_sphere_measure(2, circle_atoms);
  for (int N : N_list) {
    const KnappSpec spec{N, q, shift};
    report.g_norm.push_back(knapp_g_norm(spec, circle));
    const PatchSamples samples = knapp_patch_samples(spec, layout);
    const auto steps = decreasing_rearrangement(samples.magnitudes, samples.volumes);
    for (std::size_t i = 0; i < s_list.size(); ++i) {
      report.f_norm[i].push_back(lorentz_norm(steps, {report.p, s_list[i]}));
    }
  }
  std::vector<double> xs(N_list.begin(), N_list.end());
  report.g_fit = loglog_fit(xs, report.g_norm);
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    report.f_fit.push_back(loglog_fit(xs, report.f_norm[i]));
    report.gap.push_back(report.g_fit.slope - report.f_fit.back().slope);
  }
  return report;
}

}  // namespace tomaslab
