#include "tomaslab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include "tomaslab/exponents.hpp"
#include "tomaslab/experiments.hpp"
#include "tomaslab/knapp.hpp"
#include "tomaslab/measure_lab.hpp"
#include "tomaslab/oscillatory.hpp"
#include "tomaslab/phase.hpp"
#include "tomaslab/restriction.hpp"

namespace tomaslab {

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

CriterionResult start(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

std::vector<double> powers(double base, int lo, int hi) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(std::pow(base, k));
  return v;
}

Rational random_rational(std::mt19937_64& rng, std::int64_t num_lo, std::int64_t num_hi, std::int64_t den) {
  std::uniform_int_distribution<std::int64_t> n(num_lo, num_hi);
  return Rational(n(rng), den);
}

CriterionResult exponent_suite(std::uint64_t seed) {
  auto r = start(1, "exponent identity suite");
  r.detail.columns = {"d", "a", "b", "p_circ", "identities", "all_hold"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 6), den(1, 12);
  std::vector<std::tuple<int, Rational, Rational>> triples{{3, 2, 1}, {2, 1, Rational(1, 2)}};
  while (triples.size() < 102) {
    const int d = dim(rng);
    const int da = den(rng);
    if (d * da < 2) continue;
    const Rational a = random_rational(rng, 1, std::int64_t{d} * da - 1, da);
    const int db = den(rng);
    const Rational half = a / 2 * db;
    const auto top = static_cast<std::int64_t>(boost::multiprecision::numerator(half) /
                                               boost::multiprecision::denominator(half));
    if (top < 1) continue;
    triples.emplace_back(d, a, random_rational(rng, 1, top, db));
  }
  int failures = 0;
  for (const auto& [d, a, b] : triples) {
    const auto profile = exponent_profile(d, a, b);
    const auto checks = verify_identities(profile);
    const bool all = std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
    failures += all ? 0 : 1;
    r.detail.add_row({std::int64_t{d}, to_string(a), to_string(b), to_string(profile.p_circ),
                      static_cast<std::int64_t>(checks.size()), std::int64_t{all}});
  }
  r.passed = failures == 0;
  r.measured = std::to_string(triples.size()) + " profiles, " + std::to_string(failures) + " with a failing identity";
  return r;
}

CriterionResult exponent_cross_checks(std::uint64_t) {
  auto r = start(2, "exponent cross-checks");
  r.detail.columns = {"quantity", "computed", "expected", "equal"};
  std::vector<std::tuple<std::string, Rational, Rational>> rows;
  const auto p = exponent_profile(3, 2, 1);
  rows.emplace_back("p_circ(3,2,1)", p.p_circ, Rational(4, 3));
  rows.emplace_back("theta(3,2,1)", p.theta, Rational(1, 2));
  rows.emplace_back("gamma(3,2,1)", p.gamma, Rational(1, 3));
  rows.emplace_back("rho(3,2,1)", p.rho, Rational(6, 5));
  rows.emplace_back("sigma(3,2,1)", p.sigma, Rational(3));
  const auto osc2 = oscillatory_exponents(2);
  rows.emplace_back("q_circ(kappa=2)", osc2.q_circ.value_or(Rational(-1)), Rational(4));
  rows.emplace_back("(2d+2)/(d-1) at d=3", osc2.q_circ.value_or(Rational(-1)), Rational(2 * 3 + 2, 3 - 1));
  rows.emplace_back("q_one(kappa=1)", oscillatory_exponents(1).q_one, Rational(3));
  int mismatches = 0;
  for (const auto& [name, got, want] : rows) {
    mismatches += got == want ? 0 : 1;
    r.detail.add_row({name, to_string(got), to_string(want), std::int64_t{got == want}});
  }
  r.passed = mismatches == 0;
  r.measured = "(p_circ, theta, gamma, rho, sigma) = (" + to_string(p.p_circ) + ", " + to_string(p.theta) + ", " +
               to_string(p.gamma) + ", " + to_string(p.rho) + ", " + to_string(p.sigma) + "), q_circ(2) = " +
               to_string(osc2.q_circ.value_or(0)) + ", q_one(1) = " + to_string(oscillatory_exponents(1).q_one);
  return r;
}

void profile_rows(ReportTable& t, const std::string& kind, std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) t.add_row({kind, x[i], y[i]});
}

CriterionResult circle_dimensions(std::uint64_t) {
  auto r = start(3, "circle measure dimensions");
  const auto circle = make_sphere_measure(2, 8192);
  const auto decay = fourier_decay_profile(circle, powers(2.0, 2, 8), 16);
  const auto reg = ball_regularity_profile(circle, powers(0.5, 2, 10), 256);
  r.detail.columns = {"profile", "scale", "value"};
  profile_rows(r.detail, "annulus_sup", decay.radii, decay.annulus_sups);
  profile_rows(r.detail, "max_ball_mass", reg.radii, reg.max_mass);
  r.passed = within(decay.b_fit, 0.45, 0.55) && within(reg.a_fit, 0.9, 1.1);
  r.measured = "b_fit = " + num(decay.b_fit) + " in [0.45, 0.55], a_fit = " + num(reg.a_fit) + " in [0.9, 1.1]";
  return r;
}

CriterionResult cantor_dimensions(std::uint64_t) {
  auto r = start(4, "Cantor measure: Frostman vs Fourier dimension");
  const auto cantor = make_cantor_measure(1.0 / 3.0, 12);
  const auto reg = ball_regularity_profile(cantor, powers(1.0 / 3.0, 2, 10));
  const auto decay = fourier_decay_profile(cantor, powers(3.0, 1, 8), 1);
  r.detail.columns = {"profile", "scale", "value"};
  profile_rows(r.detail, "max_ball_mass", reg.radii, reg.max_mass);
  profile_rows(r.detail, "annulus_sup", decay.radii, decay.annulus_sups);
  r.passed = within(reg.a_fit, 0.58, 0.68) && decay.b_fit < 0.05;
  r.measured = "a_fit = " + num(reg.a_fit) + " in [0.58, 0.68], b_fit = " + num(decay.b_fit) + " < 0.05";
  return r;
}

CriterionResult dyadic_bounds(std::uint64_t) {
  auto r = start(5, "dyadic bounds for the circle");
  const auto circle = make_sphere_measure(2, 8192);
  const GridSpec grid = make_grid(2, 2.0, 2048);
  r.detail.columns = {"j", "sup_mu_hat_j_times_2^{j/2}", "sup_mu_j_times_2^{-j}"};
  std::vector<double> hat, space;
  for (int j = 1; j <= 8; ++j) {
    const auto piece = dyadic_piece(circle, j, grid);
    hat.push_back(piece.sup_mu_hat_j * std::pow(2.0, 0.5 * j));
    space.push_back(piece.sup_mu_j * std::ldexp(1.0, -j));
    r.detail.add_row({std::int64_t{j}, hat.back(), space.back()});
  }
  r.passed = spread(hat) <= 10.0 && spread(space) <= 10.0;
  r.measured = "spread of sup|mu^_j| 2^{j/2} = " + num(spread(hat)) + ", of sup|mu_j| 2^{-j} = " +
               num(spread(space)) + " (limit 10)";
  return r;
}

CriterionResult tomas_identity(std::uint64_t seed) {
  auto r = start(6, "Tomas T*T identity and adjointness");
  const auto circle = make_sphere_measure(2, 1024);
  const GridSpec grid = make_grid(2, 8.0, 64);
  r.detail.columns = {"trial", "restrict_sq", "pairing_rel_error", "adjoint_rel_error"};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst_pair = 0.0, worst_adj = 0.0;
  for (int t = 0; t < 20; ++t) {
    const SampledField f = random_packet_field(grid, seed + static_cast<std::uint64_t>(t));
    const double rsq = restrict_sq_integral(f, circle);
    const double pair_err = std::abs(tomas_pairing(f, circle) - rsq) / rsq;
    std::vector<Complex> g(circle.size());
    for (auto& v : g) {
      const double re = normal(rng);
      const double im = normal(rng);
      v = {re, im};
    }
    const Complex lhs = inner_product(f, extend(g, circle, grid));
    const auto rf = restrict_to_atoms(f, circle);
    Complex rhs{};
    double scale = 0.0;
    for (std::size_t k = 0; k < circle.size(); ++k) {
      rhs += circle.weights[k] * g[k] * std::conj(rf[k]);
      scale += circle.weights[k] * std::abs(g[k]) * std::abs(rf[k]);
    }
    const double adj_err = std::abs(lhs - rhs) / scale;
    worst_pair = std::max(worst_pair, pair_err);
    worst_adj = std::max(worst_adj, adj_err);
    r.detail.add_row({std::int64_t{t}, rsq, pair_err, adj_err});
  }
  r.passed = worst_pair <= 1e-8 && worst_adj <= 1e-8;
  r.measured = "max pairing error " + num(worst_pair, 3) + ", max adjointness error " + num(worst_adj, 3) +
               " (tol 1e-8)";
  return r;
}

CriterionResult lorentz_criterion(std::uint64_t seed) {
  auto r = start(7, "Lorentz suite");
  auto suite = lorentz_suite(1000, 256, seed);
  r.detail = std::move(suite.table);
  r.passed = suite.max_lp_error <= 1e-10 && suite.max_indicator_error <= 1e-12 &&
             suite.homogeneity_mismatches == 0 && suite.rearrangement_mismatches == 0;
  r.measured = "L^{p,p} vs L^p " + num(suite.max_lp_error, 3) + " (tol 1e-10), indicator " +
               num(suite.max_indicator_error, 3) + " (tol 1e-12), homogeneity mismatches " +
               std::to_string(suite.homogeneity_mismatches) + ", rearrangement mismatches " +
               std::to_string(suite.rearrangement_mismatches);
  return r;
}

CriterionResult knapp_criterion(std::uint64_t) {
  auto r = start(8, "Knapp sharpness");
  const auto inf = LorentzExponent::infinity;
  const auto rep = knapp_sharpness_experiment(2.0, {2.0, inf}, {2, 3, 4, 5, 6}, {}, 65536, 2);
  r.detail.columns = {"N", "g_norm", "f_norm_s=2", "f_norm_s=inf"};
  for (std::size_t n = 0; n < rep.N.size(); ++n) {
    r.detail.add_row({std::int64_t{rep.N[n]}, rep.g_norm[n], rep.f_norm[0][n], rep.f_norm[1][n]});
  }
  const double g = rep.g_fit.slope, f2 = rep.f_fit[0].slope, finf = rep.f_fit[1].slope;
  r.passed = within(g, 0.4, 0.6) && within(finf, -0.1, 0.1) && within(f2, 0.35, 0.65) && g - finf >= 0.3;
  r.measured = "slope_g = " + num(g) + ", slope_f(inf) = " + num(finf) + ", slope_f(2) = " + num(f2) +
               ", gap = " + num(g - finf) + " (p = " + num(rep.p, 6) + ")";
  return r;
}

PhaseSpec unit_spec(const std::string& name) {
  PhaseSpec spec = make_phase_spec(catalog_phase(name, 2));
  spec.support_radius = 1.0;
  return spec;
}

void scaling_rows(ReportTable& t, const ScalingReport& rep) {
  t.columns = {"lambda", "ratio", "best_member"};
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) t.add_row({rep.lambdas[i], rep.ratios[i], rep.best_member[i]});
}

CriterionResult oscillatory_criterion(std::uint64_t) {
  auto r = start(9, "oscillatory scaling, parabola");
  const PhaseSpec spec = unit_spec("parabola");
  const auto probes = default_probes(*spec.phase);
  const bool rank = check_rank_mixed_hessian(*spec.phase, probes, 1).verdict;
  const bool curv = check_curvature_rank(*spec.phase, probes, 1).verdict;
  const auto rep = scaling_experiment(spec, 6.0, powers(2.0, 4, 10));
  scaling_rows(r.detail, rep);
  r.passed = rank && curv && within(rep.fit.slope, -0.43, -0.23);
  r.measured = "slope = " + num(rep.fit.slope) + " in [-0.43, -0.23] (target " + num(rep.target_slope) +
               "), rank and curvature checks " + (rank && curv ? "pass" : "fail");
  return r;
}

CriterionResult fold_criterion(std::uint64_t) {
  auto r = start(10, "fold scaling, curved fold");
  const PhaseSpec spec = unit_spec("fold-curved");
  const auto fold = check_fold(*spec.phase, default_fold_probes(*spec.phase), 1);
  const auto rep = scaling_experiment(spec, 3.0, powers(2.0, 4, 9));
  scaling_rows(r.detail, rep);
  const bool checker = fold.verdict && !fold.vacuous;
  r.passed = checker && within(rep.fit.slope, -0.82, -0.52);
  r.measured = "fold checker " + std::string(checker ? "passes" : "fails") + " at " +
               std::to_string(fold.probes.size()) + " singular points, slope = " + num(rep.fit.slope) +
               " in [-0.82, -0.52] (target " + num(rep.target_slope) + ")";
  return r;
}

CriterionResult dyadic_kernel_criterion(std::uint64_t) {
  auto r = start(11, "dyadic kernel sup, parabola");
  const PhaseSpec spec = unit_spec("parabola");
  r.detail.columns = {"j", "sup_S_j", "sup_S_j_times_2^{j/2}"};
  std::vector<double> scaled;
  for (int j = 2; j <= 7; ++j) {
    const double s = dyadic_kernel_sup(spec, 1024.0, j);
    scaled.push_back(s * std::pow(2.0, 0.5 * j));
    r.detail.add_row({std::int64_t{j}, s, scaled.back()});
  }
  r.passed = spread(scaled) <= 10.0;
  r.measured = "spread of sup|S_j| 2^{j/2} over j = 2..7: " + num(spread(scaled)) + " (limit 10)";
  return r;
}

struct Entry {
  std::function<CriterionResult(std::uint64_t)> run;
  double budget_seconds;  ///< 0: none
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all{
      {exponent_suite, 1.0},       {exponent_cross_checks, 0.0}, {circle_dimensions, 10.0},
      {cantor_dimensions, 10.0},   {dyadic_bounds, 60.0},         {tomas_identity, 0.0},
      {lorentz_criterion, 0.0},    {knapp_criterion, 300.0},      {oscillatory_criterion, 600.0},
      {fold_criterion, 600.0},     {dyadic_kernel_criterion, 0.0},
  };
  return all;
}

std::string line_for(const CriterionResult& c) {
  std::ostringstream s;
  s << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << c.measured;
  s.precision(3);
  s << std::fixed << " (" << c.seconds << " s)";
  return s.str();
}

std::string criterion_file(int id) {
  std::ostringstream s;
  s << "criterion_" << (id < 10 ? "0" : "") << id << ".csv";
  return s.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_details(const std::vector<CriterionResult>& criteria, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& c : criteria) emit_csv(c.detail, dir / criterion_file(c.id));
}

}  // namespace

std::vector<CriterionResult> compute_criteria(std::uint64_t seed, std::ostream* progress) {
  std::vector<CriterionResult> out;
  for (const auto& e : entries()) {
    const auto t0 = Clock::now();
    CriterionResult c;
    try {
      c = e.run(seed);
    } catch (const std::exception& ex) {
      c.id = static_cast<int>(out.size()) + 1;
      c.name = "criterion " + std::to_string(c.id);
      c.passed = false;
      c.measured = std::string("error: ") + ex.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (e.budget_seconds > 0.0 && c.seconds > e.budget_seconds) {
      c.passed = false;
      c.measured += "; runtime over the " + num(e.budget_seconds) + " s budget";
    }
    if (progress) *progress << line_for(c) << std::endl;
    out.push_back(std::move(c));
  }
  return out;
}

AcceptanceSummary run_acceptance(const std::filesystem::path& out, std::uint64_t seed, bool rerun, std::ostream& log) {
  AcceptanceSummary summary;
  summary.criteria = compute_criteria(seed, &log);
  write_details(summary.criteria, out);

  auto det = start(12, "determinism");
  if (rerun) {
    const auto t0 = Clock::now();
    const auto again = compute_criteria(seed);
    write_details(again, out / "rerun");
    int differing = 0;
    std::string names;
    for (const auto& c : summary.criteria) {
      const auto f = criterion_file(c.id);
      if (slurp(out / f) != slurp(out / "rerun" / f)) {
        ++differing;
        names += " " + f;
      }
    }
    det.passed = differing == 0;
    det.measured = std::to_string(summary.criteria.size()) + " CSV files rerun with seed " + std::to_string(seed) +
                   ", " + std::to_string(differing) + " differ" + names;
    det.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  } else {
    det.passed = false;
    det.measured = "skipped (rerun disabled)";
  }
  det.detail.columns = {"file", "identical"};
  for (const auto& c : summary.criteria) {
    const auto f = criterion_file(c.id);
    det.detail.add_row({f, std::int64_t{rerun && slurp(out / f) == slurp(out / "rerun" / f)}});
  }
  log << line_for(det) << std::endl;
  emit_csv(det.detail, out / criterion_file(12));
  summary.criteria.push_back(std::move(det));

  ReportTable table;
  table.columns = {"criterion", "name", "passed", "measured"};
  for (const auto& c : summary.criteria) {
    table.add_row({std::int64_t{c.id}, c.name, std::int64_t{c.passed}, c.measured});
  }
  emit_csv(table, out / "acceptance.csv");
  summary.all_passed = std::all_of(summary.criteria.begin(), summary.criteria.end(),
                                   [](const CriterionResult& c) { return c.passed; });
  const auto passed = std::count_if(summary.criteria.begin(), summary.criteria.end(),
                                    [](const CriterionResult& c) { return c.passed; });
  log << passed << "/" << summary.criteria.size() << " criteria passed" << std::endl;
  return summary;
}

}  // namespace tomaslab
