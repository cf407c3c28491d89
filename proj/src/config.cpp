#include "tomaslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace tomaslab {

namespace {

using T = ParamType;

std::vector<ParamSpec> measure_source() {
  return {
      {"kind", T::Text, "circle", "circle | sphere | cantor | random-cantor | file"},
      {"dimension", T::Integer, "2", "sphere dimension d (2 is the circle)"},
      {"atoms", T::Integer, "8192", "number of atoms on the sphere"},
      {"ratio", T::Rational, "1/3", "Cantor contraction ratio"},
      {"levels", T::Integer, "12", "Cantor construction depth"},
      {"file", T::Text, "", "atom file for kind = file"},
  };
}

std::vector<ParamSpec> concat(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Schema> build() {
  std::vector<Schema> s;
  s.push_back({"exponents",
               "exponent profile and identity checks for (d, a, b)",
               {{"d", T::Integer, "3", "ambient dimension"},
                {"a", T::Rational, "2", "Frostman exponent"},
                {"b", T::Rational, "1", "Fourier decay exponent"},
                {"kappa", T::Integer, "-1", "also report oscillatory exponents for this kappa (negative skips)"}}});
  s.push_back({"measure", "ball regularity profile mu(B(x,r)) and the Frostman fit",
               concat(measure_source(),
                      {{"radii", T::RealList, "auto", "ball radii", true},
                       {"centers", T::Integer, "256", "ball centres (0 uses every atom)"},
                       {"expect-a", T::Real, "auto", "expected Frostman exponent", true},
                       {"tol-a", T::Real, "0.1", "verdict tolerance on a_fit"}})});
  s.push_back({"decay", "annulus sups of |mu^| and the decay fit",
               concat(measure_source(),
                      {{"R-list", T::RealList, "auto", "annulus radii", true},
                       {"directions", T::Integer, "16", "directions per annulus"},
                       {"expect-b", T::Real, "auto", "expected decay exponent", true},
                       {"tol-b", T::Real, "0.05", "verdict tolerance on b_fit"}})});
  s.push_back({"dyadic", "sup norms of the Littlewood-Paley pieces mu_j and mu_j^",
               concat(measure_source(),
                      {{"j-list", T::IntList, "1,2,3,4,5,6,7,8", "dyadic scales"},
                       {"half-width", T::Real, "2", "spatial grid half-width L"},
                       {"points", T::Integer, "2048", "grid points per axis"},
                       {"expect-a", T::Real, "auto", "Frostman exponent used for scaling", true},
                       {"expect-b", T::Real, "auto", "decay exponent used for scaling", true},
                       {"max-spread", T::Real, "10", "verdict: max/min of each scaled sequence"}})});
  s.push_back({"lorentz", "Lorentz norm identity suite on random fields",
               {{"fields", T::Integer, "1000", "random fields"},
                {"max-cells", T::Integer, "256", "largest field size"},
                {"tol-lp", T::Real, "1e-10", "relative tolerance for L^{p,p} = L^p"},
                {"tol-indicator", T::Real, "1e-12", "relative tolerance for indicator closed forms"}}});
  s.push_back({"knapp", "Knapp sharpness: norms of g and f against N",
               {{"q", T::Real, "2", "target exponent q (p' = 3q)"},
                {"N-list", T::IntList, "2,3,4,5,6", "numbers of dyadic blocks"},
                {"s-list", T::RealList, "2,inf", "Lorentz second indices"},
                {"patch-width", T::Integer, "8", "patch width in cap units"},
                {"patch-resolution", T::Integer, "8", "samples per cap unit"},
                {"circle-atoms", T::Integer, "65536", "circle atoms for ||g||"},
                {"cap-shift", T::Integer, "2", "xi_2 cutoff scale 2^{2k - shift}, 0..8"},
                {"tol-g", T::Real, "0.1", "verdict: |slope_g - 1/q|"},
                {"tol-f", T::Real, "0.15", "verdict: |slope_f(s) - 1/s| for finite s"},
                {"tol-f-inf", T::Real, "0.1", "verdict: |slope_f(inf)|"},
                {"min-gap", T::Real, "0.3", "verdict: slope_g - slope_f(inf)"}}});
  s.push_back({"restrict", "T*T identity, extension/restriction adjointness and Stein-Tomas ratios",
               concat(measure_source(),
                      {{"half-width", T::Real, "8", "spatial grid half-width L"},
                       {"points", T::Integer, "64", "grid points per axis"},
                       {"trials", T::Integer, "20", "random smooth test functions"},
                       {"caps", T::RealList, "0.5,0.25,0.125", "Knapp cap widths delta (circle only)"},
                       {"tol", T::Real, "1e-8", "relative tolerance for the identities"}})});
  const std::vector<ParamSpec> phase_params{
      {"d", T::Integer, "2", "dimension of x"},
      {"phase-file", T::Text, "", "polynomial phase coefficient file (overrides phase)"},
      {"kappa", T::Integer, "1", "curvature rank"},
      {"q", T::Real, "auto", "Lorentz exponent (default from kappa)", true},
      {"epsilon", T::Real, "0.3", "normal-form scale epsilon"},
      {"radius", T::Real, "1", "amplitude support radius r"},
      {"knapp-widths", T::RealList, "0.5,1,2", "slab widths in units of lambda^{-1/2}"},
      {"include-constant", T::Flag, "false", "add the constant test function"},
      {"include-random", T::Flag, "false", "add a random trigonometric test function"},
      {"work-budget", T::Real, "4e9", "max x cells times y cells per application"},
      {"rank-tol", T::Real, "1e-6", "numeric rank tolerance"},
  };
  s.push_back({"oscillatory", "rank/curvature checks and the lambda scaling of ||T_lambda||",
               concat({{"phase", T::Text, "parabola", "catalog phase"},
                       {"lambda-list", T::RealList, "16,32,64,128,256,512,1024", "frequencies"},
                       {"tol-slope", T::Real, "0.1", "verdict: |slope + d/q|"}},
                      phase_params)});
  s.push_back({"fold", "fold checks and the lambda scaling for fold singularities",
               concat({{"phase", T::Text, "fold-curved", "catalog phase"},
                       {"lambda-list", T::RealList, "16,32,64,128,256,512", "frequencies"},
                       {"tol-slope", T::Real, "0.15", "verdict: |slope + d/q|"},
                       {"derivative-tol", T::Real, "1e-4", "fold directional derivative threshold"},
                       {"curvature-tol", T::Real, "1e-3", "principal curvature threshold"}},
                      phase_params)});
  s.push_back({"accept", "the acceptance suite", {{"rerun", T::Flag, "true", "rerun to check determinism"}}});
  return s;
}

[[noreturn]] void bad(const ParamSpec& spec, const std::string& text, const std::string& why) {
  throw ConfigError("--" + spec.key + " " + text + ": " + why);
}

double parse_real(const ParamSpec& spec, const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text.find('/') != std::string::npos) {
    try {
      return to_double(parse_rational(text));
    } catch (const std::exception& e) {
      bad(spec, text, e.what());
    }
  }
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) bad(spec, text, "not a number");
  if (std::isnan(v)) bad(spec, text, "not a number");
  return v;
}

std::int64_t parse_integer(const ParamSpec& spec, const std::string& text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) bad(spec, text, "not an integer");
  return v;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all = build();
  return all;
}

const Schema& schema_for(const std::string& subcommand) {
  for (const auto& s : schemas()) {
    if (s.subcommand == subcommand) return s;
  }
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

std::string schema_listing(const Schema& schema) {
  std::ostringstream out;
  out << schema.subcommand << ": " << schema.summary << "\n";
  for (const auto& p : schema.params) {
    out << "  --" << p.key << " (default " << (p.fallback.empty() ? "\"\"" : p.fallback) << ")  " << p.help << "\n";
  }
  out << "  --out (default results)  output directory\n";
  out << "  --seed (default 0)  random seed\n";
  return out.str();
}

std::string schema_listing() {
  std::string out;
  for (const auto& s : schemas()) out += schema_listing(s);
  return out;
}

ParamValue parse_value(const ParamSpec& spec, const std::string& text) {
  if (spec.allow_auto && text == "auto") return std::monostate{};
  switch (spec.type) {
    case T::Integer:
      return parse_integer(spec, text);
    case T::Real:
      return parse_real(spec, text);
    case T::Rational:
      try {
        return parse_rational(text);
      } catch (const std::exception& e) {
        bad(spec, text, e.what());
      }
    case T::Text:
      return text;
    case T::Flag: {
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      bad(spec, text, "not a flag value");
    }
    case T::RealList: {
      std::vector<double> v;
      for (const auto& item : split(text)) v.push_back(parse_real(spec, item));
      if (v.empty()) bad(spec, text, "empty list");
      return v;
    }
    case T::IntList: {
      std::vector<std::int64_t> v;
      for (const auto& item : split(text)) v.push_back(parse_integer(spec, item));
      if (v.empty()) bad(spec, text, "empty list");
      return v;
    }
  }
  bad(spec, text, "unsupported type");
}

std::string format_value(const ParamValue& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "auto"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(const Rational& v) const { return to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::vector<double>& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
      return out;
    }
    std::string operator()(const std::vector<std::int64_t>& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
      return out;
    }
  };
  return std::visit(Visitor{}, value);
}

namespace {

const ParamValue& lookup(const ExperimentConfig& c, const std::string& key) {
  const auto it = c.params.find(key);
  if (it == c.params.end()) throw ConfigError(c.subcommand + ": no parameter '" + key + "'");
  return it->second;
}

template <typename V>
const V& typed(const ExperimentConfig& c, const std::string& key) {
  const auto* v = std::get_if<V>(&lookup(c, key));
  if (!v) throw ConfigError(c.subcommand + ": parameter '" + key + "' is unresolved or has another type");
  return *v;
}

}  // namespace

bool ExperimentConfig::is_auto(const std::string& key) const {
  return std::holds_alternative<std::monostate>(lookup(*this, key));
}
std::int64_t ExperimentConfig::integer(const std::string& key) const { return typed<std::int64_t>(*this, key); }
double ExperimentConfig::real(const std::string& key) const {
  if (const auto* r = std::get_if<Rational>(&lookup(*this, key))) return to_double(*r);
  return typed<double>(*this, key);
}
Rational ExperimentConfig::rational(const std::string& key) const { return typed<Rational>(*this, key); }
const std::string& ExperimentConfig::text(const std::string& key) const { return typed<std::string>(*this, key); }
bool ExperimentConfig::flag(const std::string& key) const { return typed<bool>(*this, key); }
const std::vector<double>& ExperimentConfig::reals(const std::string& key) const {
  return typed<std::vector<double>>(*this, key);
}
const std::vector<std::int64_t>& ExperimentConfig::integers(const std::string& key) const {
  return typed<std::vector<std::int64_t>>(*this, key);
}
void ExperimentConfig::set(const std::string& key, ParamValue value) {
  lookup(*this, key);
  params[key] = std::move(value);
}

ExperimentConfig make_config(const std::string& subcommand, const std::map<std::string, std::string>& given,
                             std::filesystem::path output_dir, std::uint64_t seed) {
  const Schema& schema = schema_for(subcommand);
  for (const auto& [key, text] : given) {
    const bool known = std::any_of(schema.params.begin(), schema.params.end(),
                                   [&](const ParamSpec& p) { return p.key == key; });
    if (!known) throw ConfigError(subcommand + ": unknown option --" + key);
  }
  ExperimentConfig config;
  config.subcommand = subcommand;
  config.output_dir = std::move(output_dir);
  config.seed = seed;
  for (const auto& p : schema.params) {
    const auto it = given.find(p.key);
    config.params[p.key] = parse_value(p, it == given.end() ? p.fallback : it->second);
  }
  return config;
}

std::string echo(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "subcommand = " << config.subcommand << "\n";
  for (const auto& p : schema_for(config.subcommand).params) {
    out << p.key << " = " << format_value(config.params.at(p.key)) << "\n";
  }
  out << "out = " << config.output_dir.generic_string() << "\n";
  out << "seed = " << config.seed << "\n";
  return out.str();
}

}  // namespace tomaslab
