#include "tomaslab/exponents.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace tomaslab {

namespace {

Rational dual(const Rational& p) { return p / (p - 1); }

Rational integer_part(const std::string& digits) {
  if (digits.empty()) return Rational(0);
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("not a rational: " + digits);
  }
  return Rational(boost::multiprecision::cpp_int(digits));
}

Rational parse_unsigned(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    return integer_part(text);
  }
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw std::invalid_argument("not a rational: " + text);
  boost::multiprecision::cpp_int scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  return integer_part(whole) + integer_part(frac) / Rational(scale);
}

// rho and sigma depend on (d, a) only through the codimension c = d - a.
std::pair<Rational, Rational> weak_type_pair(const Rational& c, const Rational& b) {
  const Rational rho = (c + 2 * b) * (c + b) / (c * c + 3 * b * c + b * b);
  const Rational sigma = (c + 2 * b) / b;
  return {rho, sigma};
}

ExponentPoint convex(const Rational& t, const ExponentPoint& e0, const ExponentPoint& e1) {
  return {(1 - t) * e0.first + t * e1.first, (1 - t) * e0.second + t * e1.second};
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  Rational value;
  const auto slash = body.find('/');
  if (slash == std::string::npos) {
    value = parse_unsigned(body);
  } else {
    const Rational den = parse_unsigned(body.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    value = parse_unsigned(body.substr(0, slash)) / den;
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) { return r.str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

ExponentProfile exponent_profile(int d, const Rational& a, const Rational& b) {
  if (d < 1) throw std::invalid_argument("exponent_profile: violates d >= 1");
  if (!(a > 0)) throw std::invalid_argument("exponent_profile: violates a > 0");
  if (!(a < d)) throw std::invalid_argument("exponent_profile: violates a < d");
  if (!(b > 0)) throw std::invalid_argument("exponent_profile: violates b > 0");
  if (!(b <= a / 2)) throw std::invalid_argument("exponent_profile: violates b <= a/2");
  ExponentProfile e;
  e.d = d;
  e.a = a;
  e.b = b;
  const Rational c = Rational(d) - a;
  e.p_circ = 2 * (c + b) / (2 * c + b);
  e.p_circ_dual = dual(e.p_circ);
  e.theta = c / (c + b);
  e.gamma = c / (c + 2 * b);
  std::tie(e.rho, e.sigma) = weak_type_pair(c, b);
  e.rho_dual = dual(e.rho);
  e.sigma_dual = dual(e.sigma);
  return e;
}

Rational CriticalQ::value() const {
  if (infinite()) throw std::domain_error("critical_q: q is infinite at p = 1");
  return 1 / inverse;
}

CriticalQ critical_q(const ExponentProfile& profile, const Rational& p) {
  if (!(p >= 1)) throw std::invalid_argument("critical_q: requires p >= 1");
  if (p > profile.p_circ) throw std::invalid_argument("critical_q: requires p <= p_circ = " + to_string(profile.p_circ));
  const Rational c = Rational(profile.d) - profile.a;
  // 1/p' = 1 - 1/p, and q = b p' / (d-a+b).
  return CriticalQ{(1 - 1 / p) * (c + profile.b) / profile.b};
}

Rational q_circ(int kappa) {
  if (kappa < 1) throw std::invalid_argument("q_circ: requires kappa >= 1");
  return 2 + Rational(4, kappa);
}

OscillatoryExponents oscillatory_exponents(int kappa) {
  if (kappa < 0) throw std::invalid_argument("oscillatory_exponents: requires kappa >= 0");
  OscillatoryExponents e;
  e.kappa = kappa;
  e.q_one = Rational(2 * kappa + 4, kappa + 1);
  std::tie(e.rho_one, e.sigma_one) = weak_type_pair(1, Rational(kappa + 1, 2));
  if (kappa >= 1) {
    e.q_circ = q_circ(kappa);
    auto [rho, sigma] = weak_type_pair(1, Rational(kappa, 2));
    e.rho_kappa = rho;
    e.sigma_kappa = sigma;
  }
  return e;
}

Rational hormander_q(int d, const Rational& p) {
  if (d < 2) throw std::invalid_argument("hormander_q: requires d >= 2");
  const Rational upper(2 * d, d - 1);
  if (!(p > 1 && p <= upper)) {
    throw std::invalid_argument("hormander_q: requires 1 < p <= " + to_string(upper));
  }
  return Rational(d + 1, d - 1) * dual(p);
}

InterpolationResult bourgain_interpolate(const InterpolationInput& in) {
  if (!(in.beta0 > 0) || !(in.beta1 > 0)) throw std::invalid_argument("bourgain_interpolate: betas must be positive");
  if (!(in.M0 > 0.0) || !(in.M1 > 0.0)) throw std::invalid_argument("bourgain_interpolate: constants must be positive");
  InterpolationResult r;
  r.vartheta = in.beta0 / (in.beta0 + in.beta1);
  r.target = convex(r.vartheta, in.endpoint0, in.endpoint1);
  const double t = to_double(r.vartheta);
  r.constant_bound = std::pow(in.M0, 1.0 - t) * std::pow(in.M1, t);
  return r;
}

InterpolationInput stage_one_input(const ExponentProfile& profile, double A, double B) {
  InterpolationInput in;
  in.beta0 = profile.b;
  in.beta1 = Rational(profile.d) - profile.a;
  in.M0 = B;
  in.M1 = A;
  in.endpoint0 = {Rational(1), Rational(0)};
  in.endpoint1 = {Rational(1, 2), Rational(1, 2)};
  return in;
}

InterpolationInput stage_two_input(const ExponentProfile& profile, double A, double B) {
  const double theta = to_double(profile.theta);
  InterpolationInput in;
  in.beta0 = profile.b;
  in.beta1 = (Rational(profile.d) - profile.a) / 2;
  in.M0 = B;
  in.M1 = std::pow(A, 1.0 - theta / 2.0) * std::pow(B, theta / 2.0);
  in.endpoint0 = {Rational(1), Rational(0)};
  in.endpoint1 = {1 / profile.p_circ, Rational(1, 2)};
  return in;
}

std::vector<IdentityCheck> verify_identities(const ExponentProfile& e) {
  const Rational c = Rational(e.d) - e.a;
  const Rational& th = e.theta;
  const Rational& ga = e.gamma;
  std::vector<IdentityCheck> out;
  auto add = [&](std::string name, bool holds) { out.push_back({std::move(name), holds}); };
  add("theta balances d-a against b", (1 - th) * c == th * e.b);
  add("gamma balances (d-a)/2 against b", (1 - ga) * c / 2 == ga * e.b);
  add("(1-gamma)(1-theta/2) = b/(d-a+b)", (1 - ga) * (1 - th / 2) == e.b / (c + e.b));
  add("b/(d-a+b) = 1-theta", e.b / (c + e.b) == 1 - th);
  add("(1-gamma)theta/2 + gamma = theta", (1 - ga) * th / 2 + ga == th);
  const auto mix = convex(ga, {1 / e.p_circ, Rational(1, 2)}, {Rational(1), Rational(0)});
  add("(1-gamma)(1/p,1/2) + gamma(1,0) = (1/rho,1/sigma)", mix.first == 1 / e.rho && mix.second == 1 / e.sigma);
  add("(1/p,1/p') is the midpoint of (1/rho,1/sigma) and (1/sigma',1/rho')",
      (1 / e.rho + 1 / e.sigma_dual) / 2 == 1 / e.p_circ && (1 / e.sigma + 1 / e.rho_dual) / 2 == 1 / e.p_circ_dual);
  add("1 - 1/rho + 1/sigma = 2/p'", 1 - 1 / e.rho + 1 / e.sigma == 2 / e.p_circ_dual);
  add("1 < p < 2", e.p_circ > 1 && e.p_circ < 2);
  add("rho < p < sigma'", e.rho < e.p_circ && e.p_circ < e.sigma_dual);
  add("critical q at p is 2", critical_q(e, e.p_circ).inverse == Rational(1, 2));
  return out;
}

}  // namespace tomaslab
