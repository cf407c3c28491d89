#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tomaslab {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-2/5", "0.25" or "inf"-free decimals into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// Exponents attached to a measure with Frostman exponent a and decay b in R^d.
struct ExponentProfile {
  int d = 0;
  Rational a, b;
  Rational p_circ;        ///< 2(d-a+b) / (2(d-a)+b)
  Rational p_circ_dual;   ///< p_circ / (p_circ - 1)
  Rational theta;         ///< (d-a) / (d-a+b)
  Rational gamma;         ///< (d-a) / (d-a+2b)
  Rational rho;           ///< restricted weak type (rho, sigma)
  Rational sigma;
  Rational rho_dual;
  Rational sigma_dual;
};

/// Requires 0 < b <= a/2 and 0 < a < d.
ExponentProfile exponent_profile(int d, const Rational& a, const Rational& b);

/// Exponent q with 1/q = (d-a+b) / (b p'). Returned as 1/q so that p = 1
/// (q = infinity) is representable.
struct CriticalQ {
  Rational inverse;  ///< 1/q
  bool infinite() const { return inverse == 0; }
  Rational value() const;  ///< throws when infinite
};

/// Requires 1 <= p <= p_circ.
CriticalQ critical_q(const ExponentProfile& profile, const Rational& p);

struct OscillatoryExponents {
  int kappa = 0;
  std::optional<Rational> q_circ;  ///< 2 + 4/kappa, absent for kappa = 0
  Rational q_one;                  ///< (2 kappa + 4) / (kappa + 1)
  std::optional<Rational> rho_kappa, sigma_kappa;  ///< at d - a = 1, b = kappa/2
  Rational rho_one, sigma_one;                     ///< at d - a = 1, b = (kappa+1)/2
};

/// kappa >= 0; the q_circ family is present only for kappa >= 1.
OscillatoryExponents oscillatory_exponents(int kappa);

/// q_circ = 2 + 4/kappa; throws for kappa < 1.
Rational q_circ(int kappa);

/// ((d+1)/(d-1)) p' for 1 < p <= 2d/(d-1); the endpoint itself is admitted.
Rational hormander_q(int d, const Rational& p);

/// A point (1/p, 1/q).
using ExponentPoint = std::pair<Rational, Rational>;

struct InterpolationInput {
  Rational beta0, beta1;
  double M0 = 1.0, M1 = 1.0;
  ExponentPoint endpoint0, endpoint1;
};

struct InterpolationResult {
  Rational vartheta;  ///< beta0 / (beta0 + beta1)
  ExponentPoint target;
  /// M0^{1-vartheta} M1^vartheta; the true bound carries an extra factor C(beta0, beta1).
  double constant_bound = 0.0;
  std::string constant_note = "xC";
};

InterpolationResult bourgain_interpolate(const InterpolationInput& in);

/// Stage one balances L^1 -> L^inf decay b against L^2 growth d-a; stage two
/// balances decay b against the L^{p_circ} -> L^2 growth (d-a)/2.
InterpolationInput stage_one_input(const ExponentProfile& profile, double A, double B);
InterpolationInput stage_two_input(const ExponentProfile& profile, double A, double B);

struct IdentityCheck {
  std::string name;
  bool holds = false;
};

/// The exact identities tying p_circ, theta, gamma, rho and sigma together.
std::vector<IdentityCheck> verify_identities(const ExponentProfile& profile);

}  // namespace tomaslab
