#include "tomaslab/bump.hpp"

#include <cmath>
#include <stdexcept>

namespace tomaslab {

namespace {

double flat_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double r, double inner, double outer) {
  if (!(outer > inner)) {
    throw std::invalid_argument("smooth_step: outer must exceed inner");
  }
  const double s = (r - inner) / (outer - inner);
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = flat_exp(1.0 - s);
  const double b = flat_exp(s);
  return a / (a + b);
}

double chi0(double r) { return smooth_step(std::abs(r), 0.5, 1.0); }

double dyadic_bump(int j, double r) {
  if (j < 0) throw std::invalid_argument("dyadic_bump: j must be nonnegative");
  if (j == 0) return chi0(r);
  return chi0(std::ldexp(r, -j)) - chi0(std::ldexp(r, 1 - j));
}

}  // namespace tomaslab
