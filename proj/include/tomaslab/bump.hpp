#pragma once

namespace tomaslab {

/// C-infinity transition from 1 (r <= inner) to 0 (r >= outer).
///
/// Built from h(t) = exp(-1/t): with s = (r - inner) / (outer - inner),
/// the value is h(1 - s) / (h(1 - s) + h(s)).
double smooth_step(double r, double inner, double outer);

/// Radial bump chi_0: equal to 1 for |x| <= 1/2, supported in |x| < 1.
double chi0(double r);

/// Dyadic partition member: chi_0 for j = 0, chi_0(2^-j r) - chi_0(2^{1-j} r)
/// for j >= 1. Summing j = 0..J telescopes to chi_0(2^-J r).
double dyadic_bump(int j, double r);

}  // namespace tomaslab
