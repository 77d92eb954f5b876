#pragma once

#include <cmath>

namespace espm::test {

/// a_t(t) = a [k'/b' + (1 - k'/b') exp(-b' t)], the solution of
/// da_ina/dt = b' (a + a k' t - a_ina) with a_ina(0) = 0.
inline double lam_closed_form(double a, double kprime, double betaprime, double t) {
  if (betaprime == 0.0) return a * (1.0 + kprime * t);
  const double r = kprime / betaprime;
  return a * (r + (1.0 - r) * std::exp(-betaprime * t));
}

struct LamCorner {
  const char* electrode;
  double kprime;
  double betaprime;
};

// Extremes of the reference fracture / inactive-area coefficients, 1/s.
inline constexpr LamCorner kLamCorners[] = {
    {"cathode", 3.06e-11, 0.198e-11}, {"cathode", 3.06e-11, 1.85e-11},
    {"cathode", 9.26e-11, 0.198e-11}, {"cathode", 9.26e-11, 1.85e-11},
    {"anode", 1.40e-10, 0.741e-9},    {"anode", 1.40e-10, 9.59e-9},
    {"anode", 6.30e-10, 0.741e-9},    {"anode", 6.30e-10, 9.59e-9},
};

}  // namespace espm::test
