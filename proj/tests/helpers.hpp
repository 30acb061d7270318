#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "ddpo/coeffs.hpp"

namespace ddpo::testing {

/// Bracketing bisection root finder, independent of the library solvers.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: no sign change");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Random smooth coefficient set with a(t) bounded away from zero; suitable
/// for the Riccati/theta-flow equivalence sweeps.
inline CoefficientSet random_smooth_coeffs(std::mt19937& rng) {
  std::uniform_real_distribution<double> amp(0.05, 0.3);
  std::uniform_real_distribution<double> freq(0.3, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  std::uniform_real_distribution<double> level(0.7, 1.4);

  auto wobble = [&](double base) {
    return TimeFunction::constant(base) +
           TimeFunction::harmonic(amp(rng), freq(rng), phase(rng));
  };
  auto a = wobble(level(rng));   // stays within [0.4, 1.7]
  auto b = wobble(level(rng));
  auto c = TimeFunction::harmonic(amp(rng) * 0.5, freq(rng), phase(rng));
  return CoefficientSet::make(a, b, c, TimeFunction::constant(0), TimeFunction::constant(0),
                              TimeFunction::constant(0));
}

}  // namespace ddpo::testing
