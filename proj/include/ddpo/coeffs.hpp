#pragma once

#include <stdexcept>

#include "ddpo/expr.hpp"

namespace ddpo {

/// The six time-dependent coefficients of the scaled quadratic Hamiltonian
///
///   H(t) = a/2 P^2 + b/2 X^2 + c/2 (XP+PX) + d P + e X + f,
///
/// dimensionless in zero-point units ([X,P] = i). Symbolic derivatives of
/// a, c, d are kept alongside because the equivalent classical form
///
///   Xc'' + chi(t) Xc' + xi(t) Xc = eta(t)
///
/// needs a'/a, c' and d'. Immutable; build through make() or a preset.
struct CoefficientSet {
  TimeFunction a, b, c, d, e, f;
  TimeFunction da, dc, dd;

  static CoefficientSet make(TimeFunction a, TimeFunction b, TimeFunction c,
                             TimeFunction d, TimeFunction e, TimeFunction f);

  /// chi = -a'/a. Throws EvalError when a(t) = 0.
  double chi(double t) const;
  /// xi = a b + (a'/a) c - c^2 - c'
  double xi(double t) const;
  /// eta = c d - a e + d' - (a'/a) d
  double eta(double t) const;
};

/// Exponential-mass oscillator with harmonic drive:
/// a = e^{-2 gamma t}, b = e^{2 gamma t}, e = -e^{2 gamma t} f0 cos(Omega t + phi).
/// Rejects gamma < 0.
CoefficientSet caldirola_kanai(double gamma, double f0, double omega_drive, double phi);

/// Time-dependent mass/frequency oscillator:
/// a = 1/M, b = M Omega0^2, e = fc. M must not vanish on [0, horizon].
CoefficientSet parametric_oscillator(const TimeFunction& mass,
                                     const TimeFunction& omega0_sq,
                                     const TimeFunction& fc, double horizon);

/// Driven free particle backing the moving-boundary well model:
/// a = 1, b = 0, e = -drive (so the packet center obeys Xc'' = drive).
/// The boundary width L must stay positive on [0, horizon].
CoefficientSet free_well(const TimeFunction& width, const TimeFunction& drive,
                         double horizon);

/// Same coefficient family as caldirola_kanai(gamma, f0, omega, 0); used by
/// the posmom-frame scenarios.
CoefficientSet posmom_test(double gamma, double f0, double omega_drive);

}  // namespace ddpo
