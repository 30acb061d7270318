#pragma once

#include <stdexcept>
#include <vector>

#include "ddpo/coeffs.hpp"

namespace ddpo {

/// Constant-parameter driven damped oscillator, time in units of 1/omega0.
struct DdhoParams {
  double omega0 = 1.0;
  double gamma = 0.0;
  double f0 = 0.0;          // drive strength
  double omega_drive = 0.0; // drive frequency
  double phi = 0.0;         // drive phase
  double x0 = 0.0;
  double p0 = 0.0;
};

/// Forced-response data of the steady orbit x_I = A2 cos(Omega t + phi2)
///                                              = X1 cos(Omega t) + X2 sin(Omega t).
struct SteadyResponse {
  double amplitude = 0;  // A2 >= 0
  double phase = 0;      // phi2, chosen so phi2 - phi lies in (-pi, 0]
  double in_phase = 0;   // X1
  double out_phase = 0;  // X2
};

class UnboundedResonance : public std::runtime_error {
 public:
  UnboundedResonance() : std::runtime_error("undamped drive at resonance: unbounded response") {}
};

/// A2 = F0 / sqrt((2 gamma Omega)^2 + (omega0^2 - Omega^2)^2), phase lag
/// phi2 - phi = -atan2(2 gamma Omega, omega0^2 - Omega^2). Throws
/// UnboundedResonance when gamma = 0 and Omega = omega0.
SteadyResponse steady_response(const DdhoParams& p);

/// Omega_R = sqrt(omega0^2 - 2 gamma^2); throws std::domain_error when
/// omega0^2 <= 2 gamma^2 (response has no interior maximum).
double resonant_frequency(double omega0, double gamma);

struct PhasePoint {
  double x = 0, p = 0;
};

/// Closed-form x(t) = x_H + x_I with the homogeneous constants matched to
/// (x0, p0). Covers under-, critically and overdamped branches.
PhasePoint ddho_solution(const DdhoParams& p, double t);

struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<double> x;       // packet center Xc
  std::vector<double> p;       // momentum (Xc' - c Xc - d)/a
  std::vector<double> action;  // accumulated Lagrangian integral, action[0] = 0
};

/// Integrates Xc'' + chi Xc' + xi Xc = eta for a general coefficient set,
/// accumulating the action s = int (b/2 Xc^2 - a/2 P^2 + e Xc + f). Local
/// tolerance 1e-9; requires a(t) != 0 on the horizon.
ClassicalTrajectory integrate_classical(const CoefficientSet& cs, double x0, double p0,
                                        double horizon, double dt);

struct Spectrum {
  std::vector<double> freq;   // angular frequency
  std::vector<double> power;  // one-sided, Hann window, mean removed
};

Spectrum power_spectrum(const std::vector<double>& series, double dt);

/// Overload validating uniform sampling of an explicit time axis.
Spectrum power_spectrum(const std::vector<double>& times, const std::vector<double>& series);

}  // namespace ddpo
