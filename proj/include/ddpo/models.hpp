#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "ddpo/coeffs.hpp"
#include "ddpo/flows.hpp"
#include "ddpo/invariant.hpp"
#include "ddpo/wave.hpp"

namespace ddpo {

struct BasisTerm {
  unsigned n = 0;
  std::complex<double> coeff{1.0, 0.0};
};

/// Initial quantum state of a scenario.
struct InitialState {
  enum class Kind { kHermite, kSuperposition, kWell, kPlane, kPosmom };
  Kind kind = Kind::kHermite;
  std::vector<BasisTerm> terms;  // hermite levels (kHermite/kSuperposition)
  unsigned well_n = 1;
  double well_width = 1.0;
  double plane_k0 = 0.0;
  double posmom_xi = 0.0;
  double posmom_x0 = 1.0;

  static InitialState hermite(unsigned n);
  static InitialState superposition(std::vector<BasisTerm> terms);
  static InitialState well(unsigned n, double width);
  static InitialState plane(double k0);
  static InitialState posmom(double xi, double x0);

  WaveState build(const Grid& grid) const;
};

/// Choice of the transformed-frame coefficients K1, K2, K3.
struct KStrategy {
  enum class Kind { kZero, kConstant, kFreeParticle, kPosmom, kErmakov, kTracked };
  Kind kind = Kind::kZero;
  std::array<double, 3> values{0, 0, 0};  // kConstant, or kTracked initial values
  TimeFunction k_func;                    // K(t) for kFreeParticle / kPosmom
  double ermakov_omega = 1.0;
  double ermakov_rho0 = 1.0;
  double ermakov_drho0 = 0.0;

  static KStrategy zero();
  static KStrategy constant(double k1, double k2, double k3);
  static KStrategy free_particle(TimeFunction k);
  static KStrategy posmom(TimeFunction k);
  static KStrategy ermakov(double omega, double rho0 = 1.0, double drho0 = 0.0);
  static KStrategy tracked(double k1, double k2, double k3);
};

struct Scenario {
  std::string name = "scenario";
  CoefficientSet cs;
  KStrategy k;
  InitialState initial;
  Su2State theta_init;  // complex-branch runs seed Im(theta+)
  double x_c0 = 0.0, p_c0 = 0.0;
  Grid grid = Grid::centered(12.0, 1024);
  double horizon = 10.0;
  double dt_output = 0.05;
  double base_dt = 1e-3;  // split-step resolution for frame-state evolution

  void validate() const;
};

struct ScenarioResult {
  std::vector<double> times;
  std::vector<H4State> h4;
  std::vector<Su2State> su2;
  std::vector<std::array<double, 3>> ks;
  std::vector<DivergenceEvent> events;
  bool truncated = false;
  std::vector<WaveState> frames;
  std::vector<Moments> frame_moments;
  std::vector<double> invariant;  // empty when the frame defines none
  std::vector<std::string> warnings;
};

/// Integrates the parameter flows for the chosen K strategy, reconstructs
/// the wavefunction at the output cadence via the Lie operators, and
/// records moments, invariant expectation and divergence events.
ScenarioResult run_scenario(const Scenario& sc);

/// Flows only (no grid work); frames and moments stay empty.
ScenarioResult run_scenario_flows(const Scenario& sc);

/// Moving-boundary well closed form at time t, for one level n:
///   psi = e^{i q(t)} e^{-i n^2 pi^2 t/2} e^{i L'(X-Xc)^2/(2L)}
///         sqrt(2/L) sin(n pi (X-Xc)/L),   q = int Xc f dt', Xc'' = f.
/// xc, pc, phase_q must describe the classical state at the same t.
WaveState well_solution(const TimeFunction& width, unsigned n, double t, double xc, double pc,
                        double phase_q, const Grid& grid);

/// Diagnostic Omega0^2 = (L''/L) L^4 / (1 - L^4) of the accelerated-boundary
/// construction; throws std::domain_error at the L = 1 pole.
double well_omega0_sq(const TimeFunction& width, double t);

struct WellScenario {
  TimeFunction width;           // L(t), positive
  TimeFunction drive;           // f(t) with Xc'' = f
  std::vector<BasisTerm> terms; // well levels, n >= 1
  Grid grid = Grid(-2.0, 6.0, 1024);
  double horizon = 10.0;
  double dt_output = 0.05;
};

struct WellResult {
  std::vector<double> times;
  std::vector<WaveState> frames;
  std::vector<double> width, xc, pc;
  std::vector<Moments> frame_moments;
  std::vector<double> invariant;  // free-frame invariant expectation
};

WellResult run_well_scenario(const WellScenario& ws);

/// Dilation-frame closed form: the posmom eigenstate evolved through the
/// K3 = K(t) frame and the Lie operators, evaluated at time t.
WaveState posmom_solution(const CoefficientSet& cs, const TimeFunction& k, double xi, double x0,
                          double t, const Grid& grid, double x_c0 = 0.0, double p_c0 = 0.0);

/// Plane-wave closed form in the free-particle frame K1 = a e^{-2 theta0}:
/// quadratic-phase wave around the classical center, 1/sqrt(rho) prefactor.
/// Throws std::domain_error past the first zero of rho.
WaveState free_particle_solution(const CoefficientSet& cs, double e0, double t, const Grid& grid,
                                 double x_c0 = 0.0, double p_c0 = 0.0);

/// sqrt(sum |a-b|^2 dx).
double l2_distance(const WaveState& a, const WaveState& b);

}  // namespace ddpo
