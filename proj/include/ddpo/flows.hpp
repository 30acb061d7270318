#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ddpo/coeffs.hpp"

namespace ddpo {

/// Heisenberg-Weyl transformation parameters: packet center alpha = <X>,
/// beta = -<P>, and the accumulated classical action s.
struct H4State {
  double alpha = 0, beta = 0, s = 0;
};

/// su(2) transformation parameters. Real in unitary scenarios; the complex
/// branch (used to tame dissipative divergences) carries imaginary parts.
struct Su2State {
  std::complex<double> theta_plus{0, 0};
  std::complex<double> theta_zero{0, 0};
  std::complex<double> theta_minus{0, 0};
};

/// A finite-time pole (or numerical blow-up) of a parameter flow, after
/// which the reconstructed wavefunction has no physical meaning.
struct DivergenceEvent {
  double time = 0;
  std::string parameter;  // "theta_plus", "theta_zero", "u", "rho"
  std::string kind;       // "threshold", "pole", "stiffness", "singular"
};

struct H4Trajectory {
  std::vector<double> times;
  std::vector<H4State> states;
};

struct Su2Trajectory {
  std::vector<double> times;
  std::vector<Su2State> states;
  std::vector<DivergenceEvent> events;
  bool truncated = false;
};

struct KTrajectory {
  std::vector<double> times;
  std::vector<std::array<double, 3>> k;
};

/// Joint theta/K trajectory for the coupled flows (tracked K's or the
/// Ermakov-built invariant frame).
struct Su2KTrajectory {
  std::vector<double> times;
  std::vector<Su2State> states;
  std::vector<std::array<double, 3>> k;
  std::vector<DivergenceEvent> events;
  bool truncated = false;
};

/// Time-dependent coefficients (K1, K2, K3) of the target-frame Hamiltonian
/// HU = K1/2 P^2 + K2/2 X^2 + K3/2 (XP+PX).
class KSet {
 public:
  KSet() : KSet(zero()) {}
  static KSet zero();
  static KSet constants(double k1, double k2, double k3);
  static KSet functions(TimeFunction k1, TimeFunction k2, TimeFunction k3);
  static KSet callable(std::function<std::array<double, 3>(double)> fn, std::string label);

  std::array<double, 3> operator()(double t) const { return fn_(t); }
  bool is_zero() const { return zero_; }
  const std::string& label() const { return label_; }

 private:
  KSet(std::function<std::array<double, 3>(double)> fn, bool zero, std::string label)
      : fn_(std::move(fn)), zero_(zero), label_(std::move(label)) {}
  std::function<std::array<double, 3>(double)> fn_;
  bool zero_ = false;
  std::string label_;
};

struct FlowOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  double theta_plus_bound = 1e6;  // |theta_plus| divergence threshold
  double theta_zero_bound = 50.0; // |Re theta_zero| divergence threshold
};

/// alpha' = c alpha - a beta + d,  beta' = b alpha - c beta + e,
/// s' = b/2 alpha^2 - a/2 beta^2 + e alpha + f.
H4Trajectory evolve_h4(const CoefficientSet& cs, const H4State& init, double horizon,
                       double dt_out, const FlowOptions& opt = {});

/// General theta flow for arbitrary K's:
///   theta+' = a theta+^2 - 2c theta+ - K2 e^{-2 theta0} + b
///   theta-' = a e^{-2 theta0} - K2 theta-^2 + 2 K3 theta- - K1
///   theta0' = K2 theta- - a theta+ + c - K3
/// The trajectory is truncated with a recorded event when |theta+| or
/// |Re theta0| crosses its bound or the integrator hits a pole.
Su2Trajectory evolve_su2(const CoefficientSet& cs, const KSet& ks, const Su2State& init,
                         double horizon, double dt_out, const FlowOptions& opt = {});

/// Invariance flow K1' = 2c K1 - 2a K3, K2' = 2b K3 - 2c K2, K3' = b K1 - a K2.
KTrajectory evolve_K(const CoefficientSet& cs, std::array<double, 3> init, double horizon,
                     double dt_out, const FlowOptions& opt = {});

/// Theta flow coupled with the K flow (9 real components).
Su2KTrajectory evolve_su2_tracked(const CoefficientSet& cs, const Su2State& init,
                                  std::array<double, 3> k_init, double horizon, double dt_out,
                                  const FlowOptions& opt = {});

/// Theta flow coupled with the auxiliary rho equation; K's are produced
/// on the fly from (rho, rho') as K1 = rho^2, K2 = Omega^2/rho^2 +
/// ((c rho - rho')/a)^2, K3 = rho (c rho - rho')/a.
Su2KTrajectory evolve_su2_ermakov(const CoefficientSet& cs, const Su2State& init, double rho0,
                                  double drho0, double omega, double horizon, double dt_out,
                                  const FlowOptions& opt = {});

enum class AuxKind { kRiccatiU, kErmakovRho, kCkSigma };
enum class ErmakovForm {
  kInvariant,  // rho'' + chi rho' + xi rho = Omega^2 a^2 / rho^3
  kRiccati,    // rho'' + (2c - a'/a) rho' + a b rho = Omega^2 a^2 / rho^3
};

/// Sampled auxiliary function with derivative (and second derivative for
/// C1 interpolation between nodes).
struct AuxiliarySolution {
  AuxKind kind = AuxKind::kErmakovRho;
  ErmakovForm form = ErmakovForm::kInvariant;
  double omega = 1.0;
  double initial_value = 1.0;
  std::vector<double> times, value, deriv, accel;
  std::vector<DivergenceEvent> events;
  bool truncated = false;

  double interp_value(double t) const;
  double interp_deriv(double t) const;
};

/// Solves the nonlinear auxiliary equation selected by `form`. rho0 must be
/// positive; a zero crossing of rho is reported as a "singular" event and
/// truncates the solution.
AuxiliarySolution ermakov_solve(const CoefficientSet& cs, double rho0, double drho0, double omega,
                                double horizon, double dt_out,
                                ErmakovForm form = ErmakovForm::kInvariant,
                                const FlowOptions& opt = {});

/// Builds the K set generated by an Ermakov solution (kind kErmakovRho).
KSet ks_from_rho(const AuxiliarySolution& aux, const CoefficientSet& cs, double omega);

struct RiccatiResult {
  Su2Trajectory thetas;
  AuxiliarySolution u;  // kind kRiccatiU; pole events located by sign change
};

/// Ks = 0 branch through the linear substitution theta+ = -u'/(a u):
///   u'' + (2c - a'/a) u' + a b u = 0,  u(0) = 1,  u'(0) = -a(0) theta+(0).
/// theta0 = int c + ln(u/u(0)); theta- by quadrature of a e^{-2 theta0}.
RiccatiResult riccati_via_linear(const CoefficientSet& cs, double horizon, double dt_out,
                                 double theta_plus0 = 0.0, const FlowOptions& opt = {});

/// Underdamped homogeneous mode sigma_c(t) = sigma0 e^{-gamma t}
/// [cos(w t) + gamma/w sin(w t)], w = sqrt(1-gamma^2); requires 0 <= gamma < 1.
double ck_sigma(double gamma, double sigma0, double t);

/// Ascending roots of cot(w t) = -gamma/w, the times where the Ks = 0
/// parameters blow up for the exponential-mass model.
std::vector<double> ck_divergence_times(double gamma, std::size_t count);

}  // namespace ddpo
