#pragma once

#include "ddpo/flows.hpp"
#include "ddpo/wave.hpp"

namespace ddpo {

/// Quadratic invariant operator
///   I = 1/2 [ cxx Q^2 + cpp Pi^2 + cxp (Q Pi + Pi Q) ],
/// with Q = X - x_center and Pi = P + p_offset. All the closed-form
/// invariants produced by the transformation frames fit this shape.
struct InvariantOperator {
  double cxx = 0, cpp = 0, cxp = 0;
  double x_center = 0, p_offset = 0;

  /// I = 1/2 K1 Pi^2 + 1/2 K2 Q^2 + 1/2 K3 (Q Pi + Pi Q).
  static InvariantOperator from_ks(const std::array<double, 3>& k, double x_center = 0,
                                   double p_offset = 0);

  /// Ermakov form: I = 1/2 (Omega/rho)^2 Q^2 + 1/2 [rho Pi + (c rho - rho')/a Q]^2.
  static InvariantOperator from_rho(double rho, double drho, double a, double c, double omega,
                                    double x_center = 0, double p_offset = 0);

  /// Harmonic frame with theta- = 0:
  /// I = 1/2 e^{2 theta0} [Pi + theta+ Q]^2 + 1/2 Omega0^2 e^{-2 theta0} Q^2.
  static InvariantOperator harmonic_frame(double theta0, double theta_plus, double omega0,
                                          double x_center = 0, double p_offset = 0);

  /// Free-particle frame: I = 1/2 [e^{theta0} Pi + theta+ e^{theta0} Q]^2.
  static InvariantOperator free_frame(double theta0, double theta_plus, double x_center = 0,
                                      double p_offset = 0);

  /// Full inverse-transform frame (theta- kept):
  /// I = 1/2 e^{2 theta0} [Pi + theta+ Q]^2
  ///   + 1/2 Omega0^2 [(e^{-theta0} - e^{theta0} theta- theta+) Q - e^{theta0} theta- Pi]^2.
  static InvariantOperator general_frame(const Su2State& su2, double omega0, double x_center = 0,
                                         double p_offset = 0);

  /// U HU U^{-1} for an arbitrary target form: the quadratic form with
  /// coefficients (K1, K2, K3) pulled back through the inverse of the
  /// symplectic map generated by the (real) su(2) parameters.
  static InvariantOperator conjugated_ks(const std::array<double, 3>& k, const Su2State& su2,
                                         double x_center = 0, double p_offset = 0);
};

/// <psi|I|psi> / <psi|psi> via grid quadrature and spectral derivatives.
double invariant_expectation(const InvariantOperator& inv, const WaveState& psi);

}  // namespace ddpo
