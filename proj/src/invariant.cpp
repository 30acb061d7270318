#include "ddpo/invariant.hpp"

#include <cmath>

#include "ddpo/fft.hpp"

namespace ddpo {

InvariantOperator InvariantOperator::from_ks(const std::array<double, 3>& k, double x_center,
                                             double p_offset) {
  InvariantOperator inv;
  inv.cpp = k[0];
  inv.cxx = k[1];
  inv.cxp = k[2];
  inv.x_center = x_center;
  inv.p_offset = p_offset;
  return inv;
}

InvariantOperator InvariantOperator::from_rho(double rho, double drho, double a, double c,
                                              double omega, double x_center, double p_offset) {
  double g = (c * rho - drho) / a;
  InvariantOperator inv;
  inv.cpp = rho * rho;
  inv.cxx = omega * omega / (rho * rho) + g * g;
  inv.cxp = rho * g;
  inv.x_center = x_center;
  inv.p_offset = p_offset;
  return inv;
}

InvariantOperator InvariantOperator::harmonic_frame(double theta0, double theta_plus,
                                                    double omega0, double x_center,
                                                    double p_offset) {
  double e2 = std::exp(2.0 * theta0);
  InvariantOperator inv;
  inv.cpp = e2;
  inv.cxp = e2 * theta_plus;
  inv.cxx = e2 * theta_plus * theta_plus + omega0 * omega0 * std::exp(-2.0 * theta0);
  inv.x_center = x_center;
  inv.p_offset = p_offset;
  return inv;
}

InvariantOperator InvariantOperator::free_frame(double theta0, double theta_plus, double x_center,
                                                double p_offset) {
  double e2 = std::exp(2.0 * theta0);
  InvariantOperator inv;
  inv.cpp = e2;
  inv.cxp = e2 * theta_plus;
  inv.cxx = e2 * theta_plus * theta_plus;
  inv.x_center = x_center;
  inv.p_offset = p_offset;
  return inv;
}

InvariantOperator InvariantOperator::general_frame(const Su2State& su2, double omega0,
                                                   double x_center, double p_offset) {
  double th0 = su2.theta_zero.real();
  double thp = su2.theta_plus.real();
  double thm = su2.theta_minus.real();
  double ep = std::exp(th0);
  double e2 = ep * ep;

  InvariantOperator inv;
  inv.cpp = e2;
  inv.cxp = e2 * thp;
  inv.cxx = e2 * thp * thp;
  double u = 1.0 / ep - ep * thm * thp;
  double w = -ep * thm;
  double o2 = omega0 * omega0;
  inv.cxx += o2 * u * u;
  inv.cpp += o2 * w * w;
  inv.cxp += o2 * u * w;
  inv.x_center = x_center;
  inv.p_offset = p_offset;
  return inv;
}

InvariantOperator InvariantOperator::conjugated_ks(const std::array<double, 3>& k,
                                                   const Su2State& su2, double x_center,
                                                   double p_offset) {
  double th0 = su2.theta_zero.real();
  double thp = su2.theta_plus.real();
  double thm = su2.theta_minus.real();
  double ep = std::exp(th0);

  // Heisenberg matrix (X_h, P_h)^T = M (X, P)^T + (alpha, -beta)^T
  double m11 = ep, m12 = thm * ep;
  double m21 = -ep * thp, m22 = 1.0 / ep - ep * thp * thm;
  // det M = 1, so the inverse is the adjugate
  double n11 = m22, n12 = -m12, n21 = -m21, n22 = m11;

  // S = [[K2, K3], [K3, K1]]; Stilde = N^T S N
  double s11 = k[1], s12 = k[2], s22 = k[0];
  double t11 = s11 * n11 + s12 * n21;
  double t12 = s11 * n12 + s12 * n22;
  double t21 = s12 * n11 + s22 * n21;
  double t22 = s12 * n12 + s22 * n22;

  InvariantOperator inv;
  inv.cxx = n11 * t11 + n21 * t21;
  inv.cxp = n11 * t12 + n21 * t22;
  inv.cpp = n12 * t12 + n22 * t22;
  inv.x_center = x_center;
  inv.p_offset = p_offset;
  return inv;
}

double invariant_expectation(const InvariantOperator& inv, const WaveState& psi) {
  const Grid& g = psi.grid;
  const double dx = g.dx();
  using cplx = std::complex<double>;

  double nsum = 0, q2sum = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    double w = std::norm(psi.amp[j]);
    double q = g.x(j) - inv.x_center;
    nsum += w;
    q2sum += w * q * q;
  }
  if (nsum == 0) throw std::invalid_argument("invariant_expectation: null state");

  std::vector<cplx> spec(psi.amp);
  Fft fft(g.n);
  fft.forward(spec);
  double specsum = 0, pi2sum = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    double w = std::norm(spec[j]);
    double pk = g.k(j) + inv.p_offset;
    specsum += w;
    pi2sum += w * pk * pk;
  }

  double sym = 0;
  if (inv.cxp != 0.0) {
    // <Q Pi + Pi Q> = 2 Re <Q psi | Pi psi>
    for (std::size_t j = 0; j < g.n; ++j) spec[j] *= (g.k(j) + inv.p_offset);
    fft.inverse(spec);
    cplx acc = 0;
    for (std::size_t j = 0; j < g.n; ++j)
      acc += std::conj(psi.amp[j]) * (g.x(j) - inv.x_center) * spec[j];
    sym = 2.0 * acc.real() / nsum;
  }

  return 0.5 * (inv.cxx * q2sum / nsum + inv.cpp * pi2sum / specsum + inv.cxp * sym);
}

}  // namespace ddpo
