#pragma once

#include <complex>
#include <cstddef>

namespace ddpo {

/// Associated Laguerre L_n^{(k)}(x), k >= 0, by the three-term recurrence
/// in the degree (stable for the degrees used here).
double assoc_laguerre(unsigned n, unsigned k, double x);

/// Laguerre polynomial L_n(x) = L_n^{(0)}(x).
double laguerre(unsigned n, double x);

/// Normalized oscillator eigenfunction phi_n(x) = (pi^{-1/4}/sqrt(2^n n!))
/// e^{-x^2/2} H_n(x), computed by the recurrence on the functions
/// themselves so large n does not overflow.
double hermite_function(unsigned n, double x);

/// Overlap <m|D(alpha)|n> of a displaced number state, exact for all m, n:
///   m >= n:  sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)
///   m <  n:  sqrt(m!/n!) (-conj(alpha))^{n-m} e^{-|alpha|^2/2} L_m^{(n-m)}(|alpha|^2)
std::complex<double> displaced_overlap(unsigned n, unsigned m, std::complex<double> alpha);

/// Probability of remaining in |n> under a classical displacement of energy
/// e_c: P_n = e^{-e_c} [L_n(e_c)]^2.
double survival_probability(unsigned n, double e_c);

}  // namespace ddpo
