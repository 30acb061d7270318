#include "ddpo/special.hpp"

#include <cmath>
#include <stdexcept>

namespace ddpo {

double assoc_laguerre(unsigned n, unsigned k, double x) {
  double lm2 = 1.0;                              // L_0
  if (n == 0) return lm2;
  double lm1 = 1.0 + static_cast<double>(k) - x;  // L_1
  for (unsigned m = 2; m <= n; ++m) {
    double dm = static_cast<double>(m);
    double dk = static_cast<double>(k);
    double cur = ((2.0 * dm - 1.0 + dk - x) * lm1 - (dm - 1.0 + dk) * lm2) / dm;
    lm2 = lm1;
    lm1 = cur;
  }
  return lm1;
}

double laguerre(unsigned n, double x) { return assoc_laguerre(n, 0, x); }

double hermite_function(unsigned n, double x) {
  const double pi_quarter = 0.75112554446494248;  // pi^{-1/4}
  double f0 = pi_quarter * std::exp(-0.5 * x * x);
  if (n == 0) return f0;
  double f1 = std::sqrt(2.0) * x * f0;
  for (unsigned m = 2; m <= n; ++m) {
    double dm = static_cast<double>(m);
    double cur = std::sqrt(2.0 / dm) * x * f1 - std::sqrt((dm - 1.0) / dm) * f0;
    f0 = f1;
    f1 = cur;
  }
  return f1;
}

std::complex<double> displaced_overlap(unsigned n, unsigned m, std::complex<double> alpha) {
  double x = std::norm(alpha);
  if (x == 0.0) return (m == n) ? 1.0 : 0.0;

  unsigned lo = std::min(n, m);
  unsigned hi = std::max(n, m);
  unsigned diff = hi - lo;
  // sqrt(lo!/hi!) |alpha|^{hi-lo} e^{-x/2} without intermediate overflow
  double log_mag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) +
                   0.5 * diff * std::log(x) - 0.5 * x;
  double mag = std::exp(log_mag) * assoc_laguerre(lo, diff, x);

  double phi0 = std::arg(alpha);
  if (m >= n) {
    // phase of alpha^{m-n}
    return std::polar(mag, diff * phi0);
  }
  // phase of (-conj(alpha))^{n-m}
  double sign = (diff % 2 == 0) ? 1.0 : -1.0;
  return sign * std::polar(mag, -static_cast<double>(diff) * phi0);
}

double survival_probability(unsigned n, double e_c) {
  if (e_c < 0.0) throw std::invalid_argument("survival_probability: e_c must be >= 0");
  double l = laguerre(n, e_c);
  return std::exp(-e_c) * l * l;
}

}  // namespace ddpo
