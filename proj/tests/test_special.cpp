#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ddpo/special.hpp"

using namespace ddpo;

namespace {

double binom(double a, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r *= (a - (k - i)) / static_cast<double>(i);
  return r;
}

// brute-force series oracle for the associated Laguerre polynomial
double laguerre_series(unsigned n, unsigned k, double x) {
  double sum = 0, xp = 1, fact = 1;
  for (unsigned i = 0; i <= n; ++i) {
    if (i > 0) {
      xp *= -x;
      fact *= i;
    }
    sum += binom(n + k, n - i) * xp / fact;
  }
  return sum;
}

}  // namespace

TEST_CASE("associated Laguerre recurrence matches the series") {
  for (unsigned n : {0u, 1u, 2u, 5u, 11u}) {
    for (unsigned k : {0u, 1u, 3u, 7u}) {
      for (double x : {0.0, 0.3, 1.0, 2.7, 9.0}) {
        CHECK(assoc_laguerre(n, k, x) ==
              doctest::Approx(laguerre_series(n, k, x)).epsilon(1e-10));
      }
    }
  }
  CHECK(laguerre(1, 1.0) == doctest::Approx(0.0));
  CHECK(laguerre(2, 1.0) == doctest::Approx(-0.5));
}

TEST_CASE("hermite functions match explicit low orders and stay finite high up") {
  const double pi4 = std::pow(M_PI, -0.25);
  for (double x : {-2.0, -0.3, 0.0, 0.9, 3.1}) {
    double g = std::exp(-0.5 * x * x);
    CHECK(hermite_function(0, x) == doctest::Approx(pi4 * g).epsilon(1e-13));
    CHECK(hermite_function(1, x) ==
          doctest::Approx(pi4 * std::sqrt(2.0) * x * g).epsilon(1e-13));
    CHECK(hermite_function(2, x) ==
          doctest::Approx(pi4 / std::sqrt(2.0) * (2.0 * x * x - 1.0) * g).epsilon(1e-12));
  }
  CHECK(std::isfinite(hermite_function(200, 3.0)));
}

TEST_CASE("hermite functions are orthonormal under quadrature") {
  double dx = 0.01;
  for (unsigned a : {0u, 1u, 3u}) {
    for (unsigned b : {0u, 1u, 3u}) {
      double acc = 0;
      for (double x = -15.0; x <= 15.0; x += dx) acc += hermite_function(a, x) * hermite_function(b, x) * dx;
      CHECK(acc == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("displaced ground-state overlap") {
  std::complex<double> alpha(0.6, -0.8);
  auto c = displaced_overlap(0, 0, alpha);
  CHECK(std::abs(c) == doctest::Approx(std::exp(-0.5 * std::norm(alpha))).epsilon(1e-13));
  CHECK(std::abs(displaced_overlap(3, 3, {0.0, 0.0})) == doctest::Approx(1.0));
  CHECK(std::abs(displaced_overlap(2, 3, {0.0, 0.0})) == doctest::Approx(0.0));
}

TEST_CASE("survival amplitude vanishes at the Laguerre zero") {
  // |<1|D|1>|^2 = e^{-1} L_1(1)^2 = 0 at |alpha|^2 = 1
  auto c = displaced_overlap(1, 1, {1.0, 0.0});
  CHECK(std::abs(c) < 1e-14);
  CHECK(survival_probability(1, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("displaced-number expansion is complete") {
  std::complex<double> alpha(1.3, 0.7);
  for (unsigned n : {0u, 2u}) {
    double total = 0;
    for (unsigned m = 0; m <= 60; ++m) total += std::norm(displaced_overlap(n, m, alpha));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("displacement unitarity relates conjugate overlaps") {
  std::complex<double> alpha(0.9, -0.4);
  for (unsigned n : {0u, 1u, 4u}) {
    for (unsigned m : {0u, 2u, 5u}) {
      auto fwd = displaced_overlap(n, m, alpha);
      auto bwd = displaced_overlap(m, n, -alpha);
      CHECK(fwd.real() == doctest::Approx(std::conj(bwd).real()).epsilon(1e-12));
      CHECK(fwd.imag() == doctest::Approx(std::conj(bwd).imag()).epsilon(1e-12));
    }
  }
}

TEST_CASE("survival probability values") {
  CHECK(survival_probability(0, 0.0) == doctest::Approx(1.0));
  CHECK(survival_probability(3, 0.0) == doctest::Approx(1.0));
  CHECK(survival_probability(0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(survival_probability(0, -0.5), std::invalid_argument);
}
