#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddpo/coeffs.hpp"
#include "ddpo/expr.hpp"

using namespace ddpo;

TEST_CASE("parsed expressions evaluate with standard precedence") {
  CHECK(TimeFunction::parse("exp(-2*0.1*t)")(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(TimeFunction::parse("1+0.2*sin(2*t)")(0.0) == doctest::Approx(1.0).epsilon(1e-15));

  // independent floating-point evaluation of the same formula
  double t = M_PI / 1.6;
  CHECK(TimeFunction::parse("2*cos(0.8*t)")(t) ==
        doctest::Approx(2.0 * std::cos(0.8 * t)).epsilon(1e-15));

  CHECK(TimeFunction::parse("2+3*4")(0.0) == doctest::Approx(14.0));
  CHECK(TimeFunction::parse("(2+3)*4")(0.0) == doctest::Approx(20.0));
  CHECK(TimeFunction::parse("2^3^1")(0.0) == doctest::Approx(8.0));
  CHECK(TimeFunction::parse("-2^2")(0.0) == doctest::Approx(-4.0));
  CHECK(TimeFunction::parse("2*t^2")(3.0) == doctest::Approx(18.0));
  CHECK(TimeFunction::parse("1e-3 + 2E+1")(0.0) == doctest::Approx(20.001));
  CHECK(TimeFunction::parse("sqrt(4*t)")(4.0) == doctest::Approx(4.0));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(TimeFunction::parse("1+*2"), ParseError);
  CHECK_THROWS_AS(TimeFunction::parse("sin(t"), ParseError);
  CHECK_THROWS_AS(TimeFunction::parse("2*(1+t"), ParseError);
  CHECK_THROWS_AS(TimeFunction::parse(""), ParseError);
  CHECK_THROWS_AS(TimeFunction::parse("1 2"), ParseError);

  try {
    TimeFunction::parse("1+foo(t)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
}

TEST_CASE("division by zero surfaces as an evaluation error") {
  auto f = TimeFunction::parse("1/t");
  CHECK(f(2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(f(0.0), EvalError);
}

TEST_CASE("symbolic derivative matches central differences") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uni(0.05, 20.0);

  const char* exprs[] = {
      "exp(-0.2*t)",
      "1+0.2*sin(2*t)",
      "2*cos(0.8*t+0.3)",
      "t^3 - 2*t + 1",
      "sqrt(t+1)*exp(-0.1*t)",
      "sin(t)*cos(2*t)/(t+2)",
      "exp(-t/10)/(1+0.5*sin(t))",
      "t^2.5",
  };
  for (const char* src : exprs) {
    auto f = TimeFunction::parse(src);
    auto df = f.derivative();
    for (int i = 0; i < 100; ++i) {
      double t = uni(rng);
      double h = 1e-5 * std::max(1.0, std::abs(t));
      double fd = (f(t + h) - f(t - h)) / (2.0 * h);
      double scale = std::max({1.0, std::abs(fd)});
      CHECK(std::abs(df(t) - fd) / scale < 1e-6);
    }
  }
}

TEST_CASE("derivative of a general power uses the log route") {
  auto f = TimeFunction::pow(TimeFunction::parse("t+1"), TimeFunction::parse("t"));
  auto df = f.derivative();
  double t = 1.5, h = 1e-6;
  double fd = (f(t + h) - f(t - h)) / (2.0 * h);
  CHECK(df(t) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("piecewise definitions are left-closed and use the right segment") {
  auto f = TimeFunction::piecewise({{0.0, TimeFunction::constant(1.0)},
                                    {1.0, TimeFunction::parse("t")},
                                    {2.0, TimeFunction::constant(-1.0)}});
  CHECK(f(0.5) == doctest::Approx(1.0));
  CHECK(f(1.0) == doctest::Approx(1.0));  // breakpoint takes the right segment: t at t=1
  CHECK(f(1.5) == doctest::Approx(1.5));
  CHECK(f(2.0) == doctest::Approx(-1.0));
  CHECK(f(5.0) == doctest::Approx(-1.0));

  auto df = f.derivative();
  CHECK(df(0.5) == doctest::Approx(0.0));
  CHECK(df(1.5) == doctest::Approx(1.0));
}

TEST_CASE("named factories build the documented families") {
  auto e = TimeFunction::exponential(-0.4);
  CHECK(e(1.0) == doctest::Approx(std::exp(-0.4)).epsilon(1e-15));
  auto h = TimeFunction::harmonic(2.0, 0.8, 0.25);
  CHECK(h(1.3) == doctest::Approx(2.0 * std::cos(0.8 * 1.3 + 0.25)).epsilon(1e-15));
  auto m = TimeFunction::modulated(1.0, 0.2, 2.0);
  CHECK(m(0.7) == doctest::Approx(1.0 + 0.2 * std::sin(1.4)).epsilon(1e-15));
}

TEST_CASE("caldirola-kanai preset") {
  auto cs = caldirola_kanai(0.2, 0.2, 0.8, 0.0);
  CHECK(cs.a(1.0) == doctest::Approx(std::exp(-0.4)).epsilon(1e-14));
  CHECK(cs.b(1.0) == doctest::Approx(std::exp(0.4)).epsilon(1e-14));
  CHECK(cs.c(5.0) == 0.0);
  CHECK(cs.d(5.0) == 0.0);
  CHECK(cs.e(0.0) == doctest::Approx(-0.2));
  CHECK(cs.f(5.0) == 0.0);

  // a*b = 1 to rounding for all t
  for (double t : {0.0, 0.37, 1.0, 4.2, 17.9, 42.0})
    CHECK(std::abs(cs.a(t) * cs.b(t) - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon());

  CHECK_THROWS_AS(caldirola_kanai(-0.1, 0, 0, 0), std::invalid_argument);

  // undamped limit reduces to constant unit coefficients
  auto undamped = caldirola_kanai(0.0, 0.2, 0.8, 0.0);
  for (double t : {0.0, 1.0, 10.0}) {
    CHECK(undamped.a(t) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(undamped.b(t) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("parametric preset and zero-mass rejection") {
  auto cs = parametric_oscillator(TimeFunction::constant(1.0),
                                  TimeFunction::parse("1+0.2*sin(2*t)"),
                                  TimeFunction::constant(0.0), 30.0);
  CHECK(cs.b(0.0) == doctest::Approx(1.0));
  CHECK(cs.a(0.0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(parametric_oscillator(TimeFunction::parse("1-t"), TimeFunction::constant(1.0),
                                        TimeFunction::constant(0.0), 2.0),
                  std::invalid_argument);
}

TEST_CASE("classical-form helper coefficients") {
  auto cs = caldirola_kanai(0.2, 0.0, 0.0, 0.0);
  // chi = -a'/a = 2 gamma, xi = a b = 1, eta = 0
  CHECK(cs.chi(1.7) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(cs.xi(1.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cs.eta(1.7) == doctest::Approx(0.0).epsilon(1e-12));
}
