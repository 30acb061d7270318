#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddpo/ode.hpp"

using namespace ddpo;

TEST_CASE("exponential growth to machine-level accuracy") {
  auto rhs = [](double, const double* y, double* dy) { dy[0] = y[0]; };
  std::vector<double> y{1.0};
  ode::integrate(rhs, y, 0.0, 5.0, {},
                 [](const ode::DenseStep&, const std::vector<double>&) {
                   return ode::StepAction::kContinue;
                 });
  CHECK(y[0] == doctest::Approx(std::exp(5.0)).epsilon(1e-9));
}

TEST_CASE("harmonic oscillator and dense output accuracy") {
  auto rhs = [](double, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  double max_err = 0;
  std::vector<double> y{1.0, 0.0};
  ode::integrate(rhs, y, 0.0, 20.0, {},
                 [&](const ode::DenseStep& step, const std::vector<double>&) {
                   for (int i = 1; i <= 4; ++i) {
                     double t = step.t0 + (step.t1 - step.t0) * i / 4.0;
                     max_err = std::max(max_err, std::abs(step.eval(0, t) - std::cos(t)));
                   }
                   return ode::StepAction::kContinue;
                 });
  CHECK(y[0] == doctest::Approx(std::cos(20.0)).epsilon(1e-8));
  CHECK(y[1] == doctest::Approx(-std::sin(20.0)).epsilon(1e-8));
  CHECK(max_err < 1e-8);
}

TEST_CASE("uniform sampling lands on the requested grid") {
  auto rhs = [](double t, const double*, double* dy) { dy[0] = std::cos(t); };
  auto sol = ode::integrate_sampled(rhs, {0.0}, 0.0, 3.0, 0.25);
  REQUIRE(sol.times.size() == 13);
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    CHECK(sol.times[i] == doctest::Approx(0.25 * i));
    CHECK(sol.rows[i][0] == doctest::Approx(std::sin(sol.times[i])).epsilon(1e-9));
  }
}

TEST_CASE("finite-time blow-up raises step-size underflow") {
  // y' = y^2 from y(0)=1 diverges at t=1
  auto rhs = [](double, const double* y, double* dy) { dy[0] = y[0] * y[0]; };
  std::vector<double> y{1.0};
  double t_fail = 0;
  try {
    ode::integrate(rhs, y, 0.0, 2.0, {},
                   [](const ode::DenseStep&, const std::vector<double>&) {
                     return ode::StepAction::kContinue;
                   });
    FAIL("expected StepSizeUnderflow");
  } catch (const ode::StepSizeUnderflow& e) {
    t_fail = e.time;
  }
  CHECK(t_fail == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("observer stop ends the integration") {
  auto rhs = [](double, const double* y, double* dy) { dy[0] = y[0]; };
  std::vector<double> y{1.0};
  double stopped_at = -1;
  ode::integrate(rhs, y, 0.0, 50.0, {},
                 [&](const ode::DenseStep& step, const std::vector<double>& cur) {
                   if (cur[0] > 10.0) {
                     stopped_at = step.t1;
                     return ode::StepAction::kStop;
                   }
                   return ode::StepAction::kContinue;
                 });
  CHECK(stopped_at > 0);
  CHECK(stopped_at < 3.0);
}

TEST_CASE("zero-length horizon is a no-op") {
  auto rhs = [](double, const double* y, double* dy) { dy[0] = y[0]; };
  auto sol = ode::integrate_sampled(rhs, {2.0}, 0.0, 0.0, 0.5);
  REQUIRE(sol.times.size() == 1);
  CHECK(sol.rows[0][0] == 2.0);
}
