#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddpo/classical.hpp"
#include "helpers.hpp"

using namespace ddpo;

TEST_CASE("steady response amplitude and lag") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.1;
  p.f0 = 2.0;
  p.omega_drive = 0.8;
  SteadyResponse r = steady_response(p);

  // direct evaluation of the closed form
  double denom = std::pow(1.0 - 0.64, 2) + std::pow(2.0 * 0.1 * 0.8, 2);
  CHECK(r.amplitude == doctest::Approx(2.0 / std::sqrt(denom)).epsilon(1e-14));
  CHECK(r.amplitude == doctest::Approx(5.0768).epsilon(1e-4));
  CHECK(r.phase == doctest::Approx(-0.4182).epsilon(1e-3));
  CHECK(r.phase > -M_PI);
  CHECK(r.phase <= 0.0);

  // A2^2 = X1^2 + X2^2
  CHECK(r.amplitude * r.amplitude ==
        doctest::Approx(r.in_phase * r.in_phase + r.out_phase * r.out_phase).epsilon(1e-12));
}

TEST_CASE("static deflection at zero drive frequency") {
  DdhoParams p;
  p.omega0 = 2.0;
  p.gamma = 0.3;
  p.f0 = 1.5;
  p.omega_drive = 0.0;
  p.phi = 0.7;
  SteadyResponse r = steady_response(p);
  CHECK(r.amplitude == doctest::Approx(1.5 / 4.0).epsilon(1e-14));
  CHECK(r.phase == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("undamped quadratures at twice the frequency") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.0;
  p.f0 = 1.3;
  p.omega_drive = 2.0;
  p.phi = 0.4;
  SteadyResponse r = steady_response(p);
  CHECK(r.out_phase == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.in_phase == doctest::Approx(-p.f0 * std::cos(p.phi) / 3.0).epsilon(1e-12));
}

TEST_CASE("undamped exact resonance is rejected") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.0;
  p.f0 = 1.0;
  p.omega_drive = 1.0;
  CHECK_THROWS_AS(steady_response(p), UnboundedResonance);
}

TEST_CASE("resonant frequency formula and domain") {
  CHECK(resonant_frequency(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(resonant_frequency(1.0, 0.1) == doctest::Approx(std::sqrt(0.98)).epsilon(1e-14));
  CHECK(resonant_frequency(1.0, 0.1) == doctest::Approx(0.98995).epsilon(1e-5));
  CHECK_THROWS_AS(resonant_frequency(1.0, 1.0 / std::sqrt(2.0)), std::domain_error);
}

TEST_CASE("response maximum sits at the resonant frequency") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.1;
  p.f0 = 1.0;
  double best_w = 0, best_a = -1;
  for (double w = 0.5; w <= 1.5; w += 1e-4) {
    p.omega_drive = w;
    double a = steady_response(p).amplitude;
    if (a > best_a) {
      best_a = a;
      best_w = w;
    }
  }
  CHECK(std::abs(best_w - resonant_frequency(1.0, 0.1)) < 1.5e-4);
}

TEST_CASE("in-phase quadrature changes sign at the intrinsic frequency") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.05;
  p.f0 = 1.0;
  p.omega_drive = 0.999;
  double below = steady_response(p).in_phase;
  p.omega_drive = 1.001;
  double above = steady_response(p).in_phase;
  CHECK(below > 0);
  CHECK(above < 0);
  p.omega_drive = 1.0;
  CHECK(steady_response(p).in_phase == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(steady_response(p).phase == doctest::Approx(-M_PI / 2).epsilon(1e-12));
}

TEST_CASE("pure damped mode") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.1;
  p.x0 = 1.0;
  p.p0 = -0.1;
  double w = std::sqrt(1.0 - 0.01);
  for (double t : {0.0, 0.5, 2.0, 7.3, 20.0}) {
    PhasePoint s = ddho_solution(p, t);
    CHECK(s.x == doctest::Approx(std::exp(-0.1 * t) * std::cos(w * t)).epsilon(1e-13));
  }
}

TEST_CASE("long-time orbit collapses onto the steady ellipse") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.1;
  p.f0 = 2.0;
  p.omega_drive = 1.4;
  p.x0 = 8.0;
  p.p0 = 0.0;
  SteadyResponse r = steady_response(p);
  for (double t = 95.0; t < 120.0; t += 0.37) {
    double xi = r.in_phase * std::cos(1.4 * t) + r.out_phase * std::sin(1.4 * t);
    CHECK(std::abs(ddho_solution(p, t).x - xi) < 1e-3);
  }
}

TEST_CASE("critically damped and overdamped branches") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  p.x0 = 1.0;
  p.p0 = 0.0;
  // x = (1 + t) e^{-t}
  CHECK(ddho_solution(p, 2.0).x == doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-12));

  p.gamma = 2.0;
  double s = std::sqrt(3.0);
  double rp = -2.0 + s, rm = -2.0 - s;
  double c1 = -rm / (rp - rm), c2 = rp / (rp - rm);
  CHECK(ddho_solution(p, 1.5).x ==
        doctest::Approx(c1 * std::exp(rp * 1.5) + c2 * std::exp(rm * 1.5)).epsilon(1e-12));
}

TEST_CASE("general integration reproduces the exponential-mass dynamics") {
  auto cs = caldirola_kanai(0.2, 0.2, 0.8, 0.0);
  auto traj = integrate_classical(cs, 1.0, 0.0, 50.0, 0.05);

  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.2;
  p.f0 = 0.2;
  p.omega_drive = 0.8;
  p.x0 = 1.0;
  p.p0 = 0.0;
  double max_err = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    max_err = std::max(max_err, std::abs(traj.x[i] - ddho_solution(p, traj.times[i]).x));
  }
  CHECK(max_err < 1e-6);
  CHECK(traj.action[0] == 0.0);
}

TEST_CASE("free oscillator trajectory and action quadrature") {
  auto cs = CoefficientSet::make(TimeFunction::constant(1), TimeFunction::constant(1),
                                 TimeFunction::constant(0), TimeFunction::constant(0),
                                 TimeFunction::constant(0), TimeFunction::constant(0));
  auto traj = integrate_classical(cs, 1.0, 0.0, 10.0, 0.01);
  for (std::size_t i = 0; i < traj.times.size(); i += 37) {
    CHECK(traj.x[i] == doctest::Approx(std::cos(traj.times[i])).epsilon(1e-8));
    CHECK(traj.p[i] == doctest::Approx(-std::sin(traj.times[i])).epsilon(1e-8));
  }
  // s = int (cos^2 - sin^2)/2 = sin(2t)/4
  for (std::size_t i = 0; i < traj.times.size(); i += 53) {
    CHECK(traj.action[i] ==
          doctest::Approx(0.25 * std::sin(2.0 * traj.times[i])).epsilon(1e-7));
  }
}

TEST_CASE("constant scalar term integrates to a linear action") {
  auto cs = CoefficientSet::make(TimeFunction::constant(1), TimeFunction::constant(1),
                                 TimeFunction::constant(0), TimeFunction::constant(0),
                                 TimeFunction::constant(0), TimeFunction::constant(0.7));
  auto traj = integrate_classical(cs, 0.0, 0.0, 5.0, 0.5);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(traj.x[i] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(traj.action[i] == doctest::Approx(0.7 * traj.times[i]).epsilon(1e-10));
  }
}

TEST_CASE("periodogram finds a pure tone within one bin") {
  double dt = 0.05;
  std::vector<double> x;
  for (int i = 0; i < 4000; ++i) x.push_back(std::cos(1.3 * i * dt));
  Spectrum sp = power_spectrum(x, dt);
  std::size_t peak = 0;
  for (std::size_t i = 1; i < sp.power.size(); ++i)
    if (sp.power[i] > sp.power[peak]) peak = i;
  double bin = sp.freq[1] - sp.freq[0];
  CHECK(std::abs(sp.freq[peak] - 1.3) <= bin);
  CHECK(sp.power[peak] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("weak damping keeps a double-peak spectrum") {
  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 1e-5;
  p.f0 = 1.0;
  p.omega_drive = 1.2;
  p.x0 = 0.0;
  p.p0 = 0.2;
  double dt = 0.05;
  std::vector<double> x;
  for (int i = 0; i < 16384; ++i) x.push_back(ddho_solution(p, i * dt).x);
  Spectrum sp = power_spectrum(x, dt);
  double bin = sp.freq[1] - sp.freq[0];

  auto local_peak_near = [&](double w) {
    std::size_t best = 0;
    double best_p = -1;
    for (std::size_t i = 0; i < sp.freq.size(); ++i) {
      if (std::abs(sp.freq[i] - w) < 5 * bin && sp.power[i] > best_p) {
        best_p = sp.power[i];
        best = i;
      }
    }
    return best;
  };
  std::size_t p1 = local_peak_near(1.0), p2 = local_peak_near(1.2);
  double background = sp.power[local_peak_near(1.6)];
  CHECK(sp.power[p1] > 100 * background);
  CHECK(sp.power[p2] > 100 * background);
  CHECK(std::abs(sp.freq[p1] - 1.0) <= bin);
  CHECK(std::abs(sp.freq[p2] - 1.2) <= bin);
}

TEST_CASE("zero series gives zero power and short input is rejected") {
  std::vector<double> zeros(256, 0.0);
  Spectrum sp = power_spectrum(zeros, 0.1);
  for (double v : sp.power) CHECK(v == 0.0);
  CHECK_THROWS_AS(power_spectrum(std::vector<double>{1.0}, 0.1), std::invalid_argument);
}

TEST_CASE("non-uniform sampling is rejected") {
  std::vector<double> times{0.0, 0.1, 0.25, 0.3};
  std::vector<double> vals{0.0, 1.0, 0.0, -1.0};
  CHECK_THROWS_AS(power_spectrum(times, vals), std::invalid_argument);

  std::vector<double> uniform{0.0, 0.1, 0.2, 0.3};
  CHECK_NOTHROW(power_spectrum(uniform, vals));
}
