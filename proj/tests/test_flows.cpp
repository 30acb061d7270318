#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddpo/classical.hpp"
#include "ddpo/flows.hpp"
#include "helpers.hpp"

using namespace ddpo;
using ddpo::testing::bisect;

namespace {

CoefficientSet unit_oscillator() {
  return CoefficientSet::make(TimeFunction::constant(1), TimeFunction::constant(1),
                              TimeFunction::constant(0), TimeFunction::constant(0),
                              TimeFunction::constant(0), TimeFunction::constant(0));
}

}  // namespace

TEST_CASE("center flow of the free oscillator") {
  auto traj = evolve_h4(unit_oscillator(), {1.0, 0.0, 0.0}, 6.0, 0.05);
  for (std::size_t i = 0; i < traj.times.size(); i += 7) {
    double t = traj.times[i];
    CHECK(traj.states[i].alpha == doctest::Approx(std::cos(t)).epsilon(1e-8));
    CHECK(traj.states[i].beta == doctest::Approx(std::sin(t)).epsilon(1e-8));
  }
  // s = sin(2t)/4 vanishes at t = pi
  auto at_pi = evolve_h4(unit_oscillator(), {1.0, 0.0, 0.0}, M_PI, M_PI / 4);
  CHECK(at_pi.states.back().s == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("simplified and unsimplified action rates agree") {
  auto cs = caldirola_kanai(0.15, 0.3, 0.9, 0.2);
  auto traj = evolve_h4(cs, {1.3, -0.4, 0.0}, 5.0, 0.25);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double t = traj.times[i];
    double alpha = traj.states[i].alpha, beta = traj.states[i].beta;
    double a = cs.a(t), b = cs.b(t), c = cs.c(t), d = cs.d(t), e = cs.e(t), f = cs.f(t);
    double dalpha = c * alpha - a * beta + d;
    double full = 0.5 * a * beta * beta + 0.5 * b * alpha * alpha - c * alpha * beta -
                  d * beta + e * alpha + f + dalpha * beta;
    double reduced = 0.5 * b * alpha * alpha - 0.5 * a * beta * beta + e * alpha + f;
    CHECK(full == doctest::Approx(reduced).epsilon(1e-12));
  }
}

TEST_CASE("driven center flow obeys the undamped classical equation") {
  auto cs = caldirola_kanai(0.0, 0.2, 0.8, 0.0);
  auto traj = evolve_h4(cs, {0.0, 0.0, 0.0}, 10.0, 0.05);

  DdhoParams p;
  p.omega0 = 1.0;
  p.gamma = 0.0;
  p.f0 = 0.2;
  p.omega_drive = 0.8;
  for (std::size_t i = 0; i < traj.times.size(); i += 11) {
    PhasePoint ref = ddho_solution(p, traj.times[i]);
    CHECK(std::abs(traj.states[i].alpha - ref.x) < 1e-7);
    CHECK(std::abs(-traj.states[i].beta - ref.p) < 1e-7);
  }
}

TEST_CASE("center flow equals the second-order classical route") {
  auto cs = caldirola_kanai(0.2, 0.2, 0.8, 0.0);
  auto h4 = evolve_h4(cs, {1.0, 0.0, 0.0}, 20.0, 0.1);
  auto traj = integrate_classical(cs, 1.0, 0.0, 20.0, 0.1);
  REQUIRE(h4.times.size() == traj.times.size());
  for (std::size_t i = 0; i < h4.times.size(); ++i) {
    CHECK(std::abs(h4.states[i].alpha - traj.x[i]) < 1e-7);
    CHECK(std::abs(h4.states[i].s - traj.action[i]) < 1e-7);
  }
}

TEST_CASE("zero-K theta flow of the free oscillator has the tangent pole") {
  auto res = evolve_su2(unit_oscillator(), KSet::zero(), Su2State{}, 3.0, 0.01);
  CHECK(res.truncated);
  REQUIRE(!res.events.empty());
  CHECK(res.events.front().parameter == "theta_plus");
  CHECK(res.events.front().time == doctest::Approx(M_PI / 2).epsilon(1e-4));
  for (std::size_t i = 0; i < res.times.size(); i += 13) {
    double t = res.times[i];
    if (std::abs(std::cos(t)) < 0.05) continue;  // too close to the pole for tight tolerances
    CHECK(res.states[i].theta_plus.real() == doctest::Approx(std::tan(t)).epsilon(1e-7));
    CHECK(res.states[i].theta_zero.real() ==
          doctest::Approx(std::log(std::cos(t))).epsilon(1e-7));
    CHECK(res.states[i].theta_minus.real() == doctest::Approx(std::tan(t)).epsilon(1e-7));
    CHECK(res.states[i].theta_plus.imag() == 0.0);
    CHECK(res.states[i].theta_zero.imag() == 0.0);
    CHECK(res.states[i].theta_minus.imag() == 0.0);
  }
}

TEST_CASE("exponential-mass divergence time matches the closed-form root") {
  double gamma = 0.1;
  auto cs = caldirola_kanai(gamma, 0.0, 0.0, 0.0);
  auto res = evolve_su2(cs, KSet::zero(), Su2State{}, 5.0, 0.01);
  REQUIRE(res.truncated);
  double t_flow = res.events.front().time;

  // independent bracketing root of cos(wt) + (gamma/w) sin(wt) = 0
  double w = std::sqrt(1.0 - gamma * gamma);
  double t_root = bisect(
      [&](double t) { return std::cos(w * t) + gamma / w * std::sin(w * t); }, 1.0, 2.5);
  CHECK(t_root == doctest::Approx(1.6794).epsilon(1e-4));
  CHECK(std::abs(t_flow - t_root) < 1e-3);
  CHECK(std::abs(ck_divergence_times(gamma, 1)[0] - t_root) < 1e-10);
}

TEST_CASE("harmonic-frame flow on the exponential-mass model contracts theta0") {
  auto cs = caldirola_kanai(0.2, 0.0, 0.0, 0.0);
  auto res = evolve_su2(cs, KSet::constants(1.0, 1.0, 0.0), Su2State{}, 12.0, 0.1);
  CHECK(!res.truncated);
  // after the initial transient the dilation parameter decreases steadily
  // (compared across two-time-unit windows to ignore small ripples)
  for (std::size_t i = 20; i + 20 < res.times.size(); i += 20) {
    if (res.times[i] < 4.0) continue;
    CHECK(res.states[i + 20].theta_zero.real() < res.states[i].theta_zero.real());
  }
  CHECK(res.states.back().theta_zero.real() < -0.5);
}

TEST_CASE("K flow fixed point and closed form") {
  auto cs = unit_oscillator();
  auto fixed = evolve_K(cs, {2.0, 2.0, 0.0}, 10.0, 0.5);
  for (const auto& k : fixed.k) {
    CHECK(k[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(k[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(k[2] == doctest::Approx(0.0).epsilon(1e-9));
  }

  auto traj = evolve_K(cs, {1.0, 0.0, 0.0}, 8.0, 0.05);
  for (std::size_t i = 0; i < traj.times.size(); i += 9) {
    double t = traj.times[i];
    double c = std::cos(t), s = std::sin(t);
    CHECK(traj.k[i][0] == doctest::Approx(c * c).epsilon(1e-8));
    CHECK(traj.k[i][1] == doctest::Approx(s * s).epsilon(1e-8));
    CHECK(traj.k[i][2] == doctest::Approx(s * c).epsilon(1e-8));
    // first integral K1 K2 - K3^2
    CHECK(std::abs(traj.k[i][0] * traj.k[i][1] - traj.k[i][2] * traj.k[i][2]) < 1e-8);
  }
}

TEST_CASE("coefficients do not solve their own invariance flow for exponential mass") {
  double gamma = 0.2;
  auto cs = caldirola_kanai(gamma, 0.0, 0.0, 0.0);
  // residual of (a, b, c) in the K equations is nonzero: K1' should be
  // 2c K1 - 2a K3 = 0 while a' = -2 gamma a != 0
  double residual = cs.da(0.0) - (2.0 * cs.c(0.0) * cs.a(0.0) - 2.0 * cs.a(0.0) * cs.c(0.0));
  CHECK(std::abs(residual) == doctest::Approx(2.0 * gamma).epsilon(1e-12));

  auto traj = evolve_K(cs, {cs.a(0.0), cs.b(0.0), cs.c(0.0)}, 3.0, 0.1);
  double max_dev = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    max_dev = std::max(max_dev, std::abs(traj.k[i][1] - cs.b(traj.times[i])));
  CHECK(max_dev > 0.1);
}

TEST_CASE("linear route reproduces the tangent solution") {
  auto rr = riccati_via_linear(unit_oscillator(), 3.0, 0.01);
  REQUIRE(!rr.u.events.empty());
  CHECK(rr.u.events.front().time == doctest::Approx(M_PI / 2).epsilon(1e-9));
  for (std::size_t i = 0; i < rr.thetas.times.size(); i += 17) {
    double t = rr.thetas.times[i];
    if (std::abs(std::cos(t)) < 0.05) continue;
    CHECK(rr.thetas.states[i].theta_plus.real() == doctest::Approx(std::tan(t)).epsilon(1e-8));
  }
}

TEST_CASE("linear route on the exponential-mass model is the damped mode") {
  double gamma = 0.2;
  auto rr = riccati_via_linear(caldirola_kanai(gamma, 0.0, 0.0, 0.0), 1.4, 0.01);
  for (std::size_t i = 0; i < rr.u.times.size(); i += 11) {
    double t = rr.u.times[i];
    CHECK(rr.u.value[i] == doctest::Approx(ck_sigma(gamma, 1.0, t)).epsilon(1e-8));
  }
}

TEST_CASE("zero-K flow and linear route agree on random smooth coefficients") {
  std::mt19937 rng(20260810);
  for (int trial = 0; trial < 20; ++trial) {
    auto cs = ddpo::testing::random_smooth_coeffs(rng);
    auto rr = riccati_via_linear(cs, 6.0, 0.05);
    auto direct = evolve_su2(cs, KSet::zero(), Su2State{}, 6.0, 0.05);
    std::size_t n = std::min(rr.thetas.times.size(), direct.times.size());
    REQUIRE(n > 10);
    double t_pole = rr.u.events.empty() ? 1e9 : rr.u.events.front().time;
    for (std::size_t i = 0; i < n; ++i) {
      double t = rr.thetas.times[i];
      if (t > 0.9 * t_pole) break;
      double tp_a = rr.thetas.states[i].theta_plus.real();
      double tp_b = direct.states[i].theta_plus.real();
      CHECK(std::abs(tp_a - tp_b) / (1.0 + std::abs(tp_b)) < 1e-6);
      double t0_a = rr.thetas.states[i].theta_zero.real();
      double t0_b = direct.states[i].theta_zero.real();
      CHECK(std::abs(t0_a - t0_b) / (1.0 + std::abs(t0_b)) < 1e-6);
      double tm_a = rr.thetas.states[i].theta_minus.real();
      double tm_b = direct.states[i].theta_minus.real();
      CHECK(std::abs(tm_a - tm_b) / (1.0 + std::abs(tm_b)) < 1e-6);
    }
  }
}

TEST_CASE("Ermakov fixed point") {
  double omega = 2.3;
  auto aux = ermakov_solve(unit_oscillator(), std::sqrt(omega), 0.0, omega, 10.0, 0.1);
  CHECK(!aux.truncated);
  for (double v : aux.value) CHECK(v == doctest::Approx(std::sqrt(omega)).epsilon(1e-9));
}

TEST_CASE("complex-branch auxiliary function stays positive for exponential mass") {
  auto cs = caldirola_kanai(0.1, 0.0, 0.0, 0.0);
  auto aux = ermakov_solve(cs, std::sqrt(3.0), 0.0, 1.0, 50.0, 0.05, ErmakovForm::kRiccati);
  CHECK(!aux.truncated);
  for (double v : aux.value) CHECK(v > 0.0);
}

TEST_CASE("complex zero-K branch matches the auxiliary closed forms") {
  double gamma = 0.1;
  double sigma0 = std::sqrt(3.0);
  auto cs = caldirola_kanai(gamma, 0.0, 0.0, 0.0);

  Su2State init;
  init.theta_plus = {0.0, -1.0 / (sigma0 * sigma0)};
  auto flow = evolve_su2(cs, KSet::zero(), init, 8.0, 0.02);
  CHECK(!flow.truncated);

  auto aux = ermakov_solve(cs, sigma0, 0.0, 1.0, 8.0, 0.02, ErmakovForm::kRiccati);
  REQUIRE(aux.times.size() >= flow.times.size());

  // Im theta0 = int a / sigma^2 by composite Simpson on the fine samples
  double quad = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < flow.times.size(); ++i) {
    double t = flow.times[i];
    double sigma = aux.value[i];
    double dsigma = aux.deriv[i];
    double a = cs.a(t);

    CHECK(std::abs(flow.states[i].theta_plus.real() - (-dsigma / (a * sigma))) < 1e-6);
    CHECK(std::abs(flow.states[i].theta_plus.imag() - (-1.0 / (sigma * sigma))) < 1e-6);
    CHECK(std::abs(flow.states[i].theta_zero.real() - std::log(sigma / sigma0)) < 1e-6);
    CHECK(std::abs(flow.states[i].theta_zero.imag() - quad) < 1e-6);
    ++checked;

    if (i + 1 < flow.times.size()) {
      double h = flow.times[i + 1] - t;
      auto f = [&](std::size_t idx, double tt) {
        (void)idx;
        // midpoint values interpolated from the auxiliary solution
        double s = aux.interp_value(tt);
        return cs.a(tt) / (s * s);
      };
      quad += h / 6.0 * (a / (sigma * sigma) + 4.0 * f(0, t + 0.5 * h) + f(0, t + h));
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("K set from the auxiliary solution satisfies the invariance flow") {
  auto cs = parametric_oscillator(TimeFunction::constant(1), TimeFunction::parse("1+0.2*sin(2*t)"),
                                  TimeFunction::constant(0), 20.0);
  double omega = 1.0;
  auto aux = ermakov_solve(cs, 1.0, 0.0, omega, 20.0, 0.01);
  CHECK(!aux.truncated);
  auto ks = ks_from_rho(aux, cs, omega);

  for (std::size_t i = 0; i < aux.times.size(); i += 97) {
    double t = aux.times[i];
    double rho = aux.value[i], drho = aux.deriv[i], ddrho = aux.accel[i];
    double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    double da = cs.da(t), dc = cs.dc(t);
    double g = (c * rho - drho) / a;
    double dg = (dc * rho + c * drho - ddrho) / a - (c * rho - drho) * da / (a * a);

    double k1 = rho * rho, k2 = omega * omega / (rho * rho) + g * g, k3 = rho * g;
    double dk1 = 2.0 * rho * drho;
    double dk2 = -2.0 * omega * omega * drho / (rho * rho * rho) + 2.0 * g * dg;
    double dk3 = drho * g + rho * dg;

    CHECK(std::abs(dk1 - (2.0 * c * k1 - 2.0 * a * k3)) < 1e-6);
    CHECK(std::abs(dk2 - (2.0 * b * k3 - 2.0 * c * k2)) < 1e-6);
    CHECK(std::abs(dk3 - (b * k1 - a * k2)) < 1e-6);

    // algebraic first integral K1 K2 - K3^2 = Omega^2
    CHECK(k1 * k2 - k3 * k3 == doctest::Approx(omega * omega).epsilon(1e-10));

    auto kv = ks(t);
    CHECK(kv[0] == doctest::Approx(k1).epsilon(1e-10));
    CHECK(kv[1] == doctest::Approx(k2).epsilon(1e-10));
    CHECK(kv[2] == doctest::Approx(k3).epsilon(1e-10));
  }

  // constant-rho sanity: unit oscillator at the fixed point gives (O, O, 0)
  double om2 = 1.7;
  auto fixed = ermakov_solve(unit_oscillator(), std::sqrt(om2), 0.0, om2, 5.0, 0.1);
  auto kfixed = ks_from_rho(fixed, unit_oscillator(), om2);
  auto kv = kfixed(2.5);
  CHECK(kv[0] == doctest::Approx(om2).epsilon(1e-8));
  CHECK(kv[1] == doctest::Approx(om2).epsilon(1e-8));
  CHECK(kv[2] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("tracked and Ermakov frames integrate the same K trajectory") {
  auto cs = parametric_oscillator(TimeFunction::constant(1), TimeFunction::parse("1+0.2*sin(2*t)"),
                                  TimeFunction::constant(0), 15.0);
  auto tracked = evolve_su2_tracked(cs, Su2State{}, {1.0, 1.0, 0.0}, 15.0, 0.05);
  auto ermakov = evolve_su2_ermakov(cs, Su2State{}, 1.0, 0.0, 1.0, 15.0, 0.05);
  CHECK(!tracked.truncated);
  CHECK(!ermakov.truncated);
  REQUIRE(tracked.times.size() == ermakov.times.size());
  for (std::size_t i = 0; i < tracked.times.size(); i += 23) {
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(tracked.k[i][c] - ermakov.k[i][c]) < 1e-7);
    CHECK(std::abs(tracked.states[i].theta_zero.real() -
                   ermakov.states[i].theta_zero.real()) < 1e-7);
  }
}

TEST_CASE("underdamped auxiliary mode closed form") {
  CHECK(ck_sigma(0.0, 2.0, 0.7) == doctest::Approx(2.0 * std::cos(0.7)).epsilon(1e-14));
  auto roots = ck_divergence_times(0.0, 3);
  CHECK(roots[0] == doctest::Approx(M_PI / 2).epsilon(1e-14));
  CHECK(roots[1] == doctest::Approx(3 * M_PI / 2).epsilon(1e-14));
  CHECK(roots[2] == doctest::Approx(5 * M_PI / 2).epsilon(1e-14));

  // initial conditions sigma(0) = sigma0, sigma'(0) = 0
  double h = 1e-6;
  CHECK(ck_sigma(0.3, 1.4, 0.0) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK((ck_sigma(0.3, 1.4, h) - ck_sigma(0.3, 1.4, -h)) / (2 * h) ==
        doctest::Approx(0.0).epsilon(1e-8));

  CHECK_THROWS_AS(ck_sigma(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ck_divergence_times(1.2, 1), std::invalid_argument);
}

TEST_CASE("divergence-time ordering across the harmonic frame choices") {
  // the harmonic frame with Omega0 = 1 survives longer than Omega0 = 1.2
  auto cs = caldirola_kanai(0.2, 0.0, 0.0, 0.0);
  auto good = evolve_su2(cs, KSet::constants(1.0, 1.0, 0.0), Su2State{}, 40.0, 0.05);
  auto bad = evolve_su2(cs, KSet::constants(1.0, 1.44, 0.0), Su2State{}, 40.0, 0.05);
  double t_good = good.truncated ? good.events.front().time : 40.0;
  double t_bad = bad.truncated ? bad.events.front().time : 40.0;
  CHECK(t_bad < t_good);
}
