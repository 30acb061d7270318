#include "ddpo/coeffs.hpp"

#include <cmath>

namespace ddpo {

CoefficientSet CoefficientSet::make(TimeFunction a, TimeFunction b, TimeFunction c,
                                    TimeFunction d, TimeFunction e, TimeFunction f) {
  CoefficientSet cs;
  cs.a = std::move(a);
  cs.b = std::move(b);
  cs.c = std::move(c);
  cs.d = std::move(d);
  cs.e = std::move(e);
  cs.f = std::move(f);
  cs.da = cs.a.derivative();
  cs.dc = cs.c.derivative();
  cs.dd = cs.d.derivative();
  return cs;
}

double CoefficientSet::chi(double t) const {
  double at = a(t);
  if (at == 0.0) throw EvalError("chi: a(t)=0 at t=" + std::to_string(t));
  return -da(t) / at;
}

double CoefficientSet::xi(double t) const {
  double at = a(t);
  if (at == 0.0) throw EvalError("xi: a(t)=0 at t=" + std::to_string(t));
  double ct = c(t);
  return at * b(t) + da(t) * ct / at - ct * ct - dc(t);
}

double CoefficientSet::eta(double t) const {
  double at = a(t);
  if (at == 0.0) throw EvalError("eta: a(t)=0 at t=" + std::to_string(t));
  return c(t) * d(t) - at * e(t) + dd(t) - da(t) / at * d(t);
}

namespace {

void require_nonzero_on(const TimeFunction& g, double horizon, const char* what) {
  // Sign-change scan on a fine grid; the coefficients in scope are smooth.
  const int n = 2048;
  double prev = g(0.0);
  if (prev == 0.0) throw std::invalid_argument(std::string(what) + " vanishes at t=0");
  for (int i = 1; i <= n; ++i) {
    double t = horizon * static_cast<double>(i) / n;
    double v = g(t);
    if (v == 0.0 || (v > 0) != (prev > 0))
      throw std::invalid_argument(std::string(what) + " has a zero near t=" + std::to_string(t));
    prev = v;
  }
}

}  // namespace

CoefficientSet caldirola_kanai(double gamma, double f0, double omega_drive, double phi) {
  if (gamma < 0.0) throw std::invalid_argument("caldirola_kanai: gamma must be >= 0");
  auto a = TimeFunction::exponential(-2.0 * gamma);
  auto b = TimeFunction::exponential(2.0 * gamma);
  auto e = -(b * TimeFunction::harmonic(f0, omega_drive, phi));
  return CoefficientSet::make(a, b, TimeFunction::constant(0), TimeFunction::constant(0), e,
                              TimeFunction::constant(0));
}

CoefficientSet parametric_oscillator(const TimeFunction& mass, const TimeFunction& omega0_sq,
                                     const TimeFunction& fc, double horizon) {
  require_nonzero_on(mass, horizon, "parametric_oscillator: M(t)");
  auto a = TimeFunction::constant(1) / mass;
  auto b = mass * omega0_sq;
  return CoefficientSet::make(a, b, TimeFunction::constant(0), TimeFunction::constant(0), fc,
                              TimeFunction::constant(0));
}

CoefficientSet free_well(const TimeFunction& width, const TimeFunction& drive, double horizon) {
  require_nonzero_on(width, horizon, "free_well: L(t)");
  if (width(0.0) <= 0.0) throw std::invalid_argument("free_well: L(t) must be positive");
  return CoefficientSet::make(TimeFunction::constant(1), TimeFunction::constant(0),
                              TimeFunction::constant(0), TimeFunction::constant(0), -drive,
                              TimeFunction::constant(0));
}

CoefficientSet posmom_test(double gamma, double f0, double omega_drive) {
  return caldirola_kanai(gamma, f0, omega_drive, 0.0);
}

}  // namespace ddpo
