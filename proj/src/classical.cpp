#include "ddpo/classical.hpp"

#include <cmath>

#include "ddpo/fft.hpp"
#include "ddpo/ode.hpp"

namespace ddpo {

SteadyResponse steady_response(const DdhoParams& p) {
  if (p.omega_drive < 0) throw std::invalid_argument("steady_response: Omega must be >= 0");
  double det = p.omega0 * p.omega0 - p.omega_drive * p.omega_drive;
  double damp = 2.0 * p.gamma * p.omega_drive;
  double denom = det * det + damp * damp;
  if (denom == 0.0) throw UnboundedResonance();

  SteadyResponse r;
  r.amplitude = p.f0 / std::sqrt(denom);
  r.phase = p.phi - std::atan2(damp, det);
  r.in_phase = (det * p.f0 * std::cos(p.phi) + damp * p.f0 * std::sin(p.phi)) / denom;
  r.out_phase = (damp * p.f0 * std::cos(p.phi) - det * p.f0 * std::sin(p.phi)) / denom;
  return r;
}

double resonant_frequency(double omega0, double gamma) {
  double arg = omega0 * omega0 - 2.0 * gamma * gamma;
  if (arg <= 0.0)
    throw std::domain_error("resonant_frequency: overdamped response, no interior maximum");
  return std::sqrt(arg);
}

PhasePoint ddho_solution(const DdhoParams& p, double t) {
  if (p.omega0 <= 0) throw std::invalid_argument("ddho_solution: omega0 must be > 0");

  double xi0 = 0, vi0 = 0;  // particular solution and derivative at t = 0
  double xi = 0, vi = 0;    // at time t
  if (p.f0 != 0.0) {
    SteadyResponse r = steady_response(p);
    double w = p.omega_drive;
    xi0 = r.in_phase;
    vi0 = w * r.out_phase;
    xi = r.in_phase * std::cos(w * t) + r.out_phase * std::sin(w * t);
    vi = w * (-r.in_phase * std::sin(w * t) + r.out_phase * std::cos(w * t));
  }

  double cx = p.x0 - xi0;  // homogeneous initial conditions
  double cv = p.p0 - vi0;

  double xh, vh;
  double g = p.gamma;
  if (g < p.omega0) {
    double w = std::sqrt(p.omega0 * p.omega0 - g * g);
    double c1 = cx;
    double c2 = (cv + g * cx) / w;
    double ex = std::exp(-g * t);
    xh = ex * (c1 * std::cos(w * t) + c2 * std::sin(w * t));
    vh = ex * (-g * (c1 * std::cos(w * t) + c2 * std::sin(w * t)) +
               w * (-c1 * std::sin(w * t) + c2 * std::cos(w * t)));
  } else if (g == p.omega0) {
    double c1 = cx;
    double c2 = cv + g * cx;
    double ex = std::exp(-g * t);
    xh = ex * (c1 + c2 * t);
    vh = ex * (c2 - g * (c1 + c2 * t));
  } else {
    double s = std::sqrt(g * g - p.omega0 * p.omega0);
    double rp = -g + s, rm = -g - s;
    double c2 = (cv - rp * cx) / (rm - rp);
    double c1 = cx - c2;
    xh = c1 * std::exp(rp * t) + c2 * std::exp(rm * t);
    vh = c1 * rp * std::exp(rp * t) + c2 * rm * std::exp(rm * t);
  }
  return {xh + xi, vh + vi};
}

ClassicalTrajectory integrate_classical(const CoefficientSet& cs, double x0, double p0,
                                        double horizon, double dt) {
  // State (X, V, s) with V = Xc'. Momentum recovered as (V - c X - d)/a.
  auto rhs = [&cs](double t, const double* y, double* dy) {
    double x = y[0], v = y[1];
    dy[0] = v;
    dy[1] = cs.eta(t) - cs.chi(t) * v - cs.xi(t) * x;
    double a = cs.a(t);
    double mom = (v - cs.c(t) * x - cs.d(t)) / a;
    dy[2] = 0.5 * cs.b(t) * x * x - 0.5 * a * mom * mom + cs.e(t) * x + cs.f(t);
  };

  double a0 = cs.a(0.0);
  if (a0 == 0.0) throw EvalError("integrate_classical: a(0)=0");
  double v0 = a0 * p0 + cs.c(0.0) * x0 + cs.d(0.0);

  ode::Options opt;
  opt.abs_tol = 1e-10;
  opt.rel_tol = 1e-9;
  auto sol = ode::integrate_sampled(rhs, {x0, v0, 0.0}, 0.0, horizon, dt, opt);

  ClassicalTrajectory out;
  out.times = sol.times;
  out.x.reserve(sol.rows.size());
  out.p.reserve(sol.rows.size());
  out.action.reserve(sol.rows.size());
  for (std::size_t i = 0; i < sol.rows.size(); ++i) {
    double t = sol.times[i];
    const auto& row = sol.rows[i];
    out.x.push_back(row[0]);
    out.p.push_back((row[1] - cs.c(t) * row[0] - cs.d(t)) / cs.a(t));
    out.action.push_back(row[2]);
  }
  return out;
}

Spectrum power_spectrum(const std::vector<double>& series, double dt) {
  if (series.size() < 2) throw std::invalid_argument("power_spectrum: need at least 2 samples");
  if (dt <= 0) throw std::invalid_argument("power_spectrum: dt must be > 0");

  const std::size_t n = series.size();
  double mean = 0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  std::vector<std::complex<double>> buf(n);
  double wsum = 0;
  const double pi = 3.14159265358979323846;
  for (std::size_t j = 0; j < n; ++j) {
    double w = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(j) /
                                     static_cast<double>(n - 1)));
    wsum += w;
    buf[j] = (series[j] - mean) * w;
  }

  Fft fft(n);
  fft.forward(buf);

  Spectrum sp;
  std::size_t half = n / 2;
  sp.freq.reserve(half + 1);
  sp.power.reserve(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    double amp = std::abs(buf[k]) / wsum;
    if (k != 0 && !(n % 2 == 0 && k == half)) amp *= 2.0;
    sp.freq.push_back(2.0 * pi * static_cast<double>(k) / (static_cast<double>(n) * dt));
    sp.power.push_back(0.5 * amp * amp);
  }
  return sp;
}

Spectrum power_spectrum(const std::vector<double>& times, const std::vector<double>& series) {
  if (times.size() != series.size())
    throw std::invalid_argument("power_spectrum: time/series length mismatch");
  if (times.size() < 2) throw std::invalid_argument("power_spectrum: need at least 2 samples");
  double dt = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    double step = times[i + 1] - times[i];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("power_spectrum: non-uniform sampling rejected");
  }
  return power_spectrum(series, dt);
}

}  // namespace ddpo
