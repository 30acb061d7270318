#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddpo::ode {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = 0.0;      // 0 means no cap
  std::size_t max_steps = 50'000'000;
};

/// Thrown when the controller drives the step below machine resolution
/// (typically a finite-time singularity of the right-hand side).
class StepSizeUnderflow : public std::runtime_error {
 public:
  explicit StepSizeUnderflow(double t)
      : std::runtime_error("ODE step size underflow at t=" + std::to_string(t)), time(t) {}
  double time;
};

class MaxStepsExceeded : public std::runtime_error {
 public:
  explicit MaxStepsExceeded(double t)
      : std::runtime_error("ODE step budget exhausted at t=" + std::to_string(t)), time(t) {}
  double time;
};

/// One accepted step with the quartic interpolant of the 5(4) pair.
/// eval() is 5th-order accurate anywhere in [t0, t1].
struct DenseStep {
  double t0 = 0, t1 = 0;
  std::vector<double> r0, r1, r2, r3, r4;

  std::size_t dim() const { return r0.size(); }

  double eval(std::size_t i, double t) const {
    double s = (t - t0) / (t1 - t0);
    double s1 = 1.0 - s;
    return r0[i] + s * (r1[i] + s1 * (r2[i] + s * (r3[i] + s1 * r4[i])));
  }

  void eval_all(double t, double* out) const {
    for (std::size_t i = 0; i < r0.size(); ++i) out[i] = eval(i, t);
  }
};

enum class StepAction { kContinue, kStop };

/// Integrates y' = rhs(t, y) from t0 to t1 with the Dormand-Prince 5(4)
/// embedded pair, FSAL and PI step-size control. The observer is called
/// once per accepted step with the dense interpolant; returning kStop ends
/// the integration after that step. y is updated in place.
template <typename Rhs, typename Observer>
void integrate(Rhs&& rhs, std::vector<double>& y, double t0, double t1, const Options& opt,
               Observer&& observer) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
  static constexpr double safe = 0.9, facl = 0.2, facr = 10.0, beta = 0.04;

  if (!(t1 >= t0)) throw std::invalid_argument("ode::integrate: t1 < t0");
  if (t1 == t0) return;

  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
  DenseStep step;
  step.r0.resize(n);
  step.r1.resize(n);
  step.r2.resize(n);
  step.r3.resize(n);
  step.r4.resize(n);

  double t = t0;
  rhs(t, y.data(), k1.data());

  double hmax = opt.max_step > 0 ? opt.max_step : (t1 - t0);
  double h = opt.initial_step;
  if (h <= 0) {
    // Standard two-stage guess from the norms of y, f and a trial Euler step.
    double dnf = 0, dny = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double sk = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h0 = std::min(h0, hmax);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h0 * k1[i];
    rhs(t + h0, yt.data(), k2.data());
    double der2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double sk = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      double diff = (k2[i] - k1[i]) / sk;
      der2 += diff * diff;
    }
    der2 = std::sqrt(der2) / h0;
    double der12 = std::max(der2, std::sqrt(dnf));
    double h1 = (der12 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                 : std::pow(0.01 / der12, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, hmax});
  }

  double facold = 1e-4;
  bool reject = false;
  std::size_t nsteps = 0;

  while (t < t1) {
    if (++nsteps > opt.max_steps) throw MaxStepsExceeded(t);
    bool last = false;
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h <= std::numeric_limits<double>::epsilon() * 16.0 * std::max(1.0, std::abs(t)))
      throw StepSizeUnderflow(t);

    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, yt.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, yt.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, yt.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, yt.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, yt.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + h, ynew.data(), k7.data());

    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!std::isfinite(err)) err = 1e10;

    double fac11 = std::pow(err, 0.2);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(1.0 / facr, std::min(1.0 / facl, fac / safe));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      for (std::size_t i = 0; i < n; ++i) {
        double dy = ynew[i] - y[i];
        step.r0[i] = y[i];
        step.r1[i] = dy;
        step.r2[i] = h * k1[i] - dy;
        step.r3[i] = -h * k7[i] + dy - step.r2[i];
        step.r4[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                          d7 * k7[i]);
      }
      step.t0 = t;
      step.t1 = t + h;

      t += h;
      y = ynew;
      k1.swap(k7);

      if (observer(static_cast<const DenseStep&>(step), y) == StepAction::kStop) return;
      if (last) return;

      if (reject) hnew = std::min(std::abs(hnew), std::abs(h));
      reject = false;
      h = std::min(hnew, hmax);
    } else {
      hnew = h / std::min(1.0 / facl, fac11 / safe);
      reject = true;
      h = hnew;
    }
  }
}

struct Sampled {
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  bool stopped_early = false;
  double stop_time = 0.0;
};

/// Integrates and resamples the solution on the uniform grid
/// t0, t0+dt, ..., t1 using dense output (no interpolation drift).
template <typename Rhs>
Sampled integrate_sampled(Rhs&& rhs, std::vector<double> y, double t0, double t1, double dt,
                          const Options& opt = {}) {
  if (dt <= 0) throw std::invalid_argument("integrate_sampled: dt must be > 0");
  Sampled out;
  std::size_t count = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 0.5)) + 1;
  out.times.reserve(count);
  out.rows.reserve(count);
  out.times.push_back(t0);
  out.rows.push_back(y);
  if (t1 == t0) return out;

  std::size_t next = 1;
  integrate(rhs, y, t0, t1, opt, [&](const DenseStep& step, const std::vector<double>&) {
    while (next < count) {
      double ts = t0 + dt * static_cast<double>(next);
      if (ts > step.t1 + 1e-12 * std::max(1.0, std::abs(step.t1))) break;
      std::vector<double> row(step.dim());
      step.eval_all(std::min(ts, step.t1), row.data());
      out.times.push_back(ts);
      out.rows.push_back(std::move(row));
      ++next;
    }
    return StepAction::kContinue;
  });
  return out;
}

}  // namespace ddpo::ode
