#include "ddpo/flows.hpp"

#include <algorithm>
#include <cmath>

#include "ddpo/ode.hpp"

namespace ddpo {

namespace {

using cplx = std::complex<double>;

inline cplx get_c(const double* y, int slot) { return {y[2 * slot], y[2 * slot + 1]}; }
inline void set_c(double* y, int slot, cplx v) {
  y[2 * slot] = v.real();
  y[2 * slot + 1] = v.imag();
}

// State layout for all theta flows: slots 0..2 hold theta+, theta0, theta-
// as interleaved re/im pairs; extra real components may follow.
void theta_rhs(double a, double b, double c, const std::array<double, 3>& k, const double* y,
               double* dy) {
  cplx tp = get_c(y, 0), t0 = get_c(y, 1), tm = get_c(y, 2);
  cplx em2t0 = std::exp(-2.0 * t0);
  set_c(dy, 0, a * tp * tp - 2.0 * c * tp - k[1] * em2t0 + b);
  set_c(dy, 1, k[1] * tm - a * tp + c - k[2]);
  set_c(dy, 2, a * em2t0 - k[1] * tm * tm + 2.0 * k[2] * tm - k[0]);
}

std::vector<double> pack_su2(const Su2State& s, std::size_t extra) {
  std::vector<double> y(6 + extra, 0.0);
  set_c(y.data(), 0, s.theta_plus);
  set_c(y.data(), 1, s.theta_zero);
  set_c(y.data(), 2, s.theta_minus);
  return y;
}

Su2State unpack_su2(const double* y) {
  Su2State s;
  s.theta_plus = get_c(y, 0);
  s.theta_zero = get_c(y, 1);
  s.theta_minus = get_c(y, 2);
  return s;
}

struct Guard {
  std::string parameter;
  std::string kind;
  // positive once the event condition holds
  std::function<double(double, const double*)> excess;
};

std::size_t sample_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
}

/// Shared driver: integrates rhs, emits uniform samples, and truncates with
/// a bisected event time when any guard trips.
Su2KTrajectory run_guarded_flow(
    const std::function<void(double, const double*, double*)>& rhs, std::vector<double> y0,
    const std::function<std::array<double, 3>(double, const double*)>& k_at, double horizon,
    double dt_out, const FlowOptions& opt, const std::vector<Guard>& guards) {
  Su2KTrajectory out;
  const std::size_t dim = y0.size();
  const std::size_t count = sample_count(horizon, dt_out);

  out.times.push_back(0.0);
  out.states.push_back(unpack_su2(y0.data()));
  out.k.push_back(k_at(0.0, y0.data()));
  if (horizon <= 0.0) return out;

  ode::Options oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;

  std::size_t next = 1;
  std::vector<double> row(dim);

  auto emit_until = [&](const ode::DenseStep& step, double t_stop) {
    while (next < count) {
      double ts = dt_out * static_cast<double>(next);
      if (ts > std::min(step.t1, t_stop) + 1e-12 * std::max(1.0, step.t1)) break;
      step.eval_all(std::min(ts, step.t1), row.data());
      out.times.push_back(ts);
      out.states.push_back(unpack_su2(row.data()));
      out.k.push_back(k_at(ts, row.data()));
      ++next;
    }
  };

  try {
    ode::integrate(rhs, y0, 0.0, horizon, oopt,
                   [&](const ode::DenseStep& step, const std::vector<double>& y_new) {
                     const Guard* hit = nullptr;
                     for (const auto& g : guards) {
                       if (g.excess(step.t1, y_new.data()) > 0.0) {
                         hit = &g;
                         break;
                       }
                     }
                     if (!hit) {
                       emit_until(step, step.t1);
                       return ode::StepAction::kContinue;
                     }
                     // bisect for the crossing time inside this step
                     double lo = step.t0, hi = step.t1;
                     for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
                       double mid = 0.5 * (lo + hi);
                       step.eval_all(mid, row.data());
                       if (hit->excess(mid, row.data()) > 0.0)
                         hi = mid;
                       else
                         lo = mid;
                     }
                     emit_until(step, lo);
                     out.events.push_back({hi, hit->parameter, hit->kind});
                     out.truncated = true;
                     return ode::StepAction::kStop;
                   });
  } catch (const ode::StepSizeUnderflow& e) {
    out.events.push_back({e.time, "integrator", "stiffness"});
    out.truncated = true;
  }
  return out;
}

std::vector<Guard> theta_guards(const FlowOptions& opt) {
  return {
      {"theta_plus", "threshold",
       [bound = opt.theta_plus_bound](double, const double* y) {
         return std::abs(get_c(y, 0)) - bound;
       }},
      {"theta_zero", "threshold",
       [bound = opt.theta_zero_bound](double, const double* y) {
         return std::abs(y[2]) - bound;  // Re(theta0)
       }},
  };
}

}  // namespace

KSet KSet::zero() {
  return KSet([](double) { return std::array<double, 3>{0, 0, 0}; }, true, "zero");
}

KSet KSet::constants(double k1, double k2, double k3) {
  bool zero = (k1 == 0 && k2 == 0 && k3 == 0);
  return KSet([k1, k2, k3](double) { return std::array<double, 3>{k1, k2, k3}; }, zero,
              "constant");
}

KSet KSet::functions(TimeFunction k1, TimeFunction k2, TimeFunction k3) {
  return KSet(
      [k1, k2, k3](double t) {
        return std::array<double, 3>{k1(t), k2(t), k3(t)};
      },
      false, "functions");
}

KSet KSet::callable(std::function<std::array<double, 3>(double)> fn, std::string label) {
  return KSet(std::move(fn), false, std::move(label));
}

H4Trajectory evolve_h4(const CoefficientSet& cs, const H4State& init, double horizon,
                       double dt_out, const FlowOptions& opt) {
  auto rhs = [&cs](double t, const double* y, double* dy) {
    double alpha = y[0], beta = y[1];
    double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    dy[0] = c * alpha - a * beta + cs.d(t);
    dy[1] = b * alpha - c * beta + cs.e(t);
    dy[2] = 0.5 * b * alpha * alpha - 0.5 * a * beta * beta + cs.e(t) * alpha + cs.f(t);
  };
  ode::Options oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;
  auto sol = ode::integrate_sampled(rhs, {init.alpha, init.beta, init.s}, 0.0, horizon, dt_out,
                                    oopt);
  H4Trajectory out;
  out.times = sol.times;
  out.states.reserve(sol.rows.size());
  for (const auto& r : sol.rows) out.states.push_back({r[0], r[1], r[2]});
  return out;
}

Su2Trajectory evolve_su2(const CoefficientSet& cs, const KSet& ks, const Su2State& init,
                         double horizon, double dt_out, const FlowOptions& opt) {
  auto rhs = [&cs, &ks](double t, const double* y, double* dy) {
    theta_rhs(cs.a(t), cs.b(t), cs.c(t), ks(t), y, dy);
  };
  auto k_at = [&ks](double t, const double*) { return ks(t); };
  auto joint = run_guarded_flow(rhs, pack_su2(init, 0), k_at, horizon, dt_out, opt,
                                theta_guards(opt));
  Su2Trajectory out;
  out.times = std::move(joint.times);
  out.states = std::move(joint.states);
  out.events = std::move(joint.events);
  out.truncated = joint.truncated;
  return out;
}

KTrajectory evolve_K(const CoefficientSet& cs, std::array<double, 3> init, double horizon,
                     double dt_out, const FlowOptions& opt) {
  auto rhs = [&cs](double t, const double* y, double* dy) {
    double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    dy[0] = 2.0 * c * y[0] - 2.0 * a * y[2];
    dy[1] = 2.0 * b * y[2] - 2.0 * c * y[1];
    dy[2] = b * y[0] - a * y[1];
  };
  ode::Options oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;
  auto sol = ode::integrate_sampled(rhs, {init[0], init[1], init[2]}, 0.0, horizon, dt_out, oopt);
  KTrajectory out;
  out.times = sol.times;
  out.k.reserve(sol.rows.size());
  for (const auto& r : sol.rows) out.k.push_back({r[0], r[1], r[2]});
  return out;
}

Su2KTrajectory evolve_su2_tracked(const CoefficientSet& cs, const Su2State& init,
                                  std::array<double, 3> k_init, double horizon, double dt_out,
                                  const FlowOptions& opt) {
  auto rhs = [&cs](double t, const double* y, double* dy) {
    double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    std::array<double, 3> k{y[6], y[7], y[8]};
    theta_rhs(a, b, c, k, y, dy);
    dy[6] = 2.0 * c * k[0] - 2.0 * a * k[2];
    dy[7] = 2.0 * b * k[2] - 2.0 * c * k[1];
    dy[8] = b * k[0] - a * k[1];
  };
  auto y0 = pack_su2(init, 3);
  y0[6] = k_init[0];
  y0[7] = k_init[1];
  y0[8] = k_init[2];
  auto k_at = [](double, const double* y) { return std::array<double, 3>{y[6], y[7], y[8]}; };
  return run_guarded_flow(rhs, std::move(y0), k_at, horizon, dt_out, opt, theta_guards(opt));
}

namespace {

std::array<double, 3> ks_of_rho(double rho, double drho, double a, double c, double omega) {
  double g = (c * rho - drho) / a;
  return {rho * rho, omega * omega / (rho * rho) + g * g, rho * g};
}

}  // namespace

Su2KTrajectory evolve_su2_ermakov(const CoefficientSet& cs, const Su2State& init, double rho0,
                                  double drho0, double omega, double horizon, double dt_out,
                                  const FlowOptions& opt) {
  if (rho0 <= 0) throw std::invalid_argument("evolve_su2_ermakov: rho0 must be > 0");
  auto rhs = [&cs, omega](double t, const double* y, double* dy) {
    double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    double rho = y[6], drho = y[7];
    theta_rhs(a, b, c, ks_of_rho(rho, drho, a, c, omega), y, dy);
    dy[6] = drho;
    dy[7] = -cs.chi(t) * drho - cs.xi(t) * rho + omega * omega * a * a / (rho * rho * rho);
  };
  auto y0 = pack_su2(init, 2);
  y0[6] = rho0;
  y0[7] = drho0;
  auto k_at = [&cs, omega](double t, const double* y) {
    return ks_of_rho(y[6], y[7], cs.a(t), cs.c(t), omega);
  };
  auto guards = theta_guards(opt);
  double floor = 1e-6 * std::max(1.0, rho0);
  guards.push_back(
      {"rho", "singular", [floor](double, const double* y) { return floor - y[6]; }});
  return run_guarded_flow(rhs, std::move(y0), k_at, horizon, dt_out, opt, guards);
}

double AuxiliarySolution::interp_value(double t) const {
  if (times.empty()) throw std::out_of_range("AuxiliarySolution: empty");
  if (t <= times.front()) return value.front();
  if (t >= times.back()) {
    if (t > times.back() + 1e-9 * std::max(1.0, times.back()))
      throw std::out_of_range("AuxiliarySolution: t beyond sampled range");
    return value.back();
  }
  double dt = times[1] - times[0];
  std::size_t i = std::min(static_cast<std::size_t>((t - times.front()) / dt),
                           times.size() - 2);
  double s = (t - times[i]) / dt;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * value[i] + (s3 - 2 * s2 + s) * dt * deriv[i] +
         (-2 * s3 + 3 * s2) * value[i + 1] + (s3 - s2) * dt * deriv[i + 1];
}

double AuxiliarySolution::interp_deriv(double t) const {
  if (times.empty()) throw std::out_of_range("AuxiliarySolution: empty");
  if (t <= times.front()) return deriv.front();
  if (t >= times.back()) {
    if (t > times.back() + 1e-9 * std::max(1.0, times.back()))
      throw std::out_of_range("AuxiliarySolution: t beyond sampled range");
    return deriv.back();
  }
  double dt = times[1] - times[0];
  std::size_t i = std::min(static_cast<std::size_t>((t - times.front()) / dt),
                           times.size() - 2);
  double s = (t - times[i]) / dt;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * deriv[i] + (s3 - 2 * s2 + s) * dt * accel[i] +
         (-2 * s3 + 3 * s2) * deriv[i + 1] + (s3 - s2) * dt * accel[i + 1];
}

AuxiliarySolution ermakov_solve(const CoefficientSet& cs, double rho0, double drho0, double omega,
                                double horizon, double dt_out, ErmakovForm form,
                                const FlowOptions& opt) {
  if (rho0 <= 0) throw std::invalid_argument("ermakov_solve: rho0 must be > 0");

  auto accel_at = [&cs, omega, form](double t, double rho, double drho) {
    double a = cs.a(t);
    double pump = omega * omega * a * a / (rho * rho * rho);
    if (form == ErmakovForm::kInvariant) {
      return -cs.chi(t) * drho - cs.xi(t) * rho + pump;
    }
    double damp = 2.0 * cs.c(t) - cs.da(t) / a;
    return -damp * drho - a * cs.b(t) * rho + pump;
  };
  auto rhs = [&accel_at](double t, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = accel_at(t, y[0], y[1]);
  };

  AuxiliarySolution aux;
  aux.kind = AuxKind::kErmakovRho;
  aux.form = form;
  aux.omega = omega;
  aux.initial_value = rho0;

  ode::Options oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;

  const std::size_t count = sample_count(horizon, dt_out);
  double floor = 1e-6 * std::max(1.0, rho0);

  auto push = [&](double t, double rho, double drho) {
    aux.times.push_back(t);
    aux.value.push_back(rho);
    aux.deriv.push_back(drho);
    aux.accel.push_back(accel_at(t, rho, drho));
  };
  push(0.0, rho0, drho0);
  if (horizon <= 0.0) return aux;

  std::vector<double> y{rho0, drho0};
  std::size_t next = 1;
  try {
    ode::integrate(rhs, y, 0.0, horizon, oopt,
                   [&](const ode::DenseStep& step, const std::vector<double>& y_new) {
                     double t_stop = step.t1;
                     bool singular = y_new[0] <= floor;
                     if (singular) {
                       double lo = step.t0, hi = step.t1;
                       for (int it = 0; it < 80; ++it) {
                         double mid = 0.5 * (lo + hi);
                         if (step.eval(0, mid) <= floor)
                           hi = mid;
                         else
                           lo = mid;
                       }
                       t_stop = lo;
                       aux.events.push_back({hi, "rho", "singular"});
                       aux.truncated = true;
                     }
                     while (next < count) {
                       double ts = dt_out * static_cast<double>(next);
                       if (ts > t_stop + 1e-12 * std::max(1.0, t_stop)) break;
                       double tt = std::min(ts, step.t1);
                       push(ts, step.eval(0, tt), step.eval(1, tt));
                       ++next;
                     }
                     return singular ? ode::StepAction::kStop : ode::StepAction::kContinue;
                   });
  } catch (const ode::StepSizeUnderflow& e) {
    aux.events.push_back({e.time, "rho", "stiffness"});
    aux.truncated = true;
  }
  return aux;
}

KSet ks_from_rho(const AuxiliarySolution& aux, const CoefficientSet& cs, double omega) {
  if (aux.kind != AuxKind::kErmakovRho)
    throw std::invalid_argument("ks_from_rho: auxiliary solution is not an Ermakov rho");
  if (aux.omega != omega)
    throw std::invalid_argument("ks_from_rho: Omega does not match the auxiliary solution");
  auto shared = std::make_shared<AuxiliarySolution>(aux);
  auto fn = [shared, cs, omega](double t) {
    double a = cs.a(t);
    if (a == 0.0) throw EvalError("ks_from_rho: a(t)=0 at t=" + std::to_string(t));
    return ks_of_rho(shared->interp_value(t), shared->interp_deriv(t), a, cs.c(t), omega);
  };
  return KSet::callable(fn, "ermakov");
}

RiccatiResult riccati_via_linear(const CoefficientSet& cs, double horizon, double dt_out,
                                 double theta_plus0, const FlowOptions& opt) {
  double a0 = cs.a(0.0);
  if (a0 == 0.0) throw EvalError("riccati_via_linear: a(0)=0");

  auto u_accel = [&cs](double t, double u, double v) {
    double a = cs.a(t);
    if (a == 0.0) throw EvalError("riccati_via_linear: a(t)=0 at t=" + std::to_string(t));
    return -(2.0 * cs.c(t) - cs.da(t) / a) * v - a * cs.b(t) * u;
  };

  ode::Options oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;

  RiccatiResult res;
  res.u.kind = AuxKind::kRiccatiU;
  res.u.initial_value = 1.0;

  // Pass 1: the smooth linear system (u, u', int c). Poles of theta+ are
  // the sign changes of u, located exactly by bisection on dense output.
  const std::size_t count = sample_count(horizon, dt_out);
  {
    auto rhs = [&](double t, const double* y, double* dy) {
      dy[0] = y[1];
      dy[1] = u_accel(t, y[0], y[1]);
      dy[2] = cs.c(t);
    };
    std::vector<double> y{1.0, -a0 * theta_plus0, 0.0};
    res.u.times.push_back(0.0);
    res.u.value.push_back(y[0]);
    res.u.deriv.push_back(y[1]);
    res.u.accel.push_back(u_accel(0.0, y[0], y[1]));
    std::size_t next = 1;
    if (horizon > 0.0) {
      ode::integrate(rhs, y, 0.0, horizon, oopt,
                     [&](const ode::DenseStep& step, const std::vector<double>& y_new) {
                       double u_old = step.eval(0, step.t0);
                       if ((u_old > 0) != (y_new[0] > 0) || y_new[0] == 0.0) {
                         double lo = step.t0, hi = step.t1;
                         bool from_pos = u_old > 0;
                         for (int it = 0; it < 100; ++it) {
                           double mid = 0.5 * (lo + hi);
                           double um = step.eval(0, mid);
                           if ((um > 0) == from_pos)
                             lo = mid;
                           else
                             hi = mid;
                         }
                         res.u.events.push_back({0.5 * (lo + hi), "u", "pole"});
                       }
                       while (next < count) {
                         double ts = dt_out * static_cast<double>(next);
                         if (ts > step.t1 + 1e-12 * std::max(1.0, step.t1)) break;
                         double tt = std::min(ts, step.t1);
                         res.u.times.push_back(ts);
                         res.u.value.push_back(step.eval(0, tt));
                         res.u.deriv.push_back(step.eval(1, tt));
                         res.u.accel.push_back(u_accel(tt, step.eval(0, tt), step.eval(1, tt)));
                         ++next;
                       }
                       return ode::StepAction::kContinue;
                     });
    }
  }

  // Pass 2: joint (u, u', int c, theta-) with the theta+ magnitude guard;
  // theta- accumulates the quadrature of a e^{-2 theta0}.
  {
    auto rhs = [&](double t, const double* y, double* dy) {
      dy[0] = y[1];
      dy[1] = u_accel(t, y[0], y[1]);
      dy[2] = cs.c(t);
      double ratio = 1.0 / y[0];
      dy[3] = cs.a(t) * std::exp(-2.0 * y[2]) * ratio * ratio;
    };
    auto theta_of = [&cs](double t, const double* y) {
      Su2State s;
      double a = cs.a(t);
      s.theta_plus = -y[1] / (a * y[0]);
      s.theta_zero = y[2] + std::log(y[0]);  // u(0) = 1
      s.theta_minus = y[3];
      return s;
    };

    std::vector<double> y{1.0, -a0 * theta_plus0, 0.0, 0.0};
    res.thetas.times.push_back(0.0);
    res.thetas.states.push_back(theta_of(0.0, y.data()));
    std::size_t next = 1;
    std::vector<double> row(4);
    auto guard = [&](double t, const double* yy) {
      return std::abs(yy[1] / (cs.a(t) * yy[0])) - opt.theta_plus_bound;
    };
    if (horizon > 0.0) {
      try {
        ode::integrate(rhs, y, 0.0, horizon, oopt,
                       [&](const ode::DenseStep& step, const std::vector<double>& y_new) {
                         double t_stop = step.t1;
                         bool tripped = guard(step.t1, y_new.data()) > 0.0 || y_new[0] <= 0.0;
                         if (tripped) {
                           double lo = step.t0, hi = step.t1;
                           for (int it = 0; it < 80; ++it) {
                             double mid = 0.5 * (lo + hi);
                             step.eval_all(mid, row.data());
                             if (guard(mid, row.data()) > 0.0 || row[0] <= 0.0)
                               hi = mid;
                             else
                               lo = mid;
                           }
                           t_stop = lo;
                           res.thetas.truncated = true;
                         }
                         while (next < count) {
                           double ts = dt_out * static_cast<double>(next);
                           if (ts > t_stop + 1e-12 * std::max(1.0, t_stop)) break;
                           step.eval_all(std::min(ts, step.t1), row.data());
                           res.thetas.times.push_back(ts);
                           res.thetas.states.push_back(theta_of(ts, row.data()));
                           ++next;
                         }
                         return tripped ? ode::StepAction::kStop : ode::StepAction::kContinue;
                       });
      } catch (const ode::StepSizeUnderflow&) {
        res.thetas.truncated = true;
      }
    }
  }

  // Report the exact pole times (not the threshold crossings) as events.
  res.thetas.events = res.u.events;
  for (auto& e : res.thetas.events) e.parameter = "theta_plus";
  if (!res.thetas.events.empty()) res.thetas.truncated = true;
  return res;
}

double ck_sigma(double gamma, double sigma0, double t) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("ck_sigma: need 0 <= gamma < 1 (underdamped form)");
  double w = std::sqrt(1.0 - gamma * gamma);
  return sigma0 * std::exp(-gamma * t) * (std::cos(w * t) + gamma / w * std::sin(w * t));
}

std::vector<double> ck_divergence_times(double gamma, std::size_t count) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("ck_divergence_times: need 0 <= gamma < 1");
  double w = std::sqrt(1.0 - gamma * gamma);
  const double pi = 3.14159265358979323846;
  // cot(w t) = -gamma/w  =>  w t = pi/2 + atan(gamma/w) + k pi
  double base = pi / 2.0 + std::atan(gamma / w);
  std::vector<double> ts;
  ts.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    ts.push_back((base + pi * static_cast<double>(k)) / w);
  return ts;
}

}  // namespace ddpo
