#include "ddpo/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ddpo/fft.hpp"
#include "ddpo/lie.hpp"
#include "ddpo/ode.hpp"
#include "ddpo/splitstep.hpp"

namespace ddpo {

namespace {
using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

// ---- initial states ------------------------------------------------------

InitialState InitialState::hermite(unsigned n) {
  InitialState s;
  s.kind = Kind::kHermite;
  s.terms = {{n, 1.0}};
  return s;
}

InitialState InitialState::superposition(std::vector<BasisTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("superposition: no terms");
  InitialState s;
  s.kind = Kind::kSuperposition;
  s.terms = std::move(terms);
  return s;
}

InitialState InitialState::well(unsigned n, double width) {
  InitialState s;
  s.kind = Kind::kWell;
  s.well_n = n;
  s.well_width = width;
  return s;
}

InitialState InitialState::plane(double k0) {
  InitialState s;
  s.kind = Kind::kPlane;
  s.plane_k0 = k0;
  return s;
}

InitialState InitialState::posmom(double xi, double x0) {
  InitialState s;
  s.kind = Kind::kPosmom;
  s.posmom_xi = xi;
  s.posmom_x0 = x0;
  return s;
}

WaveState InitialState::build(const Grid& grid) const {
  switch (kind) {
    case Kind::kHermite:
    case Kind::kSuperposition: {
      double total = 0;
      for (const auto& t : terms) total += std::norm(t.coeff);
      if (total == 0) throw std::invalid_argument("initial state: zero amplitude");
      double scale = 1.0 / std::sqrt(total);
      WaveState psi(grid, std::vector<cplx>(grid.n, 0.0));
      for (const auto& t : terms) {
        WaveState basis = hermite_state(t.n, grid);
        cplx c = t.coeff * scale;
        for (std::size_t j = 0; j < grid.n; ++j) psi.amp[j] += c * basis.amp[j];
      }
      return psi;
    }
    case Kind::kWell: return well_state(well_n, well_width, grid);
    case Kind::kPlane: return plane_state(plane_k0, grid);
    case Kind::kPosmom: return posmom_state(posmom_xi, posmom_x0, grid);
  }
  throw std::logic_error("InitialState::build: bad kind");
}

// ---- K strategies --------------------------------------------------------

KStrategy KStrategy::zero() { return {}; }

KStrategy KStrategy::constant(double k1, double k2, double k3) {
  KStrategy s;
  s.kind = Kind::kConstant;
  s.values = {k1, k2, k3};
  return s;
}

KStrategy KStrategy::free_particle(TimeFunction k) {
  KStrategy s;
  s.kind = Kind::kFreeParticle;
  s.k_func = std::move(k);
  return s;
}

KStrategy KStrategy::posmom(TimeFunction k) {
  KStrategy s;
  s.kind = Kind::kPosmom;
  s.k_func = std::move(k);
  return s;
}

KStrategy KStrategy::ermakov(double omega, double rho0, double drho0) {
  KStrategy s;
  s.kind = Kind::kErmakov;
  s.ermakov_omega = omega;
  s.ermakov_rho0 = rho0;
  s.ermakov_drho0 = drho0;
  return s;
}

KStrategy KStrategy::tracked(double k1, double k2, double k3) {
  KStrategy s;
  s.kind = Kind::kTracked;
  s.values = {k1, k2, k3};
  return s;
}

void Scenario::validate() const {
  if (horizon < 0) throw std::invalid_argument("scenario: horizon must be >= 0");
  if (dt_output <= 0) throw std::invalid_argument("scenario: dt_output must be > 0");
  if (base_dt <= 0) throw std::invalid_argument("scenario: base_dt must be > 0");
  if (k.kind == KStrategy::Kind::kErmakov && k.ermakov_rho0 <= 0)
    throw std::invalid_argument("scenario: ermakov rho0 must be > 0");
  if (k.kind == KStrategy::Kind::kConstant && k.values[0] == 1.0 && k.values[2] == 0.0) {
    // harmonic target frame assumes the system starts as a unit oscillator
    if (std::abs(cs.a(0.0) - 1.0) > 1e-9 || std::abs(cs.c(0.0)) > 1e-9)
      throw std::invalid_argument(
          "scenario: constant (1, Omega0^2, 0) frame requires a(0)=1, c(0)=0");
  }
}

// ---- scenario engine -----------------------------------------------------

namespace {

// Cubic-Hermite interpolant of the K flow, sampled finely enough for the
// frame-state propagation between output points.
KSet tracked_kset(const CoefficientSet& cs, std::array<double, 3> init, double horizon,
                  double dt, const FlowOptions& fopt) {
  auto rhs = [cs](double t, const double* y, double* dy) {
    double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    dy[0] = 2.0 * c * y[0] - 2.0 * a * y[2];
    dy[1] = 2.0 * b * y[2] - 2.0 * c * y[1];
    dy[2] = b * y[0] - a * y[1];
  };
  ode::Options oopt;
  oopt.abs_tol = fopt.abs_tol;
  oopt.rel_tol = fopt.rel_tol;
  auto sol = ode::integrate_sampled(rhs, {init[0], init[1], init[2]}, 0.0, std::max(horizon, dt),
                                    dt, oopt);
  struct Table {
    double t0, dt;
    std::vector<std::array<double, 3>> val, der;
  };
  auto tab = std::make_shared<Table>();
  tab->t0 = 0.0;
  tab->dt = dt;
  tab->val.reserve(sol.rows.size());
  tab->der.reserve(sol.rows.size());
  for (std::size_t i = 0; i < sol.rows.size(); ++i) {
    const auto& r = sol.rows[i];
    std::array<double, 3> d;
    rhs(sol.times[i], r.data(), d.data());
    tab->val.push_back({r[0], r[1], r[2]});
    tab->der.push_back(d);
  }
  auto fn = [tab](double t) -> std::array<double, 3> {
    if (t <= tab->t0) return tab->val.front();
    double u = (t - tab->t0) / tab->dt;
    std::size_t i = static_cast<std::size_t>(u);
    if (i >= tab->val.size() - 1) return tab->val.back();
    double s = u - static_cast<double>(i);
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    std::array<double, 3> out;
    for (int c = 0; c < 3; ++c) {
      out[c] = h00 * tab->val[i][c] + h10 * tab->dt * tab->der[i][c] +
               h01 * tab->val[i + 1][c] + h11 * tab->dt * tab->der[i + 1][c];
    }
    return out;
  };
  return KSet::callable(fn, "tracked");
}

enum class Psi0Path { kStatic, kHermitePhases, kFreeSpectral, kPosmomEigen, kSplitStep };

Psi0Path select_path(const Scenario& sc) {
  using KK = KStrategy::Kind;
  using IK = InitialState::Kind;
  switch (sc.k.kind) {
    case KK::kZero: return Psi0Path::kStatic;
    case KK::kConstant:
      if (sc.k.values == std::array<double, 3>{1.0, 1.0, 0.0} &&
          (sc.initial.kind == IK::kHermite || sc.initial.kind == IK::kSuperposition))
        return Psi0Path::kHermitePhases;
      return Psi0Path::kSplitStep;
    case KK::kFreeParticle: return Psi0Path::kFreeSpectral;
    case KK::kPosmom:
      if (sc.initial.kind == IK::kPosmom) return Psi0Path::kPosmomEigen;
      return Psi0Path::kSplitStep;
    default: return Psi0Path::kSplitStep;
  }
}

// Reordered reconstruction for dilation eigenfunctions: the theta0 action on
// g_xi is the phase e^{-i xi theta0}, and commuting it past the theta-
// factor rescales theta- by e^{2 theta0}.
WaveState posmom_frame(const WaveState& g, double xi, const H4State& h4, const Su2State& su2,
                       double k_quad) {
  H4State shifted = h4;
  shifted.s = h4.s + xi * (k_quad + su2.theta_zero.real());
  Su2State eff;
  eff.theta_plus = su2.theta_plus;
  eff.theta_zero = 0.0;
  eff.theta_minus = su2.theta_minus * std::exp(2.0 * su2.theta_zero);
  return apply_lie(g, shifted, eff);
}

std::vector<double> cumulative(const TimeFunction& g, const std::vector<double>& times) {
  std::vector<double> out(times.size(), 0.0);
  if (times.size() < 2) return out;
  auto rhs = [&g](double t, const double*, double* dy) { dy[0] = g(t); };
  ode::Options oopt;
  std::vector<double> y{0.0};
  std::size_t idx = 1;
  ode::integrate(rhs, y, times.front(), times.back(), oopt,
                 [&](const ode::DenseStep& step, const std::vector<double>&) {
                   while (idx < times.size() &&
                          times[idx] <= step.t1 + 1e-12 * std::max(1.0, step.t1)) {
                     out[idx] = step.eval(0, std::min(times[idx], step.t1));
                     ++idx;
                   }
                   return ode::StepAction::kContinue;
                 });
  return out;
}

ScenarioResult run_impl(const Scenario& sc, bool with_grid) {
  sc.validate();
  ScenarioResult res;
  FlowOptions fopt;

  double horizon = sc.horizon;
  double fine_dt = std::min(sc.dt_output, 1e-2);

  KSet kset = KSet::zero();
  AuxiliarySolution aux;
  switch (sc.k.kind) {
    case KStrategy::Kind::kZero: break;
    case KStrategy::Kind::kConstant:
      kset = KSet::constants(sc.k.values[0], sc.k.values[1], sc.k.values[2]);
      break;
    case KStrategy::Kind::kFreeParticle:
      kset = KSet::functions(sc.k.k_func, TimeFunction::constant(0), TimeFunction::constant(0));
      break;
    case KStrategy::Kind::kPosmom:
      kset = KSet::functions(TimeFunction::constant(0), TimeFunction::constant(0), sc.k.k_func);
      break;
    case KStrategy::Kind::kErmakov: {
      aux = ermakov_solve(sc.cs, sc.k.ermakov_rho0, sc.k.ermakov_drho0, sc.k.ermakov_omega,
                          horizon, fine_dt, ErmakovForm::kInvariant, fopt);
      for (const auto& e : aux.events) res.events.push_back(e);
      if (aux.truncated) {
        horizon = aux.times.back();
        res.truncated = true;
      }
      kset = ks_from_rho(aux, sc.cs, sc.k.ermakov_omega);
      break;
    }
    case KStrategy::Kind::kTracked:
      kset = tracked_kset(sc.cs, sc.k.values, horizon, fine_dt, fopt);
      break;
  }

  auto su2 = evolve_su2(sc.cs, kset, sc.theta_init, horizon, sc.dt_output, fopt);
  for (const auto& e : su2.events) res.events.push_back(e);
  res.truncated = res.truncated || su2.truncated;

  auto h4 = evolve_h4(sc.cs, {sc.x_c0, -sc.p_c0, 0.0}, horizon, sc.dt_output, fopt);

  const std::size_t count = std::min(su2.times.size(), h4.times.size());
  res.times.assign(su2.times.begin(), su2.times.begin() + count);
  res.su2.assign(su2.states.begin(), su2.states.begin() + count);
  res.h4.assign(h4.states.begin(), h4.states.begin() + count);
  res.ks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) res.ks.push_back(kset(res.times[i]));

  if (!with_grid) return res;

  WaveState psi0 = sc.initial.build(sc.grid);
  Psi0Path path = select_path(sc);

  // per-term basis cache for the analytic oscillator-frame path
  std::vector<WaveState> basis;
  std::vector<cplx> coeffs;
  if (path == Psi0Path::kHermitePhases) {
    double total = 0;
    for (const auto& t : sc.initial.terms) total += std::norm(t.coeff);
    double scale = 1.0 / std::sqrt(total);
    for (const auto& t : sc.initial.terms) {
      basis.push_back(hermite_state(t.n, sc.grid));
      coeffs.push_back(t.coeff * scale);
    }
  }

  std::vector<cplx> psi0_spec;
  if (path == Psi0Path::kFreeSpectral) {
    psi0_spec = psi0.amp;
    Fft fft(sc.grid.n);
    fft.forward(psi0_spec);
  }

  std::vector<double> k_quad;
  if (path == Psi0Path::kFreeSpectral || path == Psi0Path::kPosmomEigen)
    k_quad = cumulative(sc.k.k_func, res.times);

  std::unique_ptr<SplitStepPropagator> prop;
  if (path == Psi0Path::kSplitStep) {
    auto kfn = [kset](int idx) {
      return std::function<double(double)>([kset, idx](double t) { return kset(t)[idx]; });
    };
    prop = std::make_unique<SplitStepPropagator>(
        SplitStepHamiltonian::quadratic(kfn(0), kfn(1), kfn(2)), psi0, sc.base_dt);
  }

  Fft fft(sc.grid.n);
  for (std::size_t i = 0; i < count; ++i) {
    double t = res.times[i];
    WaveState frame_psi0 = psi0;
    switch (path) {
      case Psi0Path::kStatic: break;
      case Psi0Path::kHermitePhases: {
        std::fill(frame_psi0.amp.begin(), frame_psi0.amp.end(), cplx(0.0));
        for (std::size_t q = 0; q < basis.size(); ++q) {
          cplx ph = coeffs[q] * std::polar(1.0, -(sc.initial.terms[q].n + 0.5) * t);
          for (std::size_t j = 0; j < sc.grid.n; ++j)
            frame_psi0.amp[j] += ph * basis[q].amp[j];
        }
        break;
      }
      case Psi0Path::kFreeSpectral: {
        frame_psi0.amp = psi0_spec;
        for (std::size_t j = 0; j < sc.grid.n; ++j) {
          double k = sc.grid.k(j);
          frame_psi0.amp[j] *= std::polar(1.0, -0.5 * k * k * k_quad[i]);
        }
        fft.inverse(frame_psi0.amp);
        break;
      }
      case Psi0Path::kPosmomEigen: break;  // handled in posmom_frame
      case Psi0Path::kSplitStep: {
        prop->advance_to(t);
        frame_psi0 = prop->state();
        break;
      }
    }

    WaveState frame =
        (path == Psi0Path::kPosmomEigen)
            ? posmom_frame(psi0, sc.initial.posmom_xi, res.h4[i], res.su2[i], k_quad[i])
            : apply_lie(frame_psi0, res.h4[i], res.su2[i]);
    res.frame_moments.push_back(moments(frame));
    res.frames.push_back(std::move(frame));
  }

  // conserved scalar when the frame defines one
  bool kt_frame =
      sc.k.kind == KStrategy::Kind::kErmakov || sc.k.kind == KStrategy::Kind::kTracked;
  bool const_frame = sc.k.kind == KStrategy::Kind::kConstant;
  if (kt_frame || const_frame) {
    res.invariant.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& h = res.h4[i];
      InvariantOperator inv =
          kt_frame ? InvariantOperator::from_ks(res.ks[i], h.alpha, h.beta)
                   : InvariantOperator::conjugated_ks(res.ks[i], res.su2[i], h.alpha, h.beta);
      res.invariant.push_back(invariant_expectation(inv, res.frames[i]));
    }
  }

  if (prop) res.warnings = prop->warnings();
  return res;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc) { return run_impl(sc, true); }
ScenarioResult run_scenario_flows(const Scenario& sc) { return run_impl(sc, false); }

// ---- moving-boundary well ------------------------------------------------

double well_omega0_sq(const TimeFunction& width, double t) {
  double l = width(t);
  if (l <= 0) throw std::domain_error("well_omega0_sq: L(t) must be positive");
  if (std::abs(1.0 - l * l * l * l) < 1e-12)
    throw std::domain_error("well_omega0_sq: L=1 pole of the accelerated-boundary frequency");
  double lddot = width.derivative().derivative()(t);
  return (lddot / l) * (l * l * l * l) / (1.0 - l * l * l * l);
}

WaveState well_solution(const TimeFunction& width, unsigned n, double t, double xc, double pc,
                        double phase_q, const Grid& grid) {
  (void)pc;  // density and occupations are insensitive to the center phase
  if (n == 0) throw std::invalid_argument("well_solution: n starts at 1");
  double l = width(t);
  if (l <= 0) throw std::invalid_argument("well_solution: L(t) must be positive");
  double ldot = width.derivative()(t);

  std::vector<cplx> amp(grid.n, 0.0);
  double scale = std::sqrt(2.0 / l);
  double e_phase = -0.5 * n * n * kPi * kPi * t + phase_q;
  for (std::size_t j = 0; j < grid.n; ++j) {
    double u = grid.x(j) - xc;
    if (u < 0.0 || u > l) continue;
    double mag = scale * std::sin(n * kPi * u / l);
    amp[j] = std::polar(mag, 0.5 * ldot * u * u / l + e_phase);
  }
  return WaveState(grid, std::move(amp));
}

WellResult run_well_scenario(const WellScenario& ws) {
  if (ws.terms.empty()) throw std::invalid_argument("well scenario: no initial terms");
  for (const auto& t : ws.terms)
    if (t.n == 0) throw std::invalid_argument("well scenario: levels start at n=1");

  // classical center Xc'' = f plus the drive phase q = int Xc f
  auto rhs = [&ws](double t, const double* y, double* dy) {
    double f = ws.drive(t);
    dy[0] = y[1];
    dy[1] = f;
    dy[2] = y[0] * f;
  };
  auto sol = ode::integrate_sampled(rhs, {0.0, 0.0, 0.0}, 0.0, ws.horizon, ws.dt_output);

  double total = 0;
  for (const auto& t : ws.terms) total += std::norm(t.coeff);
  double cscale = 1.0 / std::sqrt(total);

  WellResult out;
  auto dwidth = ws.width.derivative();
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    double t = sol.times[i];
    double xc = sol.rows[i][0], pc = sol.rows[i][1], q = sol.rows[i][2];
    double l = ws.width(t);

    WaveState frame(ws.grid, std::vector<cplx>(ws.grid.n, 0.0));
    for (const auto& term : ws.terms) {
      WaveState part = well_solution(ws.width, term.n, t, xc, pc, q, ws.grid);
      cplx c = term.coeff * cscale;
      for (std::size_t j = 0; j < ws.grid.n; ++j) frame.amp[j] += c * part.amp[j];
    }

    double ldot = dwidth(t);
    InvariantOperator inv =
        InvariantOperator::free_frame(std::log(l), -ldot / l, xc, -pc);
    out.invariant.push_back(invariant_expectation(inv, frame));
    out.frame_moments.push_back(moments(frame));
    out.times.push_back(t);
    out.width.push_back(l);
    out.xc.push_back(xc);
    out.pc.push_back(pc);
    out.frames.push_back(std::move(frame));
  }
  return out;
}

// ---- posmom and free-particle closed forms -------------------------------

WaveState posmom_solution(const CoefficientSet& cs, const TimeFunction& k, double xi, double x0,
                          double t, const Grid& grid, double x_c0, double p_c0) {
  WaveState g = posmom_state(xi, x0, grid);
  if (t == 0.0) return g;

  FlowOptions fopt;
  double dt_out = t / 16.0;
  auto su2 = evolve_su2(cs, KSet::functions(TimeFunction::constant(0), TimeFunction::constant(0), k),
                        Su2State{}, t, dt_out, fopt);
  if (su2.truncated || su2.times.back() + 1e-9 < t)
    throw std::domain_error("posmom_solution: theta flow diverged before t");
  auto h4 = evolve_h4(cs, {x_c0, -p_c0, 0.0}, t, dt_out, fopt);

  auto quad = cumulative(k, su2.times);
  return posmom_frame(g, xi, h4.states.back(), su2.states.back(), quad.back());
}

WaveState free_particle_solution(const CoefficientSet& cs, double e0, double t, const Grid& grid,
                                 double x_c0, double p_c0) {
  if (e0 < 0) throw std::invalid_argument("free_particle_solution: E0 must be >= 0");
  FlowOptions fopt;
  double k0 = std::sqrt(2.0 * e0);

  H4State h4{x_c0, -p_c0, 0.0};
  Su2State th;
  double k_quad = 0.0;
  if (t > 0.0) {
    auto rr = riccati_via_linear(cs, t, std::max(t / 64.0, 1e-6), 0.0, fopt);
    if (rr.thetas.truncated || rr.thetas.times.back() + 1e-9 < t) {
      double pole = rr.u.events.empty() ? rr.thetas.times.back() : rr.u.events.front().time;
      throw std::domain_error("free_particle_solution: rho reaches zero at t=" +
                              std::to_string(pole));
    }
    th = rr.thetas.states.back();
    k_quad = th.theta_minus.real();  // int a e^{-2 theta0} = int K
    h4 = evolve_h4(cs, h4, t, t, fopt).states.back();
  }

  double th0 = th.theta_zero.real();
  double thp = th.theta_plus.real();
  double pref = std::exp(-0.5 * th0) / std::sqrt(2.0 * kPi);
  double carrier = k0 * std::exp(-th0);

  std::vector<cplx> amp(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    double u = grid.x(j) - h4.alpha;
    double phase = carrier * u - 0.5 * thp * u * u - h4.beta * u - (h4.s + e0 * k_quad);
    amp[j] = std::polar(pref, phase);
  }
  return WaveState(grid, std::move(amp), true);
}

double l2_distance(const WaveState& a, const WaveState& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("l2_distance: grid mismatch");
  double s = 0;
  for (std::size_t j = 0; j < a.amp.size(); ++j) s += std::norm(a.amp[j] - b.amp[j]);
  return std::sqrt(s * a.grid.dx());
}

}  // namespace ddpo
