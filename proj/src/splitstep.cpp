#include "ddpo/splitstep.hpp"

#include <cmath>

#include "ddpo/fft.hpp"
#include "ddpo/lie.hpp"

namespace ddpo {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

// Multiplies v_j by exp(-i (q2 x_j^2 + q1 x_j)) for x_j = x0 + j h over
// [begin, end). Incremental complex rotations with periodic exact refresh;
// the second phase difference is constant, so two multiplies per point.
void quadratic_phase(std::vector<cplx>& v, std::size_t begin, std::size_t end, double x0,
                     double h, double q2, double q1) {
  auto phase_at = [&](std::size_t j) {
    double x = x0 + h * static_cast<double>(j - begin);
    return -(q2 * x * x + q1 * x);
  };
  cplx r = std::polar(1.0, -2.0 * q2 * h * h);
  cplx f = 0, m = 0;
  for (std::size_t j = begin; j < end; ++j) {
    if ((j - begin) % 1024 == 0) {  // refresh to stop drift
      double p0 = phase_at(j);
      f = std::polar(1.0, p0);
      m = std::polar(1.0, phase_at(j + 1) - p0);
    }
    v[j] *= f;
    f *= m;
    m *= r;
  }
}

// Simpson integral of g over [t, t+h].
double simpson(const std::function<double(double)>& g, double t, double h) {
  return h / 6.0 * (g(t) + 4.0 * g(t + 0.5 * h) + g(t + h));
}

}  // namespace

SplitStepHamiltonian SplitStepHamiltonian::from(const CoefficientSet& cs) {
  SplitStepHamiltonian h;
  h.a = [fn = cs.a](double t) { return fn(t); };
  h.b = [fn = cs.b](double t) { return fn(t); };
  h.c = [fn = cs.c](double t) { return fn(t); };
  h.d = [fn = cs.d](double t) { return fn(t); };
  h.e = [fn = cs.e](double t) { return fn(t); };
  h.f = [fn = cs.f](double t) { return fn(t); };
  return h;
}

SplitStepHamiltonian SplitStepHamiltonian::quadratic(std::function<double(double)> a,
                                                     std::function<double(double)> b,
                                                     std::function<double(double)> c) {
  SplitStepHamiltonian h;
  h.a = std::move(a);
  h.b = std::move(b);
  h.c = std::move(c);
  auto zero = [](double) { return 0.0; };
  h.d = zero;
  h.e = zero;
  h.f = zero;
  return h;
}

SplitStepPropagator::SplitStepPropagator(SplitStepHamiltonian h, WaveState psi0, double dt)
    : ham_(std::move(h)), psi_(std::move(psi0)), dt_(dt) {
  if (dt <= 0) throw std::invalid_argument("SplitStepPropagator: dt must be > 0");
}

void SplitStepPropagator::step(double h) {
  const Grid& g = psi_.grid;
  double t = t_;

  // position factor over [t, t+h/2]
  double ib1 = simpson(ham_.b, t, 0.5 * h);
  double ie1 = simpson(ham_.e, t, 0.5 * h);
  double if1 = simpson(ham_.f, t, 0.5 * h);
  // momentum factor over [t, t+h]
  double ia = simpson(ham_.a, t, h);
  double id = simpson(ham_.d, t, h);
  // dilation half-angles
  double ic1 = simpson(ham_.c, t, 0.5 * h);
  double ic2 = simpson(ham_.c, t + 0.5 * h, 0.5 * h);
  // mirror position factor over [t+h/2, t+h]
  double ib2 = simpson(ham_.b, t + 0.5 * h, 0.5 * h);
  double ie2 = simpson(ham_.e, t + 0.5 * h, 0.5 * h);
  double if2 = simpson(ham_.f, t + 0.5 * h, 0.5 * h);

  if (!warned_) {
    double xr = std::max(std::abs(g.x_min), std::abs(g.x_max));
    double km = g.k_max();
    double phase = std::max(std::abs(ib1 + ib2) * 0.5 * xr * xr + std::abs(ie1 + ie2) * xr,
                            std::abs(ia) * 0.5 * km * km + std::abs(id) * km);
    if (phase > 0.25 * kPi) {
      warnings_.push_back("time step under-resolves the phase (max phase " +
                          std::to_string(phase) + " rad at t=" + std::to_string(t) + ")");
      warned_ = true;
    }
  }

  quadratic_phase(psi_.amp, 0, g.n, g.x_min, g.dx(), 0.5 * ib1, ie1);
  if (ic1 != 0.0) dilate(psi_, cplx(ic1, 0.0));

  Fft fft(g.n);
  fft.forward(psi_.amp);
  std::size_t half = g.n / 2;
  double dk = 2.0 * kPi / g.length();
  quadratic_phase(psi_.amp, 0, half, 0.0, dk, 0.5 * ia, id);
  quadratic_phase(psi_.amp, half, g.n, -static_cast<double>(half) * dk, dk, 0.5 * ia, id);
  fft.inverse(psi_.amp);

  if (ic2 != 0.0) dilate(psi_, cplx(ic2, 0.0));
  quadratic_phase(psi_.amp, 0, g.n, g.x_min, g.dx(), 0.5 * ib2, ie2);

  double iff = if1 + if2;
  if (iff != 0.0) {
    cplx ph = std::polar(1.0, -iff);
    for (auto& a : psi_.amp) a *= ph;
  }
  t_ = t + h;
}

void SplitStepPropagator::advance_to(double t) {
  while (t - t_ > 1e-12 * std::max(1.0, std::abs(t))) {
    double h = std::min(dt_, t - t_);
    step(h);
  }
}

PropagationResult direct_propagate(const CoefficientSet& cs, const WaveState& psi0,
                                   double horizon, double dt, double dt_output) {
  SplitStepPropagator prop(SplitStepHamiltonian::from(cs), psi0, dt);
  PropagationResult out;
  std::size_t frames = static_cast<std::size_t>(std::floor(horizon / dt_output + 1e-9));
  out.times.push_back(0.0);
  out.frames.push_back(psi0);
  for (std::size_t i = 1; i <= frames; ++i) {
    double t = dt_output * static_cast<double>(i);
    prop.advance_to(t);
    out.times.push_back(t);
    out.frames.push_back(prop.state());
  }
  out.warnings = prop.warnings();
  return out;
}

}  // namespace ddpo
