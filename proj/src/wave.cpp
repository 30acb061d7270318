#include "ddpo/wave.hpp"

#include <cmath>

#include "ddpo/fft.hpp"
#include "ddpo/special.hpp"

namespace ddpo {

namespace {
constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;
}  // namespace

double norm_sq(const WaveState& psi) {
  double s = 0;
  for (const auto& a : psi.amp) s += std::norm(a);
  return s * psi.grid.dx();
}

std::complex<double> inner(const WaveState& a, const WaveState& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner: grid mismatch");
  cplx s = 0;
  for (std::size_t j = 0; j < a.amp.size(); ++j) s += std::conj(a.amp[j]) * b.amp[j];
  return s * a.grid.dx();
}

std::vector<double> density(const WaveState& psi) {
  std::vector<double> d(psi.amp.size());
  for (std::size_t j = 0; j < psi.amp.size(); ++j) d[j] = std::norm(psi.amp[j]);
  return d;
}

Moments moments(const WaveState& psi) {
  const Grid& g = psi.grid;
  Moments m;
  m.windowed = psi.continuum;

  double nsum = 0, xsum = 0, x2sum = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    double w = std::norm(psi.amp[j]);
    double x = g.x(j);
    nsum += w;
    xsum += w * x;
    x2sum += w * x * x;
  }
  double dx = g.dx();
  m.norm = nsum * dx;
  if (m.norm == 0) return m;
  m.mean_x = xsum / nsum;
  double var_x = x2sum / nsum - m.mean_x * m.mean_x;
  m.delta_x = var_x > 0 ? std::sqrt(var_x) : 0.0;

  std::vector<cplx> spec(psi.amp);
  Fft fft(g.n);
  fft.forward(spec);
  double psum = 0, ksum = 0, k2sum = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    double w = std::norm(spec[j]);
    double k = g.k(j);
    psum += w;
    ksum += w * k;
    k2sum += w * k * k;
  }
  m.mean_p = ksum / psum;
  double var_p = k2sum / psum - m.mean_p * m.mean_p;
  m.delta_p = var_p > 0 ? std::sqrt(var_p) : 0.0;
  return m;
}

double quadratic_hamiltonian_expectation(const WaveState& psi, double a, double b, double c,
                                         double d, double e, double f) {
  const Grid& g = psi.grid;
  double dx = g.dx();

  double nsum = 0, xpart = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    double w = std::norm(psi.amp[j]);
    double x = g.x(j);
    nsum += w;
    xpart += w * (0.5 * b * x * x + e * x + f);
  }
  if (nsum == 0) throw std::invalid_argument("expectation of a null state");

  std::vector<cplx> spec(psi.amp);
  Fft fft(g.n);
  fft.forward(spec);
  double ppart = 0, specsum = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    double w = std::norm(spec[j]);
    double k = g.k(j);
    ppart += w * (0.5 * a * k * k + d * k);
    specsum += w;
  }

  double sym = 0;
  if (c != 0.0) {
    // <XP+PX> = 2 Re <X psi | P psi>
    for (std::size_t j = 0; j < g.n; ++j) spec[j] *= g.k(j);
    fft.inverse(spec);
    cplx acc = 0;
    for (std::size_t j = 0; j < g.n; ++j) acc += std::conj(psi.amp[j]) * g.x(j) * spec[j];
    sym = 2.0 * acc.real() * dx;
  }

  return xpart / nsum + ppart / specsum + 0.5 * c * sym / (nsum * dx);
}

WaveState hermite_state(unsigned n, const Grid& grid, double omega) {
  if (omega <= 0) throw std::invalid_argument("hermite_state: omega must be > 0");
  double sigma = std::sqrt((n + 0.5) / omega);
  if (grid.x_min > -6.0 * sigma || grid.x_max < 6.0 * sigma)
    throw std::invalid_argument("hermite_state: grid does not contain 6 standard deviations");

  std::vector<cplx> amp(grid.n);
  double root = std::sqrt(omega);
  double prefactor = std::sqrt(root);  // omega^{1/4}
  for (std::size_t j = 0; j < grid.n; ++j)
    amp[j] = prefactor * hermite_function(n, root * grid.x(j));

  WaveState psi(grid, std::move(amp));
  double nrm = std::sqrt(norm_sq(psi));
  for (auto& a : psi.amp) a /= nrm;
  return psi;
}

WaveState well_state(unsigned n, double width, const Grid& grid) {
  if (n == 0) throw std::invalid_argument("well_state: n starts at 1");
  if (width <= 0) throw std::invalid_argument("well_state: width must be > 0");
  if (grid.x_min > 0.0 || grid.x_max < width)
    throw std::invalid_argument("well_state: grid must cover [0, width]");

  std::vector<cplx> amp(grid.n, 0.0);
  double scale = std::sqrt(2.0 / width);
  for (std::size_t j = 0; j < grid.n; ++j) {
    double x = grid.x(j);
    if (x >= 0.0 && x <= width) amp[j] = scale * std::sin(n * kPi * x / width);
  }
  WaveState psi(grid, std::move(amp));
  double nrm = std::sqrt(norm_sq(psi));
  for (auto& a : psi.amp) a /= nrm;
  return psi;
}

WaveState plane_state(double k0, const Grid& grid) {
  std::vector<cplx> amp(grid.n);
  double scale = 1.0 / std::sqrt(2.0 * kPi);
  for (std::size_t j = 0; j < grid.n; ++j) amp[j] = std::polar(scale, k0 * grid.x(j));
  return WaveState(grid, std::move(amp), true);
}

WaveState posmom_state(double xi, double x0, const Grid& grid) {
  if (x0 <= 0) throw std::invalid_argument("posmom_state: x0 must be > 0");
  double dx = grid.dx();
  std::vector<cplx> amp(grid.n, 0.0);
  double scale = std::sqrt(x0 / (2.0 * kPi));  // (2pi)^{-1/2} (x/x0)^{-1/2} = scale/sqrt(x)
  cplx half_plus_ixi(0.5, xi);
  double phase0 = -xi * std::log(x0);

  // antiderivative of x^{-1/2 + i xi}: x^{1/2 + i xi} / (1/2 + i xi)
  auto anti = [&](double x) -> cplx {
    if (x <= 0.0) return 0.0;
    return std::polar(std::sqrt(x), xi * std::log(x)) / half_plus_ixi;
  };

  for (std::size_t j = 0; j < grid.n; ++j) {
    double x = grid.x(j);
    if (x <= 0.0) continue;
    if (std::abs(x) < 0.25 * dx)
      throw std::invalid_argument("posmom_state: grid node at X=0; use a staggered grid");
    double lo = x - 0.5 * dx, hi = x + 0.5 * dx;
    if (lo < 0.0) lo = 0.0;
    // phase advance of xi ln x across the cell; averaged exactly when the
    // pointwise sample would alias
    bool averaged = lo == 0.0 || xi * std::log(hi / lo) > 0.5 || xi * std::log(hi / lo) < -0.5;
    cplx g;
    if (averaged) {
      g = scale * (anti(hi) - anti(lo)) / dx;
    } else {
      g = std::polar(scale / std::sqrt(x), xi * std::log(x));
    }
    amp[j] = g * std::polar(1.0, phase0);
  }
  return WaveState(grid, std::move(amp), true);
}

}  // namespace ddpo
