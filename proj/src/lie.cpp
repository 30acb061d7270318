#include "ddpo/lie.hpp"

#include <cmath>

#include "ddpo/fft.hpp"

namespace ddpo {

namespace {

using cplx = std::complex<double>;

bool nonzero(cplx v) { return v.real() != 0.0 || v.imag() != 0.0; }

double packet_width(const WaveState& psi) {
  double nsum = 0, xsum = 0, x2sum = 0;
  for (std::size_t j = 0; j < psi.grid.n; ++j) {
    double w = std::norm(psi.amp[j]);
    double x = psi.grid.x(j);
    nsum += w;
    xsum += w * x;
    x2sum += w * x * x;
  }
  if (nsum == 0) return 0;
  double mean = xsum / nsum;
  double var = x2sum / nsum - mean * mean;
  return var > 0 ? std::sqrt(var) : 0.0;
}

// Eight-point Lagrange weights at fractional offset s in [0,1) relative to
// the node block {-3,...,4}.
void lagrange8(double s, double* w) {
  static const double denom[8] = {
      -5040.0,  // -3: (-1)(-2)(-3)(-4)(-5)(-6)(-7) over...
      720.0, -240.0, 144.0, -144.0, 240.0, -720.0, 5040.0};
  double prod = 1.0;
  double d[8];
  for (int i = 0; i < 8; ++i) {
    d[i] = s - (i - 3);
    prod *= d[i];
  }
  for (int i = 0; i < 8; ++i) {
    w[i] = (d[i] == 0.0) ? 0.0 : prod / (d[i] * denom[i]);
  }
  if (prod == 0.0) {
    // s landed exactly on a node
    for (int i = 0; i < 8; ++i) w[i] = (d[i] == 0.0) ? 1.0 : 0.0;
  }
}

void dilate_real(WaveState& psi, double theta0) {
  const Grid& g = psi.grid;
  const std::size_t n = g.n;
  const std::size_t m = 4 * n;

  std::vector<cplx> spec(psi.amp);
  Fft fft_n(n);
  fft_n.forward(spec);

  std::vector<cplx> fine(m, 0.0);
  std::size_t half = n / 2;
  for (std::size_t j = 0; j < half; ++j) fine[j] = spec[j];
  for (std::size_t j = half + 1; j < n; ++j) fine[m - n + j] = spec[j];
  fine[half] = 0.5 * spec[half];  // split the Nyquist bin symmetrically
  fine[m - half] += 0.5 * spec[half];

  Fft fft_m(m);
  fft_m.inverse(fine);
  // inverse included 1/m; the interpolant needs 1/n
  double rescale = static_cast<double>(m) / static_cast<double>(n);
  for (auto& v : fine) v *= rescale;

  const double scale = std::exp(-theta0);
  const double dxf = g.dx() / 4.0;
  const double pref = std::exp(-0.5 * theta0);
  double w[8];
  for (std::size_t j = 0; j < n; ++j) {
    double y = scale * g.x(j);
    double u = (y - g.x_min) / dxf;
    double base = std::floor(u);
    lagrange8(u - base, w);
    long ib = static_cast<long>(base);
    cplx acc = 0;
    for (int i = 0; i < 8; ++i) {
      long idx = ib + (i - 3);
      idx %= static_cast<long>(m);
      if (idx < 0) idx += static_cast<long>(m);
      acc += w[i] * fine[static_cast<std::size_t>(idx)];
    }
    psi.amp[j] = pref * acc;
  }
}

void dilate_complex(WaveState& psi, cplx theta0) {
  const Grid& g = psi.grid;
  const std::size_t n = g.n;

  std::vector<cplx> spec(psi.amp);
  Fft fft(n);
  fft.forward(spec);

  const cplx scale = std::exp(-theta0);
  const cplx pref = std::exp(-0.5 * theta0);
  const cplx i_unit(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    cplx z = scale * g.x(j) - g.x_min;
    cplx acc = 0;
    for (std::size_t q = 0; q < n; ++q) {
      acc += spec[q] * std::exp(i_unit * (g.k(q) * z));
    }
    psi.amp[j] = pref * acc / static_cast<double>(n);
  }
  psi.non_unitary = true;
}

}  // namespace

void dilate(WaveState& psi, cplx theta0) {
  if (!nonzero(theta0)) return;
  if (!psi.continuum) {
    double width = packet_width(psi);
    if (width > 0 && std::exp(theta0.real()) * width < 2.0 * psi.grid.dx())
      throw ResolutionError("dilation shrinks packet support below four grid cells");
  }
  if (theta0.imag() == 0.0)
    dilate_real(psi, theta0.real());
  else
    dilate_complex(psi, theta0);
}

WaveState apply_lie(const WaveState& psi0, const H4State& h4, const Su2State& su2) {
  WaveState psi = psi0;
  const Grid& g = psi.grid;
  const cplx i_unit(0.0, 1.0);

  if (nonzero(su2.theta_minus)) {
    Fft fft(g.n);
    fft.forward(psi.amp);
    for (std::size_t j = 0; j < g.n; ++j) {
      double k = g.k(j);
      psi.amp[j] *= std::exp(-i_unit * (0.5 * su2.theta_minus * k * k));
    }
    fft.inverse(psi.amp);
  }

  dilate(psi, su2.theta_zero);

  if (nonzero(su2.theta_plus)) {
    for (std::size_t j = 0; j < g.n; ++j) {
      double x = g.x(j);
      psi.amp[j] *= std::exp(-i_unit * (0.5 * su2.theta_plus * x * x));
    }
  }

  if (h4.beta != 0.0) {
    for (std::size_t j = 0; j < g.n; ++j)
      psi.amp[j] *= std::polar(1.0, -h4.beta * g.x(j));
  }

  if (h4.alpha != 0.0) {
    Fft fft(g.n);
    fft.forward(psi.amp);
    for (std::size_t j = 0; j < g.n; ++j)
      psi.amp[j] *= std::polar(1.0, -g.k(j) * h4.alpha);
    fft.inverse(psi.amp);
  }

  if (h4.s != 0.0) {
    cplx phase = std::polar(1.0, -h4.s);
    for (auto& a : psi.amp) a *= phase;
  }

  if (su2.theta_plus.imag() != 0.0 || su2.theta_zero.imag() != 0.0 ||
      su2.theta_minus.imag() != 0.0)
    psi.non_unitary = true;
  return psi;
}

}  // namespace ddpo
