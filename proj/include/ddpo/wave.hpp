#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ddpo {

/// Uniform periodic grid x_j = x_min + j dx, j = 0..n-1, n a power of two.
/// Momentum follows the DFT convention: k_j = 2 pi j / (n dx) for j < n/2
/// and 2 pi (j - n) / (n dx) above.
struct Grid {
  double x_min = -1, x_max = 1;
  std::size_t n = 0;

  Grid() = default;
  Grid(double min, double max, std::size_t count) : x_min(min), x_max(max), n(count) {
    if (!(max > min)) throw std::invalid_argument("Grid: x_max must exceed x_min");
    if (count < 2 || (count & (count - 1)) != 0)
      throw std::invalid_argument("Grid: point count must be a power of two");
  }

  static Grid centered(double half_width, std::size_t count) {
    return Grid(-half_width, half_width, count);
  }
  /// All nodes strictly positive: x_j = (j + 1/2) dx with dx = x_max/n.
  static Grid staggered_positive(double x_max, std::size_t count) {
    double dx = x_max / static_cast<double>(count);
    return Grid(0.5 * dx, x_max + 0.5 * dx, count);
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double length() const { return x_max - x_min; }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
  double k(std::size_t j) const {
    double dk = 2.0 * 3.14159265358979323846 / length();
    auto half = n / 2;
    return dk * (j < half ? static_cast<double>(j)
                          : static_cast<double>(j) - static_cast<double>(n));
  }
  double k_max() const { return 3.14159265358979323846 / dx(); }

  bool operator==(const Grid&) const = default;
};

/// Complex amplitudes on a grid. `continuum` marks non-normalizable basis
/// states (plane waves, posmom states); `non_unitary` is set once a
/// complex-parameter transformation has been applied, after which the norm
/// is tracked but no longer asserted.
struct WaveState {
  Grid grid;
  std::vector<std::complex<double>> amp;
  bool continuum = false;
  bool non_unitary = false;

  WaveState() = default;
  WaveState(Grid g, std::vector<std::complex<double>> a, bool cont = false)
      : grid(g), amp(std::move(a)), continuum(cont) {
    if (amp.size() != grid.n) throw std::invalid_argument("WaveState: amplitude size mismatch");
  }
};

struct Moments {
  double mean_x = 0, mean_p = 0;
  double delta_x = 0, delta_p = 0;
  double norm = 0;
  bool windowed = false;  // moments of a truncated window (continuum input)
};

double norm_sq(const WaveState& psi);
std::complex<double> inner(const WaveState& a, const WaveState& b);
std::vector<double> density(const WaveState& psi);

/// Grid quadrature for X-moments, spectral route for P-moments.
Moments moments(const WaveState& psi);

/// <psi| a/2 P^2 + b/2 X^2 + c/2 (XP+PX) + d P + e X + f |psi> / <psi|psi>.
double quadratic_hamiltonian_expectation(const WaveState& psi, double a, double b, double c,
                                         double d, double e, double f);

/// Oscillator eigenfunction of frequency `omega` (omega = 1 gives the unit
/// oscillator): phi_n(x) = omega^{1/4} phi_n^{unit}(sqrt(omega) x),
/// renormalized on the grid. The grid must contain six standard deviations.
WaveState hermite_state(unsigned n, const Grid& grid, double omega = 1.0);

/// Infinite-well eigenfunction sqrt(2/width) sin(n pi x / width) on
/// [0, width], zero outside; n >= 1.
WaveState well_state(unsigned n, double width, const Grid& grid);

/// Plane wave e^{i k0 x} / sqrt(2 pi); continuum flag set.
WaveState plane_state(double k0, const Grid& grid);

/// Dilation eigenfunction g_xi(x) = e^{i xi ln(x/x0)} / sqrt(2 pi x/x0) / x0^...
/// sampled for x > 0 only (cells elsewhere are zero). Cells too coarse for
/// the log phase are filled with their exact cell average. Continuum flag set.
WaveState posmom_state(double xi, double x0, const Grid& grid);

}  // namespace ddpo
