#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ddpo/coeffs.hpp"
#include "ddpo/wave.hpp"

namespace ddpo {

/// Coefficient callables for the split-step propagator. Built either from a
/// CoefficientSet or from arbitrary functions (e.g. a transformed-frame
/// Hamiltonian with K coefficients).
struct SplitStepHamiltonian {
  std::function<double(double)> a, b, c, d, e, f;

  static SplitStepHamiltonian from(const CoefficientSet& cs);
  static SplitStepHamiltonian quadratic(std::function<double(double)> a,
                                        std::function<double(double)> b,
                                        std::function<double(double)> c);
};

/// Second-order Strang propagator for i dpsi/dt = H(t) psi with
/// H = a/2 P^2 + b/2 X^2 + c/2 (XP+PX) + d P + e X + f (real coefficients).
/// Per step: half position factor, half exact dilation for the c term, full
/// momentum factor, then the mirror halves; coefficient time-integrals are
/// taken by Simpson's rule on each sub-interval. Norm-preserving to
/// roundoff. A warning is recorded once if any sub-phase exceeds pi/4 per
/// step (under-resolved in time).
class SplitStepPropagator {
 public:
  SplitStepPropagator(SplitStepHamiltonian h, WaveState psi0, double dt);

  /// Advances with fixed steps; `t` should be close to a multiple of dt
  /// (the final partial step is shortened to land exactly).
  void advance_to(double t);

  double time() const { return t_; }
  const WaveState& state() const { return psi_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void step(double h);

  SplitStepHamiltonian ham_;
  WaveState psi_;
  double dt_;
  double t_ = 0.0;
  bool warned_ = false;
  std::vector<std::string> warnings_;
};

struct PropagationResult {
  std::vector<double> times;
  std::vector<WaveState> frames;
  std::vector<std::string> warnings;
};

/// Propagates psi0 over [0, horizon], returning frames every dt_output.
PropagationResult direct_propagate(const CoefficientSet& cs, const WaveState& psi0,
                                   double horizon, double dt, double dt_output);

}  // namespace ddpo
