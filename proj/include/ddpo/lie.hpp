#pragma once

#include <stdexcept>

#include "ddpo/flows.hpp"
#include "ddpo/wave.hpp"

namespace ddpo {

class ResolutionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dilation generator action psi(x) -> e^{-theta0/2} psi(e^{-theta0} x).
/// Real theta0 uses band-limited resampling (4x zero-padded spectrum,
/// 8-point Lagrange on the fine grid), which keeps the operation unitary to
/// near machine precision. Complex theta0 evaluates the trigonometric
/// interpolant at complex-scaled nodes and marks the state non-unitary.
/// Throws ResolutionError when the rescaled packet would drop below four
/// grid cells of support.
void dilate(WaveState& psi, std::complex<double> theta0);

/// Applies the six-operator solution
///   e^{-is} e^{-i alpha P} e^{-i beta X} e^{-i theta+ X^2/2}
///   e^{-i theta0 (XP+PX)/2} e^{-i theta- P^2/2}  psi0
/// right to left on the grid. Real parameters preserve the norm; complex
/// theta's switch the state to norm-tracking (non-unitary) mode.
WaveState apply_lie(const WaveState& psi0, const H4State& h4, const Su2State& su2);

}  // namespace ddpo
