#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ddpo {

/// Thin deterministic wrapper around FFTW (complex double, any length).
/// forward() applies sum_j x_j e^{-2 pi i jk/n} unnormalized; inverse()
/// includes the 1/n factor, so inverse(forward(x)) == x.
///
/// One instance is not safe for concurrent use (it owns the transform
/// buffer); distinct instances may run in parallel.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&&) = delete;

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* data) const;
  void inverse(std::complex<double>* data) const;

  void forward(std::vector<std::complex<double>>& data) const { forward(data.data()); }
  void inverse(std::vector<std::complex<double>>& data) const { inverse(data.data()); }

 private:
  std::size_t n_ = 0;
  void* fwd_ = nullptr;  // fftw_plan
  void* bwd_ = nullptr;
  void* buf_ = nullptr;  // fftw_complex[n]
};

}  // namespace ddpo
