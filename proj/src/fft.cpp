#include "ddpo/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace ddpo {

namespace {
// FFTW plan creation mutates global planner state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("Fft: size must be positive");
  buf_ = fftw_malloc(sizeof(fftw_complex) * n);
  if (!buf_) throw std::bad_alloc();
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("Fft: plan creation failed");
}

Fft::~Fft() {
  if (fwd_ || bwd_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  }
  if (buf_) fftw_free(buf_);
}

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_), fwd_(other.fwd_), bwd_(other.bwd_), buf_(other.buf_) {
  other.fwd_ = other.bwd_ = other.buf_ = nullptr;
  other.n_ = 0;
}

void Fft::forward(std::complex<double>* data) const {
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::memcpy(buf, data, sizeof(fftw_complex) * n_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(data, buf, sizeof(fftw_complex) * n_);
}

void Fft::inverse(std::complex<double>* data) const {
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::memcpy(buf, data, sizeof(fftw_complex) * n_);
  fftw_execute(static_cast<fftw_plan>(bwd_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    data[i] = std::complex<double>(buf[i][0] * scale, buf[i][1] * scale);
  }
}

}  // namespace ddpo
