#include "pam/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "pam/errors.hpp"

namespace pam {

namespace {
std::mutex& planner_lock() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n), fwd_(nullptr), bwd_(nullptr) {
  if (n == 0) throw Error(ErrorCode::PreconditionViolation, "FFT length must be positive");
  std::lock_guard<std::mutex> lock(planner_lock());
  std::vector<std::complex<double>> buf(n);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  const int len = static_cast<int>(n);
  fwd_ = fftw_plan_dft_1d(len, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_1d(len, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_lock());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(std::vector<std::complex<double>>& x) const {
  if (x.size() != n_) throw Error(ErrorCode::PreconditionViolation, "FFT length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::backward(std::vector<std::complex<double>>& x) const {
  if (x.size() != n_) throw Error(ErrorCode::PreconditionViolation, "FFT length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

}  // namespace pam
