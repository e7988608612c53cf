#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pam {

/// One-dimensional complex FFT of fixed length backed by FFTW. Plans are
/// created under a global lock (the FFTW planner is not reentrant); execution
/// uses the new-array interface and is safe from concurrent threads.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  /// In-place forward transform, sum_j x_j exp(-2 pi i jk/n).
  void forward(std::vector<std::complex<double>>& x) const;
  /// In-place unnormalized inverse transform.
  void backward(std::vector<std::complex<double>>& x) const;

 private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

}  // namespace pam
