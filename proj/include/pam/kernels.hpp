#pragma once

#include <complex>
#include <span>

namespace pam {

/// Fractional Brownian covariance (|a|^{2b} + |b|^{2b} - |a-b|^{2b}) / 2 with exponent beta.
double covariance_R(double beta, double a, double b);

/// E|Z|^alpha for a standard normal Z; alpha must exceed -1.
double gauss_abs_moment(double alpha);

/// E|a - Z|^e for a standard normal Z and e > -1.
double shifted_abs_moment(double a, double e, double rel_tol = 1e-11);

/// Normalization c of the spatial spectral measure c |xi|^{1-2H} d xi
/// that reproduces the fractional Brownian covariance in one coordinate.
double spectral_constant(double h);

/// Temporal covariance density of the noise derivative. With H0 = 1/2 it is
/// a Dirac mass and only integration routines may consume it.
class GammaKernel {
 public:
  enum class Mode { Dirac, Density };

  explicit GammaKernel(double h0);

  Mode mode() const { return mode_; }
  double h0() const { return h0_; }
  /// H0 (2H0 - 1) |r|^{2H0-2}; throws PreconditionViolation in Dirac mode.
  double density(double r) const;

 private:
  double h0_;
  Mode mode_;
};

/// f(lambda) = E|X1 (lambda X1 - sqrt(1-lambda^2) X2)|^{1-2H} for independent
/// standard normals. Returns +infinity at lambda = 1 when H >= 3/4.
double lambda_kernel_f(double lambda, double hk, double rel_tol = 1e-10);

/// Minimum of lambda_kernel_f over [0, 1], located by grid search and golden section.
double lambda_kernel_min(double hk);

struct PairKernelParams {
  /// Weight on |eta_2|^2.
  double a = 1.0;
  /// Weight on |eta_1|^2.
  double b = 1.0;
  double hk = 0.5;
};

/// g = integral over R^2 of exp(-a eta2^2/2 - b eta1^2/2) |eta1|^{1-2H} |eta2-eta1|^{1-2H}
/// = 2 pi a^{H-1} b^{2H-3/2} (a+b)^{1/2-H} f(sqrt(a/(a+b))).
double pair_kernel_g(const PairKernelParams& p, double rel_tol = 1e-10);

/// Fourier transform in the spatial variables of the n-th chaos kernel with
/// unit initial datum. `s` holds n distinct times in (0, t); `xi` holds n
/// frequency vectors of dimension d = x.size(), row-major.
std::complex<double> fourier_chaos_kernel(double t, std::span<const double> x,
                                          std::span<const double> s, std::span<const double> xi);

/// Gaussian heat kernel of (1/2) Laplacian in d = x.size() dimensions.
double heat_kernel(double t, std::span<const double> x);

}  // namespace pam
