#include "pam/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pam/errors.hpp"
#include "pam/numerics.hpp"
#include "pam/quadrature.hpp"

namespace pam {

namespace {

// Standard normal densities are negligible beyond this many deviations.
constexpr double kGaussCut = 12.0;

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

}  // namespace

double covariance_R(double beta, double a, double b) {
  const double p = 2.0 * beta;
  return 0.5 * (std::pow(std::abs(a), p) + std::pow(std::abs(b), p) - std::pow(std::abs(a - b), p));
}

double gauss_abs_moment(double alpha) {
  if (!(alpha > -1.0)) throw Error(ErrorCode::NonIntegrable, "E|Z|^alpha needs alpha > -1");
  return std::pow(2.0, 0.5 * alpha) * std::tgamma(0.5 * (alpha + 1.0)) / std::sqrt(kPi);
}

double shifted_abs_moment(double a, double e, double rel_tol) {
  if (!(e > -1.0)) throw Error(ErrorCode::NonIntegrable, "E|a-Z|^e needs e > -1");
  if (e == 0.0) return 1.0;
  a = std::abs(a);
  if (a == 0.0) return gauss_abs_moment(e);
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  if (a > kGaussCut) {
    // The kink of |a - z| lies outside the effective support of the density.
    return integrate_smooth([&](double z) { return std::pow(a - z, e) * phi(z); }, -kGaussCut,
                            kGaussCut, q);
  }
  // v = |z - a|: both sides of the kink fold onto (0, a + cut).
  auto folded = [&](double v) { return phi(a - v) + phi(a + v); };
  SingularIntegrand near{folded, e, 0.0};
  double total = integrate_singular_1d(near, 0.0, a, q);
  total += integrate_smooth([&](double v) { return std::pow(v, e) * folded(v); }, a,
                            a + kGaussCut, q);
  return total;
}

double spectral_constant(double h) {
  return std::tgamma(2.0 * h + 1.0) * std::sin(kPi * h) / (2.0 * kPi);
}

GammaKernel::GammaKernel(double h0)
    : h0_(h0), mode_(h0 == 0.5 ? Mode::Dirac : Mode::Density) {
  if (!(h0 >= 0.5 && h0 < 1.0)) throw Error(ErrorCode::OutOfRange, "H0 must lie in [1/2, 1)");
}

double GammaKernel::density(double r) const {
  if (mode_ == Mode::Dirac) {
    throw Error(ErrorCode::PreconditionViolation, "white-in-time kernel has no pointwise density");
  }
  return h0_ * (2.0 * h0_ - 1.0) * std::pow(std::abs(r), 2.0 * h0_ - 2.0);
}

double lambda_kernel_f(double lambda, double hk, double rel_tol) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "lambda must lie in [0, 1]");
  }
  const double e = 1.0 - 2.0 * hk;
  if (e == 0.0) return 1.0;
  if (lambda == 1.0) {
    if (2.0 * e <= -1.0) return std::numeric_limits<double>::infinity();
    return gauss_abs_moment(2.0 * e);
  }
  if (lambda == 0.0) {
    const double m = gauss_abs_moment(e);
    return m * m;
  }
  const double sigma = std::sqrt((1.0 - lambda) * (1.0 + lambda));
  const double inner_tol = std::max(rel_tol * 0.1, 1e-14);

  // Condition on X1 = x > 0 (the integrand is even in x):
  // f = 2 int_0^inf phi(x) x^e E|lambda x - sigma Z|^e dx.
  auto regular = [&](double x) {
    return 2.0 * phi(x) * std::pow(sigma, e) * shifted_abs_moment(lambda * x / sigma, e, inner_tol);
  };
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  const double knee = std::min(sigma / lambda, 1.0);
  double total = integrate_singular_1d(SingularIntegrand{regular, e, 0.0}, 0.0, knee, q);
  for (double lo = knee; lo < kGaussCut;) {
    const double hi = std::min(2.0 * lo, kGaussCut);
    total += integrate_smooth([&](double x) { return std::pow(x, e) * regular(x); }, lo, hi, q);
    lo = hi;
  }
  return total;
}

double lambda_kernel_min(double hk) {
  auto f = [hk](double l) { return lambda_kernel_f(l, hk, 1e-11); };
  if (1.0 - 2.0 * hk == 0.0) return 1.0;
  const bool divergent_end = hk >= 0.75;
  const int n = 40;
  const double top = divergent_end ? 1.0 - 1e-9 : 1.0;
  int best = 0;
  double best_value = f(0.0);
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = top * i / n;
  for (int i = 1; i <= n; ++i) {
    const double v = f(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = grid[std::max(best - 1, 0)];
  double hi = grid[std::min(best + 1, n)];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({best_value, f1, f2});
}

double pair_kernel_g(const PairKernelParams& p, double rel_tol) {
  if (!(p.a > 0.0 && p.b > 0.0)) {
    throw Error(ErrorCode::PreconditionViolation, "pair kernel needs a > 0 and b > 0");
  }
  if (!(p.hk > 0.0 && p.hk < 1.0)) throw Error(ErrorCode::OutOfRange, "Hk must lie in (0, 1)");
  const double h = p.hk;
  const double prefactor = 2.0 * kPi * std::pow(p.a, h - 1.0) * std::pow(p.b, 2.0 * h - 1.5) *
                           std::pow(p.a + p.b, 0.5 - h);
  if (h == 0.5) return prefactor;
  const double lambda = std::sqrt(p.a / (p.a + p.b));
  return prefactor * lambda_kernel_f(lambda, h, rel_tol);
}

std::complex<double> fourier_chaos_kernel(double t, std::span<const double> x,
                                          std::span<const double> s,
                                          std::span<const double> xi) {
  const size_t d = x.size();
  const size_t n = s.size();
  if (d == 0 || xi.size() != n * d) {
    throw Error(ErrorCode::PreconditionViolation, "frequency tuple does not match n * d");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return s[i] < s[j]; });
  for (size_t k = 0; k < n; ++k) {
    const double sk = s[order[k]];
    if (!(sk > 0.0 && sk < t)) throw Error(ErrorCode::DomainOrder, "times must lie in (0, t)");
    if (k > 0 && sk == s[order[k - 1]]) {
      throw Error(ErrorCode::DegenerateTimes, "two chaos times coincide");
    }
  }

  std::vector<double> partial(d, 0.0);
  double exponent = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const size_t idx = order[k];
    for (size_t c = 0; c < d; ++c) partial[c] += xi[idx * d + c];
    const double next = k + 1 < n ? s[order[k + 1]] : t;
    double norm2 = 0.0;
    for (double v : partial) norm2 += v * v;
    exponent -= 0.5 * (next - s[idx]) * norm2;
  }
  double phase = 0.0;
  for (size_t c = 0; c < d; ++c) phase -= x[c] * partial[c];
  return std::exp(exponent) * std::complex<double>(std::cos(phase), std::sin(phase));
}

double heat_kernel(double t, std::span<const double> x) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "heat kernel needs t > 0");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double d = static_cast<double>(x.size());
  return std::pow(2.0 * kPi * t, -0.5 * d) * std::exp(-r2 / (2.0 * t));
}

}  // namespace pam
