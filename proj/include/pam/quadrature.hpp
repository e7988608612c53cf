#pragma once

#include <functional>
#include <vector>

namespace pam {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  /// Maximum bisection depth of the adaptive Gauss-Kronrod driver.
  int max_subdivisions = 12;
  /// Endpoint exponents must be strictly greater than this.
  double singular_exponent_limit = -1.0;
};

/// Integrand of the form (x-a)^left_exponent (b-x)^right_exponent regular(x).
struct SingularIntegrand {
  std::function<double(double)> regular;
  double left_exponent = 0.0;
  double right_exponent = 0.0;
};

/// Integral over [a, b] of a SingularIntegrand. Each endpoint singularity is
/// removed by the substitution x - a = w^{1/(1+exponent)} before adaptive
/// Gauss-Kronrod subdivision.
double integrate_singular_1d(const SingularIntegrand& f, double a, double b,
                             const QuadratureSpec& spec = {});

/// Smooth adaptive integral over [a, b]; thin wrapper used by composite rules.
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {});

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// m-point Gauss-Legendre rule on [0, 1].
GaussRule gauss_legendre(int m);

/// Lower bound on admissible simplex exponents is -1 + kSimplexEpsilon.
inline constexpr double kSimplexEpsilon = 1e-6;

struct SimplexIntegrand {
  std::vector<double> alpha;
  double t = 1.0;

  int m() const { return static_cast<int>(alpha.size()); }
  double alpha_sum() const;
  /// Throws PreconditionViolation on m == 0, t <= 0 or exponents outside (-1+eps, 1).
  void check() const;
};

/// Integral over 0 < r_1 < ... < r_m < t of prod (r_i - r_{i-1})^alpha_i, r_0 = 0.
/// Evaluated through the iterated beta (Dirichlet) closed form.
double simplex_integral_J(const SimplexIntegrand& spec);

/// Same integral by nested one-dimensional singular quadrature.
double simplex_integral_J_nested(const SimplexIntegrand& spec, const QuadratureSpec& q = {});

/// True iff J_m <= kappa^m t^{|alpha|+m} / Gamma(|alpha|+m+1).
bool simplex_bound_check(const SimplexIntegrand& spec, double kappa);

struct SandwichFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> x;
  std::vector<double> value;
};

/// Integral of u^{-alpha} (u+x)^{-beta} over [0, eps].
double sandwich_integral(double alpha, double beta, double eps, double x,
                         const QuadratureSpec& spec = {});

/// Least-squares slope of log sandwich_integral against log x.
SandwichFit sandwich_exponent_fit(double alpha, double beta, double eps,
                                  const std::vector<double>& x_sequence,
                                  const QuadratureSpec& spec = {});

}  // namespace pam
