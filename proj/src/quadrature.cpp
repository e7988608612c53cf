#include "pam/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/numerics.hpp"

namespace pam {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
using Gauss = boost::math::quadrature::gauss<double, 15>;

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod_panel(const std::function<double(double)>& f, double a, double b, double& l1) {
  double ignored = 0.0;
  double local_l1 = 0.0;
  const double value = Kronrod::integrate(f, a, b, 0, 0.0, &ignored, &local_l1);
  const double gauss = Gauss::integrate(f, a, b);
  l1 += local_l1;
  return {a, b, value, std::abs(value - gauss)};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                const QuadratureSpec& spec) {
  if (a == b) return 0.0;
  double l1 = 0.0;
  std::priority_queue<Panel> panels;
  panels.push(kronrod_panel(f, a, b, l1));
  double value = panels.top().value;
  double error = panels.top().error;
  const std::size_t max_panels = std::size_t{1} << std::min(spec.max_subdivisions, 24);
  auto allowed = [&] {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(value), floor});
  };
  while (error > allowed() && panels.size() < max_panels) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    panels.pop();
    const Panel left = kronrod_panel(f, worst.a, mid, l1);
    const Panel right = kronrod_panel(f, mid, worst.b, l1);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  if (!std::isfinite(value) || error > 10.0 * allowed()) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << a << ", " << b << "] stopped with error " << error
       << " (allowed " << allowed() << ")";
    throw Error(ErrorCode::ToleranceNotMet, os.str());
  }
  return value;
}

void check_exponent(double e, const QuadratureSpec& spec) {
  if (!(e > spec.singular_exponent_limit) || !(e > -1.0)) {
    std::ostringstream os;
    os << "endpoint exponent " << e << " is not integrable";
    throw Error(ErrorCode::NonIntegrableEndpoint, os.str());
  }
}

}  // namespace

GaussRule gauss_legendre(int m) {
  if (m < 1) throw Error(ErrorCode::PreconditionViolation, "Gauss rule needs at least one node");
  GaussRule rule;
  rule.x.resize(static_cast<size_t>(m));
  rule.w.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.x[static_cast<size_t>(i)] = 0.5 * (1.0 - z);
    rule.w[static_cast<size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
  return adaptive(f, a, b, spec);
}

double integrate_singular_1d(const SingularIntegrand& f, double a, double b,
                             const QuadratureSpec& spec) {
  check_exponent(f.left_exponent, spec);
  check_exponent(f.right_exponent, spec);
  if (!(b > a)) {
    if (a == b) return 0.0;
    throw Error(ErrorCode::PreconditionViolation, "integration interval must satisfy a < b");
  }
  const double mid = 0.5 * (a + b);
  const double el = f.left_exponent;
  const double er = f.right_exponent;

  // Left half: x = a + w^{1/(1+el)} turns (x-a)^el dx into dw / (1+el).
  double left = 0.0;
  if (el == 0.0) {
    left = adaptive([&](double x) { return f.regular(x) * std::pow(b - x, er); }, a, mid, spec);
  } else {
    const double p = 1.0 / (1.0 + el);
    const double wmax = std::pow(mid - a, 1.0 + el);
    left = adaptive(
        [&](double w) {
          const double x = a + std::pow(w, p);
          return f.regular(x) * std::pow(b - x, er) * p;
        },
        0.0, wmax, spec);
  }

  double right = 0.0;
  if (er == 0.0) {
    right = adaptive([&](double x) { return f.regular(x) * std::pow(x - a, el); }, mid, b, spec);
  } else {
    const double p = 1.0 / (1.0 + er);
    const double wmax = std::pow(b - mid, 1.0 + er);
    right = adaptive(
        [&](double w) {
          const double x = b - std::pow(w, p);
          return f.regular(x) * std::pow(x - a, el) * p;
        },
        0.0, wmax, spec);
  }
  return left + right;
}

double SimplexIntegrand::alpha_sum() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

void SimplexIntegrand::check() const {
  if (alpha.empty()) throw Error(ErrorCode::PreconditionViolation, "simplex order must be >= 1");
  if (!(t > 0.0)) throw Error(ErrorCode::PreconditionViolation, "simplex horizon must be > 0");
  for (double a : alpha) {
    if (!(a > -1.0 + kSimplexEpsilon) || !(a < 1.0)) {
      std::ostringstream os;
      os << "simplex exponent " << a << " outside (-1+" << kSimplexEpsilon << ", 1)";
      throw Error(ErrorCode::PreconditionViolation, os.str());
    }
  }
}

double simplex_integral_J(const SimplexIntegrand& spec) {
  spec.check();
  // Dirichlet integral over the gaps r_i - r_{i-1}; the slack t - r_m carries exponent 0.
  const double total = spec.alpha_sum() + spec.m();
  if (total + 1.0 < 150.0) {
    double value = std::pow(spec.t, total) / std::tgamma(total + 1.0);
    for (double a : spec.alpha) value *= std::tgamma(a + 1.0);
    return value;
  }
  double log_value = total * std::log(spec.t) - std::lgamma(total + 1.0);
  for (double a : spec.alpha) log_value += std::lgamma(a + 1.0);
  return std::exp(log_value);
}

namespace {

// G_k(r) = integral over 0 < r_1 < ... < r_{k-1} < r of prod_{i<=k} gaps^alpha_i, with r_k = r.
double nested_density(const std::vector<double>& alpha, int k, double r, const QuadratureSpec& q) {
  if (k == 1) return std::pow(r, alpha[0]);
  double beta_prev = static_cast<double>(k - 2);
  for (int i = 0; i < k - 1; ++i) beta_prev += alpha[static_cast<size_t>(i)];
  SingularIntegrand f;
  f.left_exponent = beta_prev;
  f.right_exponent = alpha[static_cast<size_t>(k - 1)];
  f.regular = [&, k](double s) {
    return nested_density(alpha, k - 1, s, q) / std::pow(s, beta_prev);
  };
  return integrate_singular_1d(f, 0.0, r, q);
}

}  // namespace

double simplex_integral_J_nested(const SimplexIntegrand& spec, const QuadratureSpec& q) {
  spec.check();
  const int m = spec.m();
  const double beta_m = spec.alpha_sum() + m - 1.0;
  SingularIntegrand f;
  f.left_exponent = beta_m;
  f.regular = [&](double r) { return nested_density(spec.alpha, m, r, q) / std::pow(r, beta_m); };
  return integrate_singular_1d(f, 0.0, spec.t, q);
}

bool simplex_bound_check(const SimplexIntegrand& spec, double kappa) {
  const double j = simplex_integral_J(spec);
  const double total = spec.alpha_sum() + spec.m();
  const double bound =
      std::pow(kappa, spec.m()) * std::pow(spec.t, total) / std::tgamma(total + 1.0);
  return j <= bound * (1.0 + 1e-12);
}

double sandwich_integral(double alpha, double beta, double eps, double x,
                         const QuadratureSpec& spec) {
  if (!(x > 0.0) || !(eps > 0.0)) {
    throw Error(ErrorCode::PreconditionViolation, "sandwich integral needs x > 0 and eps > 0");
  }
  auto tail = [&](double u) { return std::pow(u, -alpha) * std::pow(u + x, -beta); };
  const double first = std::min(x, eps);
  SingularIntegrand head{[&](double u) { return std::pow(u + x, -beta); }, -alpha, 0.0};
  double total = integrate_singular_1d(head, 0.0, first, spec);
  // Geometric panels resolve the transition from scale x to scale eps.
  for (double lo = first; lo < eps;) {
    const double hi = std::min(2.0 * lo, eps);
    total += integrate_smooth(tail, lo, hi, spec);
    lo = hi;
  }
  return total;
}

SandwichFit sandwich_exponent_fit(double alpha, double beta, double eps,
                                  const std::vector<double>& x_sequence,
                                  const QuadratureSpec& spec) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "sandwich exponents must lie in (0, 1)");
  }
  if (!(alpha + beta > 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "sandwich exponents need alpha + beta > 1");
  }
  if (x_sequence.size() < 4) {
    throw Error(ErrorCode::PreconditionViolation, "slope fit needs at least 4 points");
  }
  double xmin = x_sequence.front(), xmax = x_sequence.front();
  for (size_t i = 0; i < x_sequence.size(); ++i) {
    const double x = x_sequence[i];
    if (!(x > 0.0) || !(x < 3.0 * eps)) {
      throw Error(ErrorCode::PreconditionViolation, "sandwich points must lie in (0, 3 eps)");
    }
    if (i > 0 && !(x < x_sequence[i - 1])) {
      throw Error(ErrorCode::PreconditionViolation, "sandwich points must be decreasing");
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (xmax / xmin < 100.0 * (1.0 - 1e-12)) {
    throw Error(ErrorCode::PreconditionViolation, "sandwich points must span two decades");
  }

  SandwichFit fit;
  std::vector<double> lx, ly;
  for (double x : x_sequence) {
    const double v = sandwich_integral(alpha, beta, eps, x, spec);
    fit.x.push_back(x);
    fit.value.push_back(v);
    lx.push_back(std::log(x));
    ly.push_back(std::log(v));
  }
  const LinearFit lf = linear_fit(lx, ly);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  return fit;
}

}  // namespace pam
