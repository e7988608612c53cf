#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/numerics.hpp"
#include "pam/quadrature.hpp"

namespace pam {

namespace {

struct Exponents {
  double outer;  // on t-s1+t-r1
  double last;   // on t-s2+t-r2
  double gap;    // on s2-s1+r2-r1
  double beta;   // 2H0 - 1
};

Exponents exponents(const HurstParams& p) {
  const double h = p.h_total();
  const double d = p.d();
  return {0.5 * d - h, h - d, 2.0 * h - 1.5 * d, 2.0 * p.h0() - 1.0};
}

// Integral of |q|^{beta-1} over [lo, hi] with (-eps, eps) removed.
double q_mass(double lo, double hi, double eps, double beta) {
  if (!(hi > lo)) return 0.0;
  auto f = [beta](double x) { return std::copysign(std::pow(std::abs(x), beta), x) / beta; };
  double v = f(hi) - f(lo);
  const double ol = std::max(lo, -eps);
  const double oh = std::min(hi, eps);
  if (oh > ol) v -= f(oh) - f(ol);
  return std::max(v, 0.0);
}

// Integral over eps <= |p| <= m1 of |p|^{beta-1} times the admissible q-mass,
// with |q| <= m2, |q - p| < b, |q| >= eps.
double p_integral(double m1, double m2, double b, double eps, double beta) {
  if (m1 <= eps || m2 <= eps) return 0.0;
  std::vector<double> cuts{eps, m1};
  for (double c : {b - m2, m2 - b, b - eps, b + eps, eps - b, -eps - b, m2 + b})
    if (c > eps && c < m1) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  QuadratureSpec q;
  q.rel_tol = 1e-8;
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::log(cuts[i]);
    const double hi = std::log(cuts[i + 1]);
    if (!(hi > lo)) continue;
    total += integrate_smooth(
        [&](double tau) {
          const double p = std::exp(tau);
          return std::pow(p, beta) * q_mass(std::max(-m2, p - b), std::min(m2, p + b), eps, beta);
        },
        lo, hi, q);
  }
  return 2.0 * total;
}

double upsilon_colored(const Exponents& ex, double t, double eps) {
  auto b_integral = [&](double c1) {
    const double top = 2.0 * t - c1;
    if (top <= eps) return 0.0;
    const double m1 = std::min(c1, 2.0 * t - c1);
    if (m1 <= eps) return 0.0;
    auto body = [&](double b) {
      const double c2 = c1 + b;
      const double m2 = std::min(c2, 2.0 * t - c2);
      return p_integral(m1, m2, b, eps, ex.beta);
    };
    QuadratureSpec q;
    q.rel_tol = 1e-6;
    const double mid = 0.5 * (eps + top);
    // Left piece in log b; right piece carries the (2t - c2)^{H-d} endpoint.
    double v = integrate_smooth(
        [&](double tau) {
          const double b = std::exp(tau);
          return std::pow(b, ex.gap + 1.0) * std::pow(top - b, ex.last) * body(b);
        },
        std::log(eps), std::log(mid), q);
    SingularIntegrand right;
    right.right_exponent = ex.last;
    right.regular = [&](double b) { return std::pow(b, ex.gap) * body(b); };
    v += integrate_singular_1d(right, mid, top, q);
    return v;
  };
  QuadratureSpec q;
  q.rel_tol = 1e-5;
  double total = 0.0;
  const double cuts[3] = {eps, t, 2.0 * t - eps};
  for (int i = 0; i < 2; ++i)
    total += integrate_smooth(
        [&](double c1) { return std::pow(2.0 * t - c1, ex.outer) * b_integral(c1); }, cuts[i],
        cuts[i + 1], q);
  return 0.25 * total;
}

// H0 = 1/2: the diagonal collapses and only the gap 2(s2 - s1) >= eps is cut.
double upsilon_white(const Exponents& ex, double t, double eps) {
  const double y0 = 0.5 * eps;
  auto inner = [&](double y) {
    // x = t - s2 in [0, t - y].
    SingularIntegrand f;
    f.left_exponent = ex.last;
    f.regular = [&](double x) { return std::pow(x + y, ex.outer); };
    return integrate_singular_1d(f, 0.0, t - y);
  };
  QuadratureSpec q;
  q.rel_tol = 1e-9;
  const double mid = 0.5 * (y0 + t);
  double v = integrate_smooth(
      [&](double tau) {
        const double y = std::exp(tau);
        return std::pow(y, ex.gap + 1.0) * inner(y);
      },
      std::log(y0), std::log(mid), q);
  SingularIntegrand right;
  right.right_exponent = ex.last + ex.outer + 1.0;
  right.regular = [&](double y) {
    return std::pow(y, ex.gap) * inner(y) / std::pow(t - y, right.right_exponent);
  };
  v += integrate_singular_1d(right, mid, t, q);
  return std::pow(2.0, ex.outer + ex.last + ex.gap) * v;
}

}  // namespace

double upsilon_cutoff(const UpsilonSpec& spec) {
  if (!(spec.t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "horizon must be positive");
  if (!(spec.epsilon > 0.0 && spec.epsilon < spec.t / 8.0))
    throw Error(ErrorCode::PreconditionViolation, "cutoff must lie in (0, t/8)");
  const Exponents ex = exponents(spec.params);
  if (!(ex.last > -1.0))
    throw Error(ErrorCode::NonIntegrableEndpoint, "exponent H - d at the final gap is not integrable");
  return spec.params.white_in_time() ? upsilon_white(ex, spec.t, spec.epsilon)
                                     : upsilon_colored(ex, spec.t, spec.epsilon);
}

UpsilonStudy upsilon_study(const HurstParams& params, double t, const std::vector<double>& ladder,
                           bool with_halving) {
  if (ladder.size() < 3) throw Error(ErrorCode::PreconditionViolation, "need at least 3 cutoffs");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] < ladder[i - 1])) throw Error(ErrorCode::PreconditionViolation, "cutoffs must decrease");
  UpsilonStudy s;
  s.epsilon = ladder;
  for (double e : ladder) s.value.push_back(upsilon_cutoff({params, t, e}));

  std::vector<double> lx, ly;
  for (size_t i = 0; i < ladder.size(); ++i) {
    lx.push_back(std::log(1.0 / ladder[i]));
    ly.push_back(std::log(s.value[i]));
  }
  s.slope = linear_fit(lx, ly).slope;

  // Model value = A eps^{-g} + B + C eps^{beta}: the cutoffs on |s_i - r_i| remove
  // mass of order eps^{2H0-1}, which is comparable to the divergent part at
  // moderate eps. A, B, C are solved by least squares for each trial g.
  s.correction_exponent = params.white_in_time() ? 1.0 : 2.0 * params.h0() - 1.0;
  s.corrected_slope = std::numeric_limits<double>::quiet_NaN();
  if (ladder.size() >= 4) {
    const auto n = static_cast<Eigen::Index>(ladder.size());
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = s.value[static_cast<size_t>(i)];
    auto residual = [&](double g) {
      Eigen::MatrixXd x(n, 3);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double e = ladder[static_cast<size_t>(i)];
        x(i, 0) = std::pow(e, -g);
        x(i, 1) = 1.0;
        x(i, 2) = std::pow(e, s.correction_exponent);
      }
      const Eigen::VectorXd scale = x.colwise().norm().transpose();
      for (Eigen::Index j = 0; j < 3; ++j) x.col(j) /= scale(j);
      const Eigen::VectorXd c = x.colPivHouseholderQr().solve(y);
      return (x * c - y).squaredNorm();
    };
    double lo = 1e-3, hi = 2.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = residual(a), fb = residual(b);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
      if (fa < fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = residual(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = residual(b);
      }
    }
    s.corrected_slope = 0.5 * (lo + hi);
  }

  const double emin = ladder.back();
  if (with_halving) {
    const double half = upsilon_cutoff({params, t, emin / 2.0});
    s.halving_change = std::abs(half / s.value.back() - 1.0);
  }
  return s;
}

}  // namespace pam
