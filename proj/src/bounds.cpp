#include "pam/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "pam/errors.hpp"
#include "pam/kernels.hpp"
#include "pam/numerics.hpp"

namespace pam {

MLResult mittag_leffler_series(const MLSeriesSpec& spec) {
  if (!(spec.rho > 0.0)) throw Error(ErrorCode::PreconditionViolation, "rho must be positive");
  if (!(spec.x >= 0.0)) throw Error(ErrorCode::PreconditionViolation, "x must be nonnegative");
  MLResult r;
  r.value = 1.0;
  r.terms = 1;
  if (spec.x == 0.0) return r;
  const double lx = std::log(spec.x);
  auto log_term = [&](int n) { return n * lx - std::lgamma(spec.rho * n + 1.0); };
  for (int n = 1; n < 1'000'000; ++n) {
    const double lt = log_term(n);
    r.value += std::exp(lt);
    r.terms = n + 1;
    const double ratio = std::exp(log_term(n + 1) - lt);
    if (ratio < 0.5) {
      r.remainder_bound = std::exp(log_term(n + 1)) / (1.0 - ratio);
      if (r.remainder_bound <= spec.tail_tol * r.value) return r;
    }
  }
  throw Error(ErrorCode::ToleranceNotMet, "Mittag-Leffler series did not reach its tail tolerance");
}

double mittag_leffler(const MLSeriesSpec& spec) { return mittag_leffler_series(spec).value; }

double mittag_leffler(double rho, double x) { return mittag_leffler(MLSeriesSpec{rho, x, 1e-16}); }

StirlingResult stirling_gamma(double z) {
  if (!(z > 0.0)) throw Error(ErrorCode::PreconditionViolation, "Stirling needs z > 0");
  StirlingResult s;
  s.approx = std::exp(0.5 * std::log(2.0 * kPi / z) + z * (std::log(z) - 1.0));
  s.gamma = std::tgamma(z);
  s.rel_error = std::abs(s.approx / s.gamma - 1.0);
  s.error_estimate = 1.0 / (12.0 * z);
  s.in_range = z >= 10.0;
  return s;
}

double hls_constant(double h0) {
  if (h0 == 0.5) return 1.0;
  return 2.0 * h0 * std::pow(kPi, 1.5 - 2.0 * h0) * std::tgamma(h0 + 0.5) / std::tgamma(h0);
}

double bound_series_constant(const HurstParams& params, bool* rigorous) {
  bool exact = true;
  double k = 1.0;
  for (double hk : params.h()) {
    const double e = 1.0 - 2.0 * hk;
    if (hk >= 0.5) {
      k *= spectral_constant(hk) * std::sqrt(2.0 * kPi) * gauss_abs_moment(e);
    } else {
      // No rearrangement bound when the weight grows; use a generous surrogate.
      k *= spectral_constant(hk) * std::sqrt(2.0 * kPi) * std::pow(2.0, e) *
           std::sqrt(gauss_abs_moment(2.0 * e));
      exact = false;
    }
  }
  if (rigorous) *rigorous = exact;
  const double h0 = params.h0();
  const double a = (params.h_total() - params.d()) / (2.0 * h0);
  return std::pow(k * hls_constant(h0), 1.0 / (2.0 * h0)) * std::pow(2.0, a) * std::tgamma(a + 1.0);
}

double moment_bound_t_exponent(const HurstParams& params) {
  const double g = params.h_total() - params.d();
  return (g + 2.0 * params.h0()) / (g + 1.0);
}

double moment_bound_p_exponent(const HurstParams& params) {
  const double g = params.h_total() - params.d();
  return (g + 2.0) / (g + 1.0);
}

namespace {

void require_sufficient(const HurstParams& params, bool allow_critical) {
  const SolvabilityVerdict v = classify(params);
  if (v.verdict == Verdict::GlobalUnique) return;
  if (allow_critical && v.verdict == Verdict::LocalUnique) return;
  throw Error(ErrorCode::InsufficientRegularity,
              std::string("sufficient condition fails (verdict ") + to_string(v.verdict) + ")");
}

std::vector<double> series_log_terms(const HurstParams& params, double t, double p, int n_max, double c) {
  const double h0 = params.h0();
  const double a1 = (params.h_total() - params.d()) / (2.0 * h0) + 1.0;
  std::vector<double> terms{0.0};
  for (int n = 1; n <= n_max; ++n) {
    const double lt = 0.5 * n * std::log(p) + (h0 - 0.5) * std::lgamma(n + 1.0) +
                      h0 * (n * std::log(c) + a1 * n * std::log(t) - std::lgamma(a1 * n + 1.0));
    terms.push_back(t > 0.0 ? lt : -std::numeric_limits<double>::infinity());
  }
  return terms;
}

std::vector<double> series_terms(const HurstParams& params, double t, double p, int n_max, double c) {
  std::vector<double> terms = series_log_terms(params, t, p, n_max, c);
  for (double& x : terms) x = std::exp(x);
  return terms;
}

}  // namespace

std::vector<double> moment_upper_bound_series(const HurstParams& params, double t, double p, int n_max,
                                              const BoundConstants& k) {
  require_sufficient(params, true);
  if (!(t >= 0.0)) throw Error(ErrorCode::NonpositiveTime, "horizon must be nonnegative");
  if (!(p >= 2.0)) throw Error(ErrorCode::PreconditionViolation, "norm order must be >= 2");
  if (n_max < 0) throw Error(ErrorCode::PreconditionViolation, "truncation must be >= 0");
  return series_terms(params, t, p, n_max, k.c);
}

double log_series_sum(const HurstParams& params, double t, double p, int n_max, const BoundConstants& k) {
  require_sufficient(params, true);
  if (!(t >= 0.0)) throw Error(ErrorCode::NonpositiveTime, "horizon must be nonnegative");
  if (!(p >= 2.0)) throw Error(ErrorCode::PreconditionViolation, "norm order must be >= 2");
  const std::vector<double> lt = series_log_terms(params, t, p, n_max, k.c);
  const double top = *std::max_element(lt.begin(), lt.end());
  double s = 0.0;
  for (double x : lt) s += std::exp(x - top);
  return top + std::log(s);
}

BoundConstants calibrate_bound_constants(const HurstParams& params, const CalibrationGrid& grid) {
  require_sufficient(params, false);
  BoundConstants k;
  k.c = bound_series_constant(params, &k.rigorous);
  const double a = moment_bound_t_exponent(params);
  const double b = moment_bound_p_exponent(params);
  std::vector<std::pair<double, double>> pts;  // (p log sum, t^a p^b)
  for (const auto* ts : {&grid.small_t, &grid.t}) {
    for (double t : *ts) {
      for (double p : grid.p) {
        pts.emplace_back(p * log_series_sum(params, t, p, grid.n_max, k), std::pow(t, a) * std::pow(p, b));
      }
    }
  }
  auto covered = [&](double c) {
    for (const auto& [lhs, e] : pts)
      if (lhs > std::log(c) + c * e) return false;
    return true;
  };
  double lo = 1.0, hi = 2.0;
  while (!covered(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::ToleranceNotMet, "no finite bound constant covers the grid");
  }
  for (int i = 0; i < 100 && hi / lo > 1.0 + 1e-12; ++i) {
    const double mid = std::sqrt(lo * hi);
    (covered(mid) ? hi : lo) = mid;
  }
  k.c0 = hi * grid.margin;
  k.c_h = hi * grid.margin;
  return k;
}

double log_moment_bound(const HurstParams& params, double t, double p, const BoundConstants& k) {
  require_sufficient(params, false);
  if (!(t >= 0.0)) throw Error(ErrorCode::NonpositiveTime, "horizon must be nonnegative");
  if (!(p >= 2.0)) throw Error(ErrorCode::PreconditionViolation, "moment order must be >= 2");
  return std::log(k.c0) +
         k.c_h * std::pow(t, moment_bound_t_exponent(params)) * std::pow(p, moment_bound_p_exponent(params));
}

double moment_bound(const HurstParams& params, double t, double p, const BoundConstants& k) {
  return std::exp(log_moment_bound(params, t, p, k));
}

SeriesReport series_convergence_report(const HurstParams& params, double t, double p, int n_max,
                                       const BoundConstants& k) {
  SeriesReport r;
  const SolvabilityVerdict v = classify(params);
  if (v.verdict != Verdict::GlobalUnique && v.verdict != Verdict::LocalUnique) {
    r.note = std::string("bound inapplicable: verdict ") + to_string(v.verdict);
    return r;
  }
  r.applicable = true;
  r.terms = series_terms(params, t, p, n_max, k.c);
  double s = 0.0;
  for (size_t n = 0; n < r.terms.size(); ++n) {
    s += r.terms[n];
    r.partial_sums.push_back(s);
    if (n > 0 && r.terms[n - 1] > 0.0) r.ratios.push_back(r.terms[n] / r.terms[n - 1]);
  }
  if (v.verdict == Verdict::GlobalUnique) {
    r.ratio_limit = 0.0;
    r.note = "Mittag-Leffler type decay";
    return r;
  }
  const double h0 = params.h0();
  const double kappa = (2.0 * h0 - 1.0) / (2.0 * h0);
  if (!(kappa > 0.0)) {
    r.note = "critical case needs H0 > 1/2";
    return r;
  }
  r.ratio_limit = std::pow(k.c, h0) * std::sqrt(p) * std::pow(t, h0 * kappa) * std::pow(kappa, -(h0 - 0.5));
  r.t0 = std::pow(std::pow(kappa, h0 - 0.5) / (std::pow(k.c, h0) * std::sqrt(p)), 1.0 / (h0 * kappa));
  std::ostringstream os;
  os << "geometric decay; converges for t < T0";
  r.note = os.str();
  return r;
}

}  // namespace pam
