#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <limits>
#include <map>
#include <sstream>

#include "chaos_internal.hpp"
#include "pam/chain.hpp"
#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/kernels.hpp"
#include "pam/numerics.hpp"
#include "pam/quadrature.hpp"

namespace pam {

namespace {

constexpr double kGrading = 3.0;

// Sigmoidal map of [0,1] onto itself that flattens algebraic endpoint singularities.
double grade(double tau) {
  const double a = std::pow(tau, kGrading);
  const double b = std::pow(1.0 - tau, kGrading);
  return a / (a + b);
}

double grade_jacobian(double tau) {
  const double a = std::pow(tau, kGrading);
  const double b = std::pow(1.0 - tau, kGrading);
  return kGrading * std::pow(tau * (1.0 - tau), kGrading - 1.0) / ((a + b) * (a + b));
}

MomentEstimate divergent_estimate(ChaosMethod m) {
  MomentEstimate e;
  e.value = std::numeric_limits<double>::infinity();
  e.divergent = true;
  e.method = m;
  return e;
}

// Integral over the unit (n-1)-simplex of prod_k c_k^n g_k(2 omega), n >= 3.
double simplex_tensor(const HurstParams& p, int n, int m, bool parallel) {
  const GaussRule rule = gauss_legendre(m);
  std::vector<double> x(static_cast<size_t>(m)), wx(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    x[static_cast<size_t>(i)] = grade(rule.x[static_cast<size_t>(i)]);
    wx[static_cast<size_t>(i)] = rule.w[static_cast<size_t>(i)] * grade_jacobian(rule.x[static_cast<size_t>(i)]);
  }
  const int dims = n - 1;
  std::int64_t count = 1;
  for (int i = 0; i < dims; ++i) count *= m;

  auto node = [&](std::int64_t idx, std::vector<double>& omega) {
    double weight = 1.0;
    double rest = 1.0;
    for (int j = 0; j < dims; ++j) {
      const auto k = static_cast<size_t>(idx % m);
      idx /= m;
      omega[static_cast<size_t>(j)] = rest * x[k];
      weight *= wx[k] * rest;
      rest *= 1.0 - x[k];
    }
    omega[static_cast<size_t>(dims)] = rest;
    return weight;
  };

  double min_ratio = 1.0;
  {
    std::vector<double> omega(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < count; ++i) {
      node(i, omega);
      const auto [lo, hi] = std::minmax_element(omega.begin(), omega.end());
      min_ratio = std::min(min_ratio, *lo / *hi);
    }
  }
  if (!(min_ratio > 0.0)) throw Error(ErrorCode::ToleranceNotMet, "simplex node underflow");

  std::map<double, GkChain> chains;
  GkChain::Grid grid;
  grid.min_ratio = min_ratio;
  grid.per_decade = 16;
  for (double hk : p.h())
    if (hk != 0.5 && !chains.count(hk)) chains.emplace(hk, GkChain(hk, grid));

  std::vector<double> values(static_cast<size_t>(count));
#pragma omp parallel if (parallel)
  {
    std::vector<double> omega(static_cast<size_t>(n)), u(static_cast<size_t>(n));
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      const double w = node(i, omega);
      for (int j = 0; j < n; ++j) u[static_cast<size_t>(j)] = 2.0 * omega[static_cast<size_t>(j)];
      double v = w;
      for (double hk : p.h()) {
        const double g = hk == 0.5 ? gk_gaussian(u) : chains.at(hk).eval(u);
        v *= std::pow(spectral_constant(hk), n) * g;
      }
      values[static_cast<size_t>(i)] = v;
    }
  }
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

double simplex_pair(const HurstParams& p) {
  double left = 0.0;
  for (double hk : p.h()) left += std::min(2.0 * hk - 1.5, 0.0);
  SingularIntegrand f;
  f.left_exponent = left;
  f.right_exponent = p.h_total() - p.d();
  f.regular = [&](double w) {
    const double a = 2.0 * (1.0 - w);
    const double b = 2.0 * w;
    double v = std::pow(w, -f.left_exponent) * std::pow(1.0 - w, -f.right_exponent);
    for (double hk : p.h()) {
      const double c = spectral_constant(hk);
      const double g = hk == 0.5 ? 2.0 * kPi / std::sqrt(a * b) : pair_kernel_g({a, b, hk}, 1e-8);
      v *= c * c * g;
    }
    return v;
  };
  QuadratureSpec q;
  q.rel_tol = 1e-7;
  return integrate_singular_1d(f, 0.0, 1.0, q);
}

}  // namespace

namespace detail {

double g_single(double u, double hk) {
  const double e = 1.0 - 2.0 * hk;
  return std::sqrt(2.0 * kPi / u) * std::pow(u, -0.5 * e) * gauss_abs_moment(e);
}

}  // namespace detail

const char* to_string(ChaosMethod m) {
  switch (m) {
    case ChaosMethod::SimplexQuadrature: return "SimplexQuadrature";
    case ChaosMethod::TemporalMonteCarlo: return "TemporalMonteCarlo";
    case ChaosMethod::SpectralMonteCarlo: return "SpectralMonteCarlo";
  }
  return "Unknown";
}

ChaosMethod chaos_method_from_string(const std::string& s) {
  if (s == "SimplexQuadrature" || s == "quadrature") return ChaosMethod::SimplexQuadrature;
  if (s == "TemporalMonteCarlo" || s == "temporal") return ChaosMethod::TemporalMonteCarlo;
  if (s == "SpectralMonteCarlo" || s == "spectral") return ChaosMethod::SpectralMonteCarlo;
  throw Error(ErrorCode::InvalidSpec, "unknown chaos method '" + s + "'");
}

int default_max_order(ChaosMethod m) {
  switch (m) {
    case ChaosMethod::SimplexQuadrature: return 6;
    case ChaosMethod::TemporalMonteCarlo: return 4;
    case ChaosMethod::SpectralMonteCarlo: return 2;
  }
  return 0;
}

bool white_chaos_divergent(const HurstParams& p, int n) {
  const double h = p.h_total();
  const double d = p.d();
  if (h - d <= -1.0) return true;
  return n >= 2 && 2.0 * h - 1.5 * d <= -1.0;
}

namespace {

void check_request(const ChaosMomentRequest& req) {
  if (req.n < 1) throw Error(ErrorCode::PreconditionViolation, "chaos order must be >= 1");
  if (!(req.t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "horizon must be positive");
  const int cap = req.max_order > 0 ? req.max_order : default_max_order(req.method);
  if (req.n > cap) {
    std::ostringstream os;
    os << "order " << req.n << " exceeds the " << to_string(req.method) << " limit " << cap;
    throw Error(ErrorCode::PreconditionViolation, os.str());
  }
}

}  // namespace

MomentEstimate chaos_moment_white(const ChaosMomentRequest& req) {
  check_request(req);
  const HurstParams& p = req.params;
  if (!p.white_in_time()) throw Error(ErrorCode::PreconditionViolation, "white-in-time moments need H0 = 1/2");
  if (white_chaos_divergent(p, req.n)) return divergent_estimate(req.method);
  if (req.method == ChaosMethod::SpectralMonteCarlo) return detail::spectral_mc_white(req);
  if (req.method != ChaosMethod::SimplexQuadrature)
    throw Error(ErrorCode::PreconditionViolation, "white-in-time moments use SimplexQuadrature or SpectralMonteCarlo");

  const int n = req.n;
  const double alpha = p.h_total() - p.d() + 1.0;
  double shape = 0.0;
  if (n == 1) {
    shape = 1.0;
    for (double hk : p.h()) shape *= spectral_constant(hk) * detail::g_single(2.0, hk);
  } else if (n == 2) {
    shape = simplex_pair(p);
  } else {
    int m = req.quadrature_points;
    if (m == 0) m = n <= 4 ? 12 : (n == 5 ? 10 : 8);
    if (m < 2) throw Error(ErrorCode::PreconditionViolation, "need >= 2 quadrature points");
    shape = simplex_tensor(p, n, m, req.mc.parallel);
  }
  MomentEstimate e;
  e.method = ChaosMethod::SimplexQuadrature;
  e.value = std::pow(req.t, n * alpha) / (n * alpha) * shape;
  return e;
}

MomentEstimate chaos_moment_colored(const ChaosMomentRequest& req) {
  check_request(req);
  if (req.params.white_in_time())
    throw Error(ErrorCode::PreconditionViolation, "colored moments need H0 > 1/2");
  if (req.method != ChaosMethod::TemporalMonteCarlo)
    throw Error(ErrorCode::PreconditionViolation, "colored moments use TemporalMonteCarlo");
  return detail::temporal_mc_colored(req);
}

MomentEstimate chaos_moment(const ChaosMomentRequest& req) {
  return req.params.white_in_time() ? chaos_moment_white(req) : chaos_moment_colored(req);
}

double second_chaos_bound_constant(double hk) {
  if (hk == 0.5) return 2.0 * kPi;
  static std::mutex mu;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(hk); it != cache.end()) return it->second;
  }
  // Golden-section minima sit slightly above the true minimum.
  const double c = 2.0 * kPi * lambda_kernel_min(hk) * (1.0 - 1e-6);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(hk, c);
  return c;
}

double second_chaos_lower_bound(double s1, double s2, double r1, double r2, double t,
                                const HurstParams& params) {
  if (!(0.0 <= s1 && s1 < s2 && s2 <= t && 0.0 <= r1 && r1 < r2 && r2 <= t))
    throw Error(ErrorCode::DomainOrder, "need 0 <= s1 < s2 <= t and 0 <= r1 < r2 <= t");
  const double outer = t - s1 + t - r1;
  const double a = t - s2 + t - r2;
  const double b = s2 - s1 + r2 - r1;
  if (!(a > 0.0)) throw Error(ErrorCode::DomainOrder, "s2 = r2 = t leaves no final gap");
  double v = 1.0;
  for (double hk : params.h())
    v *= second_chaos_bound_constant(hk) * std::pow(outer, 0.5 - hk) * std::pow(a, hk - 1.0) *
         std::pow(b, 2.0 * hk - 1.5);
  return v;
}

double second_chaos_closed_constant(const HurstParams& params) {
  double c = std::pow(2.0, 2.0 * params.h_total() - 2.0 * params.d());
  for (double hk : params.h()) {
    const double sc = spectral_constant(hk);
    c *= sc * sc * second_chaos_bound_constant(hk);
  }
  return c;
}

std::optional<double> second_chaos_closed_white(const HurstParams& params, double t) {
  if (!params.white_in_time() || params.d() < 2)
    throw Error(ErrorCode::PreconditionViolation, "closed form needs H0 = 1/2 and d >= 2");
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "horizon must be positive");
  const double h = params.h_total();
  const double d = params.d();
  const double b1 = h - d + 1.0;
  const double b2 = 2.0 * h - 1.5 * d + 1.0;
  if (!(b1 > 0.0 && b2 > 0.0)) return std::nullopt;
  const double k = 2.0 * h - 2.0 * d + 2.0;
  return second_chaos_closed_constant(params) * beta_fn(b1, b2) * std::pow(t, k) / k;
}

}  // namespace pam
