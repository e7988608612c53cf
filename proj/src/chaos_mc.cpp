#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "chaos_internal.hpp"
#include "mc_runner.hpp"
#include "pam/kernels.hpp"
#include "pam/numerics.hpp"

namespace pam {

namespace detail {

double McRun::mean() const { return prefix_mean(static_cast<int>(chunks.size())); }

std::int64_t McRun::count() const {
  std::int64_t n = 0;
  for (const auto& c : chunks) n += c.count;
  return n;
}

double McRun::prefix_mean(int k) const {
  double s = 0.0;
  std::int64_t n = 0;
  for (int i = 0; i < k; ++i) {
    s += chunks[static_cast<size_t>(i)].sum;
    n += chunks[static_cast<size_t>(i)].count;
  }
  return n > 0 ? s / static_cast<double>(n) : 0.0;
}

double McRun::std_error() const {
  double s = 0.0, ss = 0.0;
  std::int64_t n = 0;
  for (const auto& c : chunks) {
    s += c.sum;
    ss += c.sumsq;
    n += c.count;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double m = s / static_cast<double>(n);
  const double var = std::max(0.0, (ss - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
  return std::sqrt(var / static_cast<double>(n));
}

bool McRun::grows_under_doubling() const {
  const int k = static_cast<int>(chunks.size());
  if (k < 8) return false;
  double prev = prefix_mean(k / 8);
  for (int part : {k / 4, k / 2, k}) {
    const double cur = prefix_mean(part);
    if (!(cur > 1.2 * prev)) return false;
    prev = cur;
  }
  return true;
}

namespace {

struct GenGamma {
  double e;
  std::gamma_distribution<double> shape;
  explicit GenGamma(double e_) : e(e_), shape(0.5 * (e_ + 1.0), 1.0) {}

  // Draw from the density proportional to |x|^e exp(-kappa x^2 / 2).
  double operator()(std::mt19937_64& rng, double kappa) {
    const double v = shape(rng);
    const double x = std::sqrt(2.0 * v / kappa);
    return (rng() & 1ULL) ? x : -x;
  }
  double normalizer(double kappa) const {
    return std::pow(2.0 / kappa, 0.5 * (e + 1.0)) * std::tgamma(0.5 * (e + 1.0));
  }
};

// prod_k c_k^n int exp(-xi^T A xi / 2) prod_i |xi_i|^{e_k} d xi estimated by one draw
// per coordinate from the absorbed density with kappa = 0.9 lambda_min(A).
double spatial_weight(const Eigen::MatrixXd& a, const HurstParams& p, std::vector<GenGamma>& gens,
                      std::mt19937_64& rng) {
  const int n = static_cast<int>(a.rows());
  double lmin;
  if (n == 1) {
    lmin = a(0, 0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    lmin = es.eigenvalues()(0);
  }
  if (!(lmin > 0.0)) return 0.0;
  const double kappa = 0.9 * lmin;
  Eigen::MatrixXd shifted = a;
  shifted.diagonal().array() -= kappa;
  Eigen::VectorXd xi(n);
  double w = 1.0;
  for (int k = 0; k < p.d(); ++k) {
    GenGamma& g = gens[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i) xi(i) = g(rng, kappa);
    const double quad = xi.dot(shifted * xi);
    w *= std::pow(spectral_constant(p.h(k)) * g.normalizer(kappa), n) * std::exp(-0.5 * quad);
  }
  return w;
}

std::vector<GenGamma> make_gens(const HurstParams& p) {
  std::vector<GenGamma> g;
  for (double hk : p.h()) g.emplace_back(1.0 - 2.0 * hk);
  return g;
}

MomentEstimate finish(const McRun& run, ChaosMethod m) {
  MomentEstimate e;
  e.method = m;
  e.value = run.mean();
  e.std_error = run.std_error();
  e.samples = run.count();
  if (run.grows_under_doubling()) {
    e.divergent = true;
    e.divergence_heuristic = true;
  }
  return e;
}

}  // namespace

MomentEstimate spectral_mc_white(const ChaosMomentRequest& req) {
  const HurstParams& p = req.params;
  const int n = req.n;
  const double t = req.t;
  const double volume = std::pow(t, n) / std::tgamma(n + 1.0);
  auto draw = [&, gens = make_gens(p)](std::mt19937_64& rng) mutable {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> s(static_cast<size_t>(n) + 1);
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = t * unif(rng);
    std::sort(s.begin(), s.begin() + n);
    s[static_cast<size_t>(n)] = t;
    // Gap i pairs with the partial frequency sum xi_1 + ... + xi_i.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    double tail = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      tail += 2.0 * (s[static_cast<size_t>(i) + 1] - s[static_cast<size_t>(i)]);
      for (int j = 0; j <= i; ++j) {
        a(i, j) = tail;
        a(j, i) = tail;
      }
    }
    return volume * spatial_weight(a, p, gens, rng);
  };
  McPolicy pol = req.mc;
  return finish(run_mc(pol, draw), ChaosMethod::SpectralMonteCarlo);
}

MomentEstimate temporal_mc_colored(const ChaosMomentRequest& req) {
  const HurstParams& p = req.params;
  const int n = req.n;
  const double t = req.t;
  const double h0 = p.h0();
  const double beta = 2.0 * h0 - 1.0;
  const double volume = std::pow(t, n) / std::tgamma(n + 1.0);
  auto draw = [&, gens = make_gens(p)](std::mt19937_64& rng) mutable {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> s(static_cast<size_t>(n)), r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = t * unif(rng);
    std::sort(s.begin(), s.end());
    double w = volume;
    for (int i = 0; i < n; ++i) {
      const double si = s[static_cast<size_t>(i)];
      const double left = std::pow(si, beta);
      const double right = std::pow(t - si, beta);
      w *= h0 * (left + right);
      const double pick = unif(rng);
      const double u = std::pow(unif(rng), 1.0 / beta);
      r[static_cast<size_t>(i)] = pick * (left + right) < left ? si - si * u : si + (t - si) * u;
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return r[static_cast<size_t>(x)] < r[static_cast<size_t>(y)]; });
    std::vector<int> rank(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) rank[static_cast<size_t>(order[static_cast<size_t>(j)])] = j;

    // Cumulative gap sums: tail_s[j] = t - s_j, tail_r[j] = t - r_{order j}.
    Eigen::MatrixXd a(n, n);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        const double ts = t - s[static_cast<size_t>(std::max(x, y))];
        const int ry = std::max(rank[static_cast<size_t>(x)], rank[static_cast<size_t>(y)]);
        const double tr = t - r[static_cast<size_t>(order[static_cast<size_t>(ry)])];
        a(x, y) = ts + tr;
      }
    }
    return w * spatial_weight(a, p, gens, rng);
  };
  return finish(run_mc(req.mc, draw), ChaosMethod::TemporalMonteCarlo);
}

}  // namespace detail

McValue gk_equality_mc(std::span<const double> u, double hk, const McPolicy& policy) {
  const int n = static_cast<int>(u.size());
  if (n < 1) throw Error(ErrorCode::PreconditionViolation, "need at least one gap");
  for (double x : u)
    if (!(x > 0.0)) throw Error(ErrorCode::PreconditionViolation, "gaps must be positive");
  if (!(hk > 0.0 && hk < 1.0)) throw Error(ErrorCode::OutOfRange, "H must lie in (0, 1)");
  const double e = 1.0 - 2.0 * hk;
  const std::vector<double> gaps(u.begin(), u.end());
  double pref = std::pow(2.0 * kPi, 0.5 * n);
  for (double x : gaps) pref /= std::sqrt(x);
  auto draw = [&](std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    double prev = 0.0;
    double v = pref;
    for (int i = 0; i < n; ++i) {
      const double cur = normal(rng) / std::sqrt(gaps[static_cast<size_t>(i)]);
      v *= std::pow(std::abs(cur - prev), e);
      prev = cur;
    }
    return v;
  };
  const detail::McRun run = detail::run_mc(policy, draw);
  return {run.mean(), run.std_error(), run.count()};
}

}  // namespace pam
