#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pam/params.hpp"
#include "pam/rng.hpp"

namespace pam {

enum class ChaosMethod { SimplexQuadrature, TemporalMonteCarlo, SpectralMonteCarlo };

const char* to_string(ChaosMethod m);
ChaosMethod chaos_method_from_string(const std::string& s);

/// Execution policy for Monte Carlo estimators. Work is always cut into the
/// same fixed chunks with per-chunk substreams, so serial and parallel runs
/// return bit-identical results.
struct McPolicy {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  bool parallel = true;
  /// Worker cap for OpenMP; 0 keeps the runtime default.
  int jobs = 0;
};

struct ChaosMomentRequest {
  int n = 1;
  double t = 1.0;
  HurstParams params;
  ChaosMethod method = ChaosMethod::SimplexQuadrature;
  /// Sampling budget; `parallel` also switches the quadrature node loop.
  McPolicy mc;
  /// Gauss points per simplex direction (SimplexQuadrature, n >= 3); 0 picks
  /// 12 up to n = 4, then 10 at n = 5 and 8 beyond.
  int quadrature_points = 0;
  int max_order = 0;  // 0 selects the per-method default
};

struct MomentEstimate {
  double value = 0.0;
  /// Present exactly for Monte Carlo methods.
  std::optional<double> std_error;
  ChaosMethod method = ChaosMethod::SimplexQuadrature;
  bool divergent = false;
  /// Monte Carlo divergence verdicts come from a budget-doubling growth test.
  bool divergence_heuristic = false;
  std::int64_t samples = 0;
};

/// Default maximum order for each method.
int default_max_order(ChaosMethod m);

/// True when E[u_n(t,x)^2] is infinite for white-in-time noise.
bool white_chaos_divergent(const HurstParams& p, int n);

/// E[u_n(t,x)^2] for H0 = 1/2 by SimplexQuadrature or SpectralMonteCarlo.
MomentEstimate chaos_moment_white(const ChaosMomentRequest& req);

/// E[u_n(t,x)^2] for H0 > 1/2 by TemporalMonteCarlo.
MomentEstimate chaos_moment_colored(const ChaosMomentRequest& req);

/// Dispatches on H0 and method.
MomentEstimate chaos_moment(const ChaosMomentRequest& req);

struct McValue {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Plain Monte Carlo of
///   g = (2 pi)^{n/2} prod u_i^{-1/2} E[prod |X_i/sqrt(u_i) - X_{i-1}/sqrt(u_{i-1})|^{1-2H}],
/// X_0 = 0. The variance is infinite once H >= 3/4; the reported error is then unreliable.
McValue gk_equality_mc(std::span<const double> u, double hk, const McPolicy& policy);

/// Per-coordinate constant in the second-chaos lower bound: 2 pi min f.
double second_chaos_bound_constant(double hk);

/// Closed-form lower bound of prod_k g_k(s1, s2, r1, r2) on 0 <= s1 < s2 <= t, 0 <= r1 < r2 <= t.
double second_chaos_lower_bound(double s1, double s2, double r1, double r2, double t,
                                const HurstParams& params);

/// Constant C of the white second-chaos lower bound
///   C int_{0<s1<s2<t} (t-s1)^{d/2-H} (t-s2)^{H-d} (s2-s1)^{2H-3d/2} ds1 ds2.
double second_chaos_closed_constant(const HurstParams& params);

/// C B(H-d+1, 2H-3d/2+1) t^{2H-2d+2} / (2H-2d+2) for H0 = 1/2, d >= 2;
/// nullopt when either beta argument is nonpositive.
std::optional<double> second_chaos_closed_white(const HurstParams& params, double t);

struct UpsilonSpec {
  HurstParams params;
  double t = 1.0;
  double epsilon = 1e-3;
};

/// Cutoff version of the critical four-fold time integral: the gap
/// s2-s1+r2-r1 and both diagonals |s_i-r_i| are restricted to be >= epsilon.
double upsilon_cutoff(const UpsilonSpec& spec);

struct UpsilonStudy {
  std::vector<double> epsilon;
  std::vector<double> value;
  /// Least-squares slope of log value against log(1/epsilon).
  double slope = 0.0;
  /// Exponent g of the fit A eps^{-g} + B + C eps^{correction_exponent}
  /// (needs at least 4 cutoffs, NaN otherwise).
  double corrected_slope = 0.0;
  /// 2H0 - 1 for colored noise, 1 when white in time.
  double correction_exponent = 0.0;
  /// |value(eps/2) / value(eps) - 1| at the smallest epsilon (0 when skipped).
  double halving_change = 0.0;
};

UpsilonStudy upsilon_study(const HurstParams& params, double t, const std::vector<double>& ladder,
                           bool with_halving = true);

}  // namespace pam
