#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pam/params.hpp"

namespace pam {

struct MLSeriesSpec {
  double rho = 1.0;
  double x = 0.0;
  /// Stop once the certified remainder is below tail_tol times the partial sum.
  double tail_tol = 1e-16;
};

struct MLResult {
  double value = 0.0;
  int terms = 0;
  /// Rigorous bound on the omitted tail.
  double remainder_bound = 0.0;
};

/// sum_{n>=0} x^n / Gamma(rho n + 1) for rho > 0, x >= 0. Terms are formed in
/// log space; the tail is bounded geometrically once the (decreasing) term
/// ratio drops below 1/2.
MLResult mittag_leffler_series(const MLSeriesSpec& spec);
double mittag_leffler(const MLSeriesSpec& spec);
double mittag_leffler(double rho, double x);

struct StirlingResult {
  double approx = 0.0;
  double gamma = 0.0;
  double rel_error = 0.0;
  /// Leading-order relative error estimate 1/(12 z).
  double error_estimate = 0.0;
  /// The asymptotic regime is taken to start at z = 10.
  bool in_range = false;
};

/// sqrt(2 pi / z) (z/e)^z against Gamma(z).
StirlingResult stirling_gamma(double z);

/// Constants of the chaos bound series and of the final moment bound.
struct BoundConstants {
  /// Per-order constant C of the bound series.
  double c = 1.0;
  /// Prefactor C of the moment bound (its value at t = 0).
  double c0 = 1.0;
  /// Rate constant C_H in the exponent of the moment bound.
  double c_h = 1.0;
  /// False when some rough coordinate (H_k < 1/2) forced a heuristic constant.
  bool rigorous = true;
};

/// Sharp Hardy-Littlewood-Sobolev constant for the kernel H0(2H0-1)|s-r|^{2H0-2}
/// between L^{1/H0} functions; 1 at H0 = 1/2.
double hls_constant(double h0);

/// Series constant C built from per-coordinate Gaussian rearrangement bounds.
double bound_series_constant(const HurstParams& params, bool* rigorous = nullptr);

/// Exponent of t and of p in the moment bound.
double moment_bound_t_exponent(const HurstParams& params);
double moment_bound_p_exponent(const HurstParams& params);

/// Per-order bounds on ||u_n(t,x)||_p for n = 0..N.
/// Throws InsufficientRegularity unless the sufficient condition holds.
std::vector<double> moment_upper_bound_series(const HurstParams& params, double t, double p, int n_max,
                                              const BoundConstants& k);

/// log of the sum of moment_upper_bound_series terms n = 0..N, formed without overflow.
double log_series_sum(const HurstParams& params, double t, double p, int n_max, const BoundConstants& k);

struct CalibrationGrid {
  std::vector<double> t{0.25, 0.5, 1.0, 2.0};
  std::vector<double> p{2.0, 4.0, 8.0, 16.0, 32.0};
  /// Short horizons, where the prefactor matters most.
  std::vector<double> small_t{1e-3, 1e-2, 0.05, 0.1};
  int n_max = 40;
  /// Multiplicative safety margin on the calibrated constant.
  double margin = 1.05;
};

/// Series constant from bound_series_constant, then one constant C (times
/// margin) used as both c0 and c_h: the smallest C with
/// (sum_n term_n)^p <= C exp(C t^a p^b) on every (t, p) of the grid and small_t.
BoundConstants calibrate_bound_constants(const HurstParams& params, const CalibrationGrid& grid = {});

/// C exp(C_H t^a p^b): the bound on E[u(t,x)^p]. Throws InsufficientRegularity
/// unless the global sufficient condition holds.
double moment_bound(const HurstParams& params, double t, double p, const BoundConstants& k);
/// log of moment_bound; finite where the bound itself overflows.
double log_moment_bound(const HurstParams& params, double t, double p, const BoundConstants& k);

struct SeriesReport {
  bool applicable = false;
  std::vector<double> terms;
  std::vector<double> partial_sums;
  std::vector<double> ratios;
  /// Limit of term_{n+1}/term_n: 0 in the global regime.
  double ratio_limit = 0.0;
  /// Horizon below which the critical-case series converges.
  std::optional<double> t0;
  std::string note;
};

SeriesReport series_convergence_report(const HurstParams& params, double t, double p, int n_max,
                                       const BoundConstants& k);

}  // namespace pam
