#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pam/params.hpp"

namespace pam {

enum class FieldMethod { Cholesky, CirculantEmbedding };

const char* to_string(FieldMethod m);
FieldMethod field_method_from_string(const std::string& s);

inline constexpr std::size_t kCholeskyMaxPoints = 4096;
inline constexpr std::size_t kCirculantMaxAxis = std::size_t{1} << 16;

struct GridSpec {
  std::vector<double> time_points;
  /// One increasing coordinate list per spatial axis.
  std::vector<std::vector<double>> space_points;

  std::size_t total_points() const;
  /// Axis 0 is time, axes 1..d are space.
  const std::vector<double>& axis(std::size_t a) const { return a == 0 ? time_points : space_points[a - 1]; }
  std::size_t axes() const { return 1 + space_points.size(); }
};

/// Uniform axis {k * step : k = k_min..k_max}.
std::vector<double> lattice(int k_min, int k_max, double step);

struct FieldGrid {
  GridSpec grid;
  double h0 = 0.5;
  std::vector<double> h;
  std::uint64_t seed = 0;
  FieldMethod method = FieldMethod::Cholesky;
  /// Row-major over (time, x_1, ..., x_d), time slowest.
  std::vector<double> values;
  /// Set when a circulant request fell back to Cholesky.
  bool fell_back = false;
  std::vector<std::string> warnings;
};

/// One fractional Brownian sheet sample with covariance R_{H0}(s,t) prod R_{H_i}(x_i, y_i).
FieldGrid sample_sheet(const GridSpec& grid, const HurstParams& params, FieldMethod method,
                       std::uint64_t seed);

/// `count` samples; sample i is drawn with a seed derived from (seed, i).
std::vector<FieldGrid> sample_batch(const GridSpec& grid, const HurstParams& params, FieldMethod method,
                                    std::uint64_t seed, std::size_t count, bool parallel = true);

/// Exact covariance of the sheet between grid points with flat indices i and j.
double sheet_covariance(const GridSpec& grid, const HurstParams& params, std::size_t i, std::size_t j);

struct CovarianceReport {
  std::size_t pairs = 0;
  std::size_t within = 0;
  double fraction = 0.0;
  double max_abs_z = 0.0;
  bool pass = false;
};

/// Per-pair z-scores of the empirical second moment against the exact
/// covariance; pass iff at least 99% of pairs lie within 3 standard errors.
/// Pairs involving points on the coordinate hyperplanes (identically zero) are skipped.
CovarianceReport covariance_validate(const std::vector<FieldGrid>& samples, const HurstParams& params);

}  // namespace pam
