#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pam/rng.hpp"

namespace pam {

/// Periodic spectral scheme for du = (1/2) u'' dt + u W(dt, dx), u(0, .) = 1,
/// white in time with spatial spectral density c_H |xi|^{1-2H}.
struct SchemeSpec {
  double period = 8.0;
  /// Grid size, a power of two.
  int grid = 128;
  double dt = 1.0 / 512.0;
  double horizon = 0.5;
  double h = 0.75;
  /// Multiplies the noise; 0 gives the heat equation.
  double amplitude = 1.0;
  std::size_t paths = 10000;
  std::uint64_t seed = kDefaultSeed;
  /// Number of recorded time slices (the last one is the horizon).
  int slices = 8;
  bool parallel = true;

  int steps() const;
  /// Throws InvalidSpec on a bad scheme.
  void validate() const;
};

struct SliceStats {
  double t = 0.0;
  double mean = 0.0;
  double mean_se = 0.0;
  double second_moment = 0.0;
  double second_moment_se = 0.0;
  std::size_t paths = 0;
};

struct PathStats {
  std::vector<SliceStats> slices;
  /// E[u(horizon, x_j)^2] per grid point with standard errors.
  std::vector<double> point_second_moment;
  std::vector<double> point_second_moment_se;
};

/// Path statistics use the spatial average of u and u^2 on each path.
PathStats simulate_paths(const SchemeSpec& spec);

void write_slices_csv(std::ostream& os, const PathStats& s);

struct ConvergenceReport {
  std::vector<double> dt;
  std::vector<int> grid;
  std::vector<double> second_moment;
  std::vector<double> second_moment_se;
  /// Observed order in dt from the last three levels.
  double observed_order = 0.0;
  double extrapolated = 0.0;
  double extrapolated_se = 0.0;
  /// False when the last gaps are not geometric (extrapolated then equals the finest level).
  bool extrapolation_valid = false;
  std::string note;
};

/// Runs the levels on shared noise: every level sees the same Brownian
/// increments restricted to its grid frequencies and summed over its step.
/// Levels must share period, horizon, h, amplitude, paths and seed, and refine
/// dt by integer factors with nondecreasing grids. Extrapolation also needs a
/// constant dt ratio over the last three levels.
ConvergenceReport convergence_study(const std::vector<SchemeSpec>& levels);

}  // namespace pam
