#pragma once

#include <span>
#include <vector>

namespace pam {

/// Evaluates the n-fold Gaussian chain integral
///   g(u) = int_{R^n} prod_i exp(-u_i eta_i^2 / 2) |eta_i - eta_{i-1}|^{1-2H} d eta,  eta_0 = 0,
/// for one spatial coordinate by backward transfer on a symmetric graded grid.
/// The transfer weights are exact for piecewise-linear data, so the kernel
/// singularity costs nothing; they are assembled once per (H, grid) and reused.
/// Two grids (per_decade and 2 per_decade) are combined by Richardson
/// extrapolation of the O(h^2) interpolation error.
class GkChain {
 public:
  struct Grid {
    /// Smallest ratio min(u) / max(u) the grid must resolve.
    double min_ratio = 1e-10;
    /// Nodes per decade of the geometric part of the coarse grid.
    int per_decade = 32;
    /// First positive node, in units of the narrowest Gaussian width.
    double inner = 1e-3;
    /// Truncation in widths of the widest Gaussian.
    double cut = 12.0;
  };

  GkChain(double hk, Grid grid);
  explicit GkChain(double hk) : GkChain(hk, Grid{}) {}

  double hk() const { return hk_; }
  const Grid& grid() const { return grid_; }
  /// Node count of the fine grid.
  std::size_t size() const { return fine_.nodes.size(); }

  /// g(u) for positive gaps u; throws PreconditionViolation when
  /// min(u)/max(u) is below the grid's resolved ratio.
  double eval(std::span<const double> u) const;

  /// Single-grid value without extrapolation (fine grid unless coarse is set).
  double eval_unextrapolated(std::span<const double> u, bool coarse = false) const;

 private:
  struct Level {
    std::vector<double> nodes;
    std::vector<double> weights;  // row-major nodes.size()^2
  };

  Level build(int per_decade) const;
  double run(const Level& level, std::span<const double> u) const;

  double hk_;
  double e_;
  Grid grid_;
  Level coarse_;
  Level fine_;
};

/// Exact Gaussian value of the chain at H = 1/2: (2 pi)^{n/2} prod u_i^{-1/2}.
double gk_gaussian(std::span<const double> u);

}  // namespace pam
