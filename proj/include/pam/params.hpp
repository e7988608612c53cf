#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pam {

/// Validated Hurst exponents of the noise: H0 in time, one H_i per spatial axis.
class HurstParams {
 public:
  /// Brownian sheet in one spatial dimension (d = 1, H0 = 1/2, H = 1/2).
  HurstParams();

  /// Validates and normalizes a raw tuple. Throws pam::Error on bad input.
  static HurstParams validate(int d, double h0, std::vector<double> h);

  int d() const { return static_cast<int>(h_.size()); }
  double h0() const { return h0_; }
  const std::vector<double>& h() const { return h_; }
  double h(int axis) const { return h_[static_cast<size_t>(axis)]; }

  /// Number of spatial exponents strictly below 1/2.
  int d_star() const { return d_star_; }
  /// Sum of the rough (below 1/2) spatial exponents.
  double h_star() const { return h_star_; }
  /// Sum of all spatial exponents.
  double h_total() const { return h_total_; }

  bool white_in_time() const;

  std::string describe() const;

 private:
  double h0_ = 0.5;
  std::vector<double> h_{0.5};
  int d_star_ = 0;
  double h_star_ = 0.0;
  double h_total_ = 0.5;
};

/// |H0 - 1/2| below this is treated as white-in-time noise.
inline constexpr double kWhiteTimeTol = 1e-12;
/// |H_total - (d-1)| below this triggers the critical (local) regime.
inline constexpr double kCriticalTol = 1e-12;

enum class Verdict { GlobalUnique, LocalUnique, NoLocalSolution, Indeterminate };

const char* to_string(Verdict v);

struct Margins {
  /// H_total minus the sufficient-condition threshold (1/4, 3/4 - H0 or d - 1).
  double sufficient = 0.0;
  /// H_total - (d - 1); zero in the critical case.
  double critical = 0.0;
  /// H_total + 2 H0 minus the necessary-condition threshold (H0 > 1/2 only).
  double necessary = 0.0;
  /// Left side minus right side of the comparative conditions (negative means holds).
  double chen_global = 0.0;
  double chen_local = 0.0;
};

struct SolvabilityVerdict {
  Verdict verdict = Verdict::Indeterminate;
  std::string matched_condition;
  std::pair<bool, bool> chen_sufficient{false, false};
  Margins margins;
  /// Set when the necessary condition fails with equality (the open boundary case).
  bool on_necessary_boundary = false;
};

SolvabilityVerdict classify(const HurstParams& p);

/// Earlier sufficient conditions: (global condition, critical local condition).
std::pair<bool, bool> chen_conditions(const HurstParams& p);

/// Threshold that H_total must exceed for the sufficient condition.
double sufficient_threshold(const HurstParams& p);
/// Threshold that H_total + 2 H0 must exceed for the necessary condition.
double necessary_threshold(int d);

}  // namespace pam
