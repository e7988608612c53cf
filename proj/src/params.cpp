#include "pam/params.hpp"

#include <cmath>
#include <sstream>

#include "pam/errors.hpp"

namespace pam {

HurstParams::HurstParams() = default;

HurstParams HurstParams::validate(int d, double h0, std::vector<double> h) {
  if (d <= 0) throw Error(ErrorCode::EmptyDimension, "spatial dimension must be positive");
  if (static_cast<int>(h.size()) != d) {
    std::ostringstream os;
    os << "expected " << d << " spatial exponents, got " << h.size();
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  if (!std::isfinite(h0) || h0 <= 0.0 || h0 >= 1.0) {
    throw Error(ErrorCode::OutOfRange, "H0 must lie in [1/2, 1)");
  }
  if (h0 < 0.5 - kWhiteTimeTol) {
    throw Error(ErrorCode::TimeRoughness, "H0 < 1/2 is not supported");
  }
  for (double hi : h) {
    if (!std::isfinite(hi) || hi <= 0.0 || hi >= 1.0) {
      throw Error(ErrorCode::OutOfRange, "spatial exponents must lie in (0, 1)");
    }
  }

  HurstParams p;
  p.h0_ = std::abs(h0 - 0.5) <= kWhiteTimeTol ? 0.5 : h0;
  p.h_ = std::move(h);
  p.h_total_ = 0.0;
  for (double hi : p.h_) {
    p.h_total_ += hi;
    if (hi < 0.5) {
      ++p.d_star_;
      p.h_star_ += hi;
    }
  }
  // Each rough exponent is below 1/2 and each smooth one below 1.
  if (!(p.h_total_ < d - 0.5 * p.d_star_)) {
    throw Error(ErrorCode::OutOfRange, "aggregate exponents are inconsistent");
  }
  return p;
}

bool HurstParams::white_in_time() const { return h0_ == 0.5; }

std::string HurstParams::describe() const {
  std::ostringstream os;
  os << "d=" << d() << " H0=" << h0_ << " H=[";
  for (size_t i = 0; i < h_.size(); ++i) os << (i ? "," : "") << h_[i];
  os << "]";
  return os.str();
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalUnique: return "GlobalUnique";
    case Verdict::LocalUnique: return "LocalUnique";
    case Verdict::NoLocalSolution: return "NoLocalSolution";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

double sufficient_threshold(const HurstParams& p) {
  if (p.d() >= 2) return p.d() - 1.0;
  return p.white_in_time() ? 0.25 : 0.75 - p.h0();
}

double necessary_threshold(int d) { return d == 1 ? 1.25 : (3.0 * d + 2.0) / 4.0; }

namespace {

double chen_global_lhs(const HurstParams& p) {
  const double d = p.d();
  const double rough = p.d_star() - 2.0 * p.h_star();
  if (p.white_in_time()) return 2.0 * (d - p.h_total()) + rough - 2.0;
  return 4.0 * (1.0 - p.h0()) + 2.0 * (d - p.h_total()) + rough - 4.0;
}

double chen_local_lhs(const HurstParams& p) {
  return 4.0 * (1.0 - p.h0()) + (p.d_star() - 2.0 * p.h_star()) - 2.0;
}

}  // namespace

std::pair<bool, bool> chen_conditions(const HurstParams& p) {
  const int d = p.d();
  bool global = chen_global_lhs(p) < 0.0;
  if (!p.white_in_time()) global = global && p.h_total() > d - 1.0;
  const bool local = !p.white_in_time() && d >= 2 &&
                     std::abs(p.h_total() - (d - 1.0)) <= kCriticalTol && chen_local_lhs(p) < 0.0;
  return {global, local};
}

SolvabilityVerdict classify(const HurstParams& p) {
  SolvabilityVerdict v;
  const int d = p.d();
  const double total = p.h_total();
  v.margins.sufficient = total - sufficient_threshold(p);
  v.margins.critical = total - (d - 1.0);
  v.margins.chen_global = chen_global_lhs(p);
  v.margins.chen_local = chen_local_lhs(p);
  v.chen_sufficient = chen_conditions(p);

  if (p.white_in_time()) {
    // Necessary and sufficient when the noise is white in time.
    v.margins.necessary = v.margins.sufficient;
    if (v.margins.sufficient > 0.0) {
      v.verdict = Verdict::GlobalUnique;
      v.matched_condition = "eq1.4";
    } else {
      v.verdict = Verdict::NoLocalSolution;
      v.matched_condition = "eq1.4-fail";
      v.on_necessary_boundary = v.margins.sufficient == 0.0;
    }
    return v;
  }

  v.margins.necessary = total + 2.0 * p.h0() - necessary_threshold(d);
  if (d >= 2 && std::abs(v.margins.critical) <= kCriticalTol) {
    v.verdict = Verdict::LocalUnique;
    v.matched_condition = "eq1.7b";
  } else if (v.margins.sufficient > 0.0) {
    v.verdict = Verdict::GlobalUnique;
    v.matched_condition = "eq1.7";
  } else if (v.margins.necessary <= 0.0) {
    v.verdict = Verdict::NoLocalSolution;
    v.matched_condition = "eq1.9-fail";
    v.on_necessary_boundary = v.margins.necessary == 0.0;
  } else {
    v.verdict = Verdict::Indeterminate;
    v.matched_condition = "gap";
  }
  return v;
}

}  // namespace pam
