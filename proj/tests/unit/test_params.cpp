#include <doctest.h>

#include <random>
#include <vector>

#include "pam/errors.hpp"
#include "pam/params.hpp"

using pam::ErrorCode;
using pam::HurstParams;
using pam::Verdict;

namespace {

ErrorCode code_of(int d, double h0, std::vector<double> h) {
  try {
    HurstParams::validate(d, h0, std::move(h));
  } catch (const pam::Error& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return ErrorCode::Io;
}

bool solvable(Verdict v) { return v == Verdict::GlobalUnique || v == Verdict::LocalUnique; }

}  // namespace

TEST_CASE("validate computes aggregates") {
  auto p = HurstParams::validate(1, 0.5, {0.3});
  CHECK(p.d_star() == 1);
  CHECK(p.h_star() == doctest::Approx(0.3));
  CHECK(p.h_total() == doctest::Approx(0.3));

  auto q = HurstParams::validate(3, 0.7, {0.4, 0.6, 0.8});
  CHECK(q.d_star() == 1);
  CHECK(q.h_star() == doctest::Approx(0.4));
  CHECK(q.h_total() == doctest::Approx(1.8));
  CHECK_FALSE(q.white_in_time());
}

TEST_CASE("default params are the Brownian sheet") {
  HurstParams p;
  CHECK(p.d() == 1);
  CHECK(p.h0() == 0.5);
  CHECK(p.h(0) == 0.5);
  CHECK(p.white_in_time());
}

TEST_CASE("validation errors") {
  CHECK(code_of(1, 0.3, {0.5}) == ErrorCode::TimeRoughness);
  CHECK(code_of(0, 0.5, {}) == ErrorCode::EmptyDimension);
  CHECK(code_of(1, 1.0, {0.5}) == ErrorCode::OutOfRange);
  CHECK(code_of(1, 0.5, {1.0}) == ErrorCode::OutOfRange);
  CHECK(code_of(1, 0.5, {0.0}) == ErrorCode::OutOfRange);
  CHECK(code_of(2, 0.5, {0.5}) != ErrorCode::Io);
}

TEST_CASE("classify examples") {
  auto v = pam::classify(HurstParams::validate(1, 0.5, {0.3}));
  CHECK(v.verdict == Verdict::GlobalUnique);
  CHECK(v.matched_condition == "eq1.4");

  CHECK(pam::classify(HurstParams::validate(2, 0.5, {0.45, 0.5})).verdict == Verdict::NoLocalSolution);
  CHECK(pam::classify(HurstParams::validate(2, 0.8, {0.5, 0.5})).verdict == Verdict::LocalUnique);

  auto gap = pam::classify(HurstParams::validate(1, 0.6, {0.1}));
  CHECK(gap.verdict == Verdict::Indeterminate);
  CHECK(gap.margins.sufficient == doctest::Approx(0.1 - 0.15));
  CHECK(gap.margins.necessary == doctest::Approx(1.3 - 1.25));
}

TEST_CASE("white-in-time boundary at H = 1/4 is strict") {
  CHECK(pam::classify(HurstParams::validate(1, 0.5, {0.25})).verdict == Verdict::NoLocalSolution);
  CHECK(pam::classify(HurstParams::validate(1, 0.5, {0.25 + 1e-9})).verdict == Verdict::GlobalUnique);
}

TEST_CASE("chen_conditions examples") {
  auto a = pam::chen_conditions(HurstParams::validate(1, 0.5, {0.3}));
  CHECK(a.first);
  CHECK_FALSE(a.second);
  auto b = pam::chen_conditions(HurstParams::validate(2, 0.75, {0.4, 0.7}));
  CHECK(b.first);
  CHECK_FALSE(b.second);
  auto c = pam::chen_conditions(HurstParams::validate(2, 0.9, {0.5, 0.5}));
  CHECK_FALSE(c.first);
  CHECK(c.second);
}

TEST_CASE("classifier invariants on random parameters") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> uh(0.01, 0.99);
  std::uniform_real_distribution<double> uh0(0.5, 0.99);
  std::uniform_int_distribution<int> ud(1, 3);
  for (int trial = 0; trial < 3000; ++trial) {
    const int d = ud(gen);
    const double h0 = trial % 3 == 0 ? 0.5 : uh0(gen);
    std::vector<double> h(static_cast<size_t>(d));
    for (auto& x : h) x = uh(gen);
    auto p = HurstParams::validate(d, h0, h);
    auto v = pam::classify(p);

    if (p.white_in_time()) {
      CHECK(v.verdict != Verdict::Indeterminate);
      CHECK(v.verdict != Verdict::LocalUnique);
      if (v.verdict == Verdict::GlobalUnique) CHECK(p.d_star() <= 1);
    }
    if (pam::chen_conditions(p).first) CHECK(v.verdict == Verdict::GlobalUnique);

    // Raising one exponent never turns a solvable verdict into NoLocalSolution.
    if (solvable(v.verdict)) {
      auto axis = static_cast<size_t>(trial % d);
      auto raised = h;
      raised[axis] = raised[axis] + (0.995 - raised[axis]) * 0.5;
      auto w = pam::classify(HurstParams::validate(d, h0, raised));
      CHECK(w.verdict != Verdict::NoLocalSolution);
    }
  }
}

TEST_CASE("critical tolerance") {
  auto exact = pam::classify(HurstParams::validate(2, 0.8, {0.4, 0.6}));
  CHECK(exact.verdict == Verdict::LocalUnique);
  auto off = pam::classify(HurstParams::validate(2, 0.8, {0.4, 0.6 - 1e-9}));
  CHECK(off.verdict != Verdict::LocalUnique);
}
