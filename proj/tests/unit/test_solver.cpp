#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "pam/errors.hpp"
#include "pam/solver.hpp"

using pam::SchemeSpec;

namespace {

SchemeSpec quick() {
  SchemeSpec s;
  s.grid = 32;
  s.dt = 1.0 / 128.0;
  s.horizon = 0.25;
  s.paths = 2000;
  s.slices = 4;
  return s;
}

pam::ErrorCode code_of(const SchemeSpec& s) {
  try {
    s.validate();
  } catch (const pam::Error& e) {
    return e.code();
  }
  FAIL("expected InvalidSpec");
  return pam::ErrorCode::Io;
}

}  // namespace

TEST_CASE("zero amplitude solves the heat equation") {
  auto s = quick();
  s.amplitude = 0.0;
  s.paths = 64;
  auto st = pam::simulate_paths(s);
  for (const auto& sl : st.slices) {
    CHECK(sl.mean == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sl.second_moment == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("mean is preserved and the second moment grows") {
  auto st = pam::simulate_paths(quick());
  REQUIRE(st.slices.size() == 4);
  CHECK(st.slices.back().t == doctest::Approx(0.25));
  double prev = 1.0;
  for (const auto& sl : st.slices) {
    CHECK(std::abs(sl.mean - 1.0) <= 3.0 * sl.mean_se);
    CHECK(sl.second_moment >= prev);
    CHECK(sl.paths == 2000);
    prev = sl.second_moment;
  }
}

TEST_CASE("second moment is stationary in space") {
  auto st = pam::simulate_paths(quick());
  const auto& m = st.point_second_moment;
  const auto& se = st.point_second_moment_se;
  REQUIRE(m.size() == 32);
  double avg = 0.0;
  for (double v : m) avg += v;
  avg /= static_cast<double>(m.size());
  int outside = 0;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (std::abs(m[j] - avg) > 3.0 * se[j]) ++outside;
  CHECK(outside <= 1);
}

TEST_CASE("serial and parallel runs are identical") {
  auto a = quick();
  a.paths = 100;
  auto b = a;
  b.parallel = false;
  auto sa = pam::simulate_paths(a), sb = pam::simulate_paths(b);
  for (std::size_t i = 0; i < sa.slices.size(); ++i) {
    CHECK(sa.slices[i].mean == sb.slices[i].mean);
    CHECK(sa.slices[i].second_moment == sb.slices[i].second_moment);
  }
  CHECK(sa.point_second_moment == sb.point_second_moment);
}

TEST_CASE("invalid schemes") {
  auto s = quick();
  s.grid = 48;
  CHECK(code_of(s) == pam::ErrorCode::InvalidSpec);
  s = quick();
  s.dt = 0.1;
  CHECK(code_of(s) == pam::ErrorCode::InvalidSpec);
  s = quick();
  s.h = 0.5;
  CHECK(code_of(s) == pam::ErrorCode::InvalidSpec);
  s = quick();
  s.paths = 0;
  CHECK(code_of(s) == pam::ErrorCode::InvalidSpec);
  s = quick();
  s.horizon = -1.0;
  CHECK(code_of(s) == pam::ErrorCode::InvalidSpec);
  CHECK_NOTHROW(quick().validate());
  CHECK(quick().steps() == 32);
}

TEST_CASE("convergence study") {
  std::vector<SchemeSpec> levels(3, quick());
  levels[0].grid = 16;
  levels[0].dt = 1.0 / 32.0;
  levels[1].grid = 32;
  levels[1].dt = 1.0 / 128.0;
  levels[2].grid = 64;
  levels[2].dt = 1.0 / 512.0;
  auto r = pam::convergence_study(levels);
  REQUIRE(r.second_moment.size() == 3);
  const double g1 = r.second_moment[1] - r.second_moment[0];
  const double g2 = r.second_moment[2] - r.second_moment[1];
  CHECK(g1 * g2 > 0.0);
  CAPTURE(r.note);
  REQUIRE(r.extrapolation_valid);
  CHECK(std::abs(r.extrapolated - r.second_moment[2]) < std::abs(g2));
  CHECK(r.observed_order > 0.0);

  CHECK_THROWS_AS(pam::convergence_study({quick()}), pam::Error);
  auto uneven = levels;
  uneven[2].dt = 1.0 / 256.0;
  auto ru = pam::convergence_study(uneven);
  CHECK_FALSE(ru.extrapolation_valid);
  CHECK(ru.extrapolated == ru.second_moment.back());
  CHECK_FALSE(ru.note.empty());
  auto mixed = levels;
  mixed[1].seed += 1;
  CHECK_THROWS_AS(pam::convergence_study(mixed), pam::Error);
}

TEST_CASE("slice csv") {
  auto s = quick();
  s.paths = 32;
  std::ostringstream os;
  pam::write_slices_csv(os, pam::simulate_paths(s));
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header.find("second_moment") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}
