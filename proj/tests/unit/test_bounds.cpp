#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pam/bounds.hpp"
#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/numerics.hpp"

using pam::HurstParams;

TEST_CASE("Mittag-Leffler examples") {
  CHECK(pam::mittag_leffler(1.0, 1.0) == doctest::Approx(std::numbers::e).epsilon(1e-14));
  CHECK(pam::mittag_leffler(1.0, 0.0) == 1.0);
  // E_{1/2}(x) = exp(x^2) erfc(-x).
  for (double x : {0.3, 1.0, 2.5}) {
    CHECK(pam::mittag_leffler(0.5, x) == doctest::Approx(std::exp(x * x) * std::erfc(-x)).epsilon(1e-12));
  }
  CHECK(pam::mittag_leffler(0.5, 1.0) == doctest::Approx(5.00898).epsilon(1e-6));
  CHECK(pam::mittag_leffler(2.0, 4.0) == doctest::Approx(std::cosh(2.0)).epsilon(1e-13));
}

TEST_CASE("Mittag-Leffler remainder certificate") {
  auto r = pam::mittag_leffler_series({0.7, 3.0, 1e-14});
  CHECK(r.terms > 0);
  CHECK(r.remainder_bound <= 1e-14 * r.value);
  CHECK(r.value == doctest::Approx(pam::mittag_leffler(0.7, 3.0)).epsilon(1e-13));
}

TEST_CASE("Mittag-Leffler monotonicity") {
  for (double rho : {0.5, 1.0, 1.5, 2.0}) {
    double prev = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double v = pam::mittag_leffler(rho, 0.25 * i);
      CHECK(v > prev);
      prev = v;
    }
  }
  for (double x : {1.5, 4.0, 10.0}) {
    double prev = INFINITY;
    for (int i = 0; i <= 30; ++i) {
      const double v = pam::mittag_leffler(0.5 + 0.05 * i, x);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("Stirling approximation") {
  auto s10 = pam::stirling_gamma(10.0);
  CHECK(s10.gamma == doctest::Approx(362880.0));
  CHECK(s10.approx == doctest::Approx(362880.0).epsilon(0.01));
  CHECK(s10.in_range);
  double prev = s10.rel_error;
  for (double z : {20.0, 40.0, 80.0}) {
    auto s = pam::stirling_gamma(z);
    CHECK(s.rel_error < prev);
    CHECK(s.rel_error == doctest::Approx(1.0 / (12.0 * z)).epsilon(0.05));
    prev = s.rel_error;
  }
  auto s1 = pam::stirling_gamma(1.0);
  CHECK_FALSE(s1.in_range);
  CHECK(s1.gamma == doctest::Approx(1.0));
  CHECK(s1.rel_error > 0.05);
}

TEST_CASE("bound series basics") {
  auto p = HurstParams::validate(1, 0.5, {0.6});
  auto k = pam::calibrate_bound_constants(p);
  auto terms = pam::moment_upper_bound_series(p, 1.0, 2.0, 30, k);
  REQUIRE(terms.size() == 31);
  CHECK(terms[0] == 1.0);
  auto rep = pam::series_convergence_report(p, 1.0, 2.0, 60, k);
  CHECK(rep.applicable);
  CHECK(rep.ratio_limit == 0.0);
  CHECK(rep.ratios.back() < rep.ratios[rep.ratios.size() / 2]);
  CHECK(rep.ratios.back() < 0.5);
}

TEST_CASE("critical and refused series") {
  auto crit = HurstParams::validate(2, 0.8, {0.5, 0.5});
  pam::BoundConstants k;
  k.c = pam::bound_series_constant(crit);
  auto rep = pam::series_convergence_report(crit, 0.1, 2.0, 40, k);
  CHECK(rep.applicable);
  REQUIRE(rep.t0.has_value());
  CHECK(std::isfinite(*rep.t0));
  CHECK(*rep.t0 > 0.0);
  CHECK(rep.ratio_limit > 0.0);

  auto none = HurstParams::validate(2, 0.5, {0.45, 0.5});
  auto refused = pam::series_convergence_report(none, 1.0, 2.0, 10, k);
  CHECK_FALSE(refused.applicable);
  try {
    pam::moment_upper_bound_series(none, 1.0, 2.0, 10, k);
    FAIL("expected InsufficientRegularity");
  } catch (const pam::Error& e) {
    CHECK(e.code() == pam::ErrorCode::InsufficientRegularity);
  }
  CHECK_THROWS_AS(pam::moment_bound(none, 1.0, 2.0, k), pam::Error);
}

TEST_CASE("moment bound exponents") {
  for (double h0 : {0.5, 0.7}) {
    auto p = HurstParams::validate(1, h0, {0.6});
    auto k = pam::calibrate_bound_constants(p);
    CHECK(pam::moment_bound(p, 0.0, 4.0, k) == doctest::Approx(k.c0));

    const double g = p.h_total() - p.d();
    std::vector<double> lp, ly;
    for (double pp : {4.0, 8.0, 16.0, 32.0}) {
      lp.push_back(std::log(pp));
      ly.push_back(std::log(pam::log_moment_bound(p, 1.0, pp, k) - std::log(k.c0)));
    }
    CHECK(pam::linear_fit(lp, ly).slope == doctest::Approx((g + 2.0) / (g + 1.0)).epsilon(0.02));

    std::vector<double> lt, lz;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      lt.push_back(std::log(t));
      lz.push_back(std::log(pam::log_moment_bound(p, t, 4.0, k) - std::log(k.c0)));
    }
    CHECK(pam::linear_fit(lt, lz).slope == doctest::Approx((g + 2.0 * h0) / (g + 1.0)).epsilon(0.02));
  }
  // H0 = 1/2 reduces the colored exponents to the white ones.
  auto w = HurstParams::validate(2, 0.5, {0.7, 0.8});
  CHECK(pam::moment_bound_t_exponent(w) == 1.0);
  CHECK(pam::moment_bound_p_exponent(w) ==
        (w.h_total() - 2.0 + 2.0) / (w.h_total() - 2.0 + 1.0));
}

TEST_CASE("chaos norms stay below the bound terms") {
  auto p = HurstParams::validate(1, 0.5, {0.6});
  auto k = pam::calibrate_bound_constants(p);
  auto terms = pam::moment_upper_bound_series(p, 1.0, 2.0, 4, k);
  for (int n = 1; n <= 4; ++n) {
    pam::ChaosMomentRequest r;
    r.n = n;
    r.params = p;
    CHECK(std::sqrt(pam::chaos_moment_white(r).value) <= terms[static_cast<size_t>(n)]);
  }
}

TEST_CASE("summed series stays below the moment bound") {
  for (double h0 : {0.5, 0.7}) {
    auto p = HurstParams::validate(1, h0, {0.6});
    auto k = pam::calibrate_bound_constants(p);
    CHECK(k.c0 == k.c_h);
    for (double t : {0.003, 0.02, 0.1, 0.3, 0.6, 1.2, 1.9}) {
      for (double pp : {2.0, 2.5, 6.0, 12.0, 24.0}) {
        for (int n_max : {10, 40}) {
          const double lhs = pp * pam::log_series_sum(p, t, pp, n_max, k);
          CAPTURE(h0);
          CAPTURE(t);
          CAPTURE(pp);
          CHECK(lhs <= pam::log_moment_bound(p, t, pp, k));
        }
      }
    }
  }
}

TEST_CASE("HLS constant is one for white noise") {
  CHECK(pam::hls_constant(0.5) == doctest::Approx(1.0));
  CHECK(std::isfinite(pam::hls_constant(0.75)));
  CHECK(pam::hls_constant(0.75) > 0.0);
}
