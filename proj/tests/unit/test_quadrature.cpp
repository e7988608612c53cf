#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "pam/errors.hpp"
#include "pam/quadrature.hpp"

using pam::SimplexIntegrand;

namespace {

constexpr double kPi = std::numbers::pi;

pam::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const pam::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return pam::ErrorCode::Io;
}

// Midpoint sum on a mesh graded toward each endpoint: the interval is split
// at its middle and each half is mapped by s -> s^q with q = 2 / (1 + exponent).
double graded_riemann(const pam::SingularIntegrand& f, double a, double b, long n) {
  const double half = 0.5 * (b - a);
  auto full = [&](double x, double dl, double dr) {
    return std::pow(dl, f.left_exponent) * std::pow(dr, f.right_exponent) * f.regular(x);
  };
  double sum = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double e = side == 0 ? f.left_exponent : f.right_exponent;
    const double q = std::max(1.0, 2.0 / (1.0 + e));
    const double h = 1.0 / static_cast<double>(n);
    double part = 0.0;
    for (long i = 0; i < n; ++i) {
      const double s = (static_cast<double>(i) + 0.5) * h;
      const double w = half * std::pow(s, q);
      const double jac = half * q * std::pow(s, q - 1.0);
      const double dl = side == 0 ? w : (b - a) - w;
      const double dr = side == 0 ? (b - a) - w : w;
      part += full(side == 0 ? a + w : b - w, dl, dr) * jac;
    }
    sum += part * h;
  }
  return sum;
}

}  // namespace

TEST_CASE("integrate_singular_1d examples") {
  pam::SingularIntegrand inv_sqrt{[](double) { return 1.0; }, -0.5, 0.0};
  CHECK(pam::integrate_singular_1d(inv_sqrt, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  pam::SingularIntegrand divergent{[](double) { return 1.0; }, -1.0, 0.0};
  CHECK(code_of([&] { pam::integrate_singular_1d(divergent, 0.0, 1.0); }) ==
        pam::ErrorCode::NonIntegrableEndpoint);

  // u^{-0.6} (u + 0.5)^{-0.6} on [0, 1] lies between the two sandwich bounds.
  pam::SingularIntegrand s{[](double u) { return std::pow(u + 0.5, -0.6); }, -0.6, 0.0};
  const double v = pam::integrate_singular_1d(s, 0.0, 1.0);
  const double lower = std::pow(0.5, 0.4) / 0.4;
  const double upper = std::pow(0.5, -0.2) * std::tgamma(0.4) * std::tgamma(0.2) / std::tgamma(0.6);
  CHECK(v > lower);
  CHECK(v < upper);
  CHECK(v == doctest::Approx(graded_riemann(s, 0.0, 1.0, 2'000'000)).epsilon(1e-6));
}

TEST_CASE("integrate_singular_1d regression set against a graded Riemann oracle") {
  const std::vector<std::tuple<pam::SingularIntegrand, double, double>> cases{
      {{[](double) { return 1.0; }, -0.3, 0.0}, 0.0, 1.0},
      {{[](double x) { return std::exp(-x); }, -0.9, 0.0}, 0.0, 2.0},
      {{[](double x) { return std::cos(x); }, 0.0, -0.7}, 0.0, 1.5},
      {{[](double) { return 1.0; }, -0.5, -0.5}, 0.0, 1.0},
      {{[](double x) { return 1.0 + x * x; }, -0.25, -0.75}, -1.0, 1.0},
      {{[](double x) { return std::log(2.0 + x); }, 0.5, -0.4}, 0.0, 3.0},
      {{[](double x) { return 1.0 / (1.0 + x); }, -0.95, 0.0}, 0.0, 1.0},
      {{[](double x) { return std::sin(3.0 * x) + 2.0; }, -0.6, -0.2}, 0.5, 2.5},
      {{[](double x) { return std::exp(x); }, 0.3, 0.3}, -1.0, 0.0},
      {{[](double x) { return std::pow(x + 0.5, -0.6); }, -0.6, 0.0}, 0.0, 1.0},
  };
  for (const auto& [f, a, b] : cases) {
    const double got = pam::integrate_singular_1d(f, a, b);
    const double ref = graded_riemann(f, a, b, 5'000'000);
    CAPTURE(f.left_exponent);
    CAPTURE(f.right_exponent);
    CHECK(got == doctest::Approx(ref).epsilon(1e-6));
  }
  CHECK(pam::integrate_singular_1d(std::get<0>(cases[3]), 0.0, 1.0) == doctest::Approx(kPi).epsilon(1e-11));
}

TEST_CASE("simplex_integral_J examples") {
  CHECK(pam::simplex_integral_J({{0.0, 0.0, 0.0}, 2.0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(pam::simplex_integral_J({{-0.5}, 1.0}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pam::simplex_integral_J({{-0.5, -0.5}, 1.0}) == doctest::Approx(kPi).epsilon(1e-12));

  // Two-dimensional tanh-sinh oracle of the same region.
  boost::math::quadrature::tanh_sinh<double> ts;
  auto inner = [&](double r2) {
    return ts.integrate([&](double r1) { return std::pow(r1, -0.3) * std::pow(r2 - r1, 0.4); }, 0.0, r2);
  };
  const double ref = ts.integrate(inner, 0.0, 1.5);
  CHECK(pam::simplex_integral_J({{-0.3, 0.4}, 1.5}) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("simplex volume and scaling") {
  double fact = 1.0;
  for (int m = 1; m <= 8; ++m) {
    fact *= m;
    const double t = 1.7;
    CHECK(pam::simplex_integral_J({std::vector<double>(static_cast<size_t>(m), 0.0), t}) ==
          doctest::Approx(std::pow(t, m) / fact).epsilon(1e-12));
  }
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ua(-0.9, 0.9), uc(0.2, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 5;
    SimplexIntegrand s{std::vector<double>(static_cast<size_t>(m)), 1.0};
    for (auto& a : s.alpha) a = ua(gen);
    const double c = uc(gen);
    SimplexIntegrand sc = s;
    sc.t = c;
    CHECK(pam::simplex_integral_J(sc) ==
          doctest::Approx(std::pow(c, s.alpha_sum() + m) * pam::simplex_integral_J(s)).epsilon(1e-8));
  }
}

TEST_CASE("closed form agrees with nested quadrature") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> ua(-0.8, 0.8);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + trial % 3;
    SimplexIntegrand s{std::vector<double>(static_cast<size_t>(m)), 1.3};
    for (auto& a : s.alpha) a = ua(gen);
    CHECK(pam::simplex_integral_J_nested(s) == doctest::Approx(pam::simplex_integral_J(s)).epsilon(1e-7));
  }
}

TEST_CASE("simplex exponent floor") {
  const double eps = pam::kSimplexEpsilon;
  CHECK(code_of([&] { pam::simplex_integral_J({{-1.0 + 0.5 * eps}, 1.0}); }) ==
        pam::ErrorCode::PreconditionViolation);
  CHECK_NOTHROW(pam::simplex_integral_J({{-1.0 + 2.0 * eps}, 1.0}));
  CHECK(code_of([&] { pam::simplex_integral_J({{}, 1.0}); }) == pam::ErrorCode::PreconditionViolation);
  CHECK(code_of([&] { pam::simplex_integral_J({{0.0}, 0.0}); }) == pam::ErrorCode::PreconditionViolation);
}

TEST_CASE("simplex_bound_check") {
  for (int m = 1; m <= 5; ++m) {
    SimplexIntegrand s{std::vector<double>(static_cast<size_t>(m), 0.0), 2.0};
    CHECK(pam::simplex_bound_check(s, 1.0));
    CHECK(pam::simplex_bound_check(s, 3.0));
    CHECK_FALSE(pam::simplex_bound_check(s, 0.0));
  }
  CHECK(pam::simplex_bound_check({{-0.5, -0.5}, 1.0}, 4.0));
}

TEST_CASE("sandwich exponent fits") {
  const std::vector<double> xs{1e-2, 1e-3, 1e-4, 1e-5};
  const std::vector<double> deep{1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  CHECK(std::abs(pam::sandwich_exponent_fit(0.6, 0.6, 1.0, deep).slope + 0.2) <= 0.02);
  CHECK(std::abs(pam::sandwich_exponent_fit(0.9, 0.9, 1.0, xs).slope + 0.8) <= 0.02);
  CHECK(code_of([&] { pam::sandwich_exponent_fit(0.5, 0.5, 1.0, xs); }) == pam::ErrorCode::PreconditionViolation);
}

TEST_CASE("sandwich integral stays inside its bounds") {
  for (double x : {1e-1, 1e-3, 1e-5}) {
    const double a = 0.7, b = 0.6, eps = 1.0;
    const double v = pam::sandwich_integral(a, b, eps, x);
    const double upper = std::pow(x, 1.0 - a - b) * std::tgamma(1.0 - a) * std::tgamma(a + b - 1.0) / std::tgamma(b);
    const double lower = std::pow(2.0 * x, -b) * std::pow(std::min(x, eps), 1.0 - a) / (1.0 - a);
    CHECK(v <= upper);
    CHECK(v >= lower);
  }
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  auto r = pam::gauss_legendre(6);
  double s = 0.0;
  for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], 11);
  CHECK(s == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}
