#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pam/chain.hpp"
#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/kernels.hpp"
#include "pam/numerics.hpp"

using pam::ChaosMethod;
using pam::ChaosMomentRequest;
using pam::HurstParams;

namespace {

constexpr double kPi = std::numbers::pi;

ChaosMomentRequest request(int n, double t, const HurstParams& p, ChaosMethod m, std::int64_t samples = 400'000) {
  ChaosMomentRequest r;
  r.n = n;
  r.t = t;
  r.params = p;
  r.method = m;
  r.mc.samples = samples;
  return r;
}

// Laplace-transform representation in d = 1: E_n = t^{nH} c^n pi^n E[prod |eta_i - eta_{i-1}|^{1-2H}] / Gamma(nH + 1)
// with eta_i independent standard Cauchy variables.
struct Oracle {
  double value;
  double se;
};

Oracle resolvent_oracle(int n, double h, double t, long samples) {
  std::mt19937_64 gen(99);
  std::cauchy_distribution<double> cd(0.0, 1.0);
  const double e = 1.0 - 2.0 * h;
  double s1 = 0.0, s2 = 0.0;
  for (long k = 0; k < samples; ++k) {
    double prev = 0.0, prod = 1.0;
    for (int i = 0; i < n; ++i) {
      const double eta = cd(gen);
      prod *= std::pow(std::abs(eta - prev), e);
      prev = eta;
    }
    s1 += prod;
    s2 += prod * prod;
  }
  const double mean = s1 / samples;
  const double se = std::sqrt((s2 / samples - mean * mean) / samples);
  const double scale = std::pow(t, n * h) * std::pow(pam::spectral_constant(h) * kPi, n) / std::tgamma(n * h + 1.0);
  return {scale * mean, scale * se};
}

// First chaos for colored time noise in d = 1 as a two-dimensional integral.
double colored_first_chaos(double h0, double h, double t) {
  const double e = 1.0 - 2.0 * h;
  const double spatial = pam::spectral_constant(h) * std::sqrt(2.0 * kPi) * pam::gauss_abs_moment(e);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto inner = [&](double s) {
    return ts.integrate(
        [&](double r) {
          return h0 * (2.0 * h0 - 1.0) * std::pow(s - r, 2.0 * h0 - 2.0) * std::pow(2.0 * t - s - r, -0.5 * (1.0 + e));
        },
        0.0, s);
  };
  return 2.0 * spatial * ts.integrate(inner, 0.0, t);
}

}  // namespace

TEST_CASE("method names round trip") {
  for (auto m : {ChaosMethod::SimplexQuadrature, ChaosMethod::TemporalMonteCarlo, ChaosMethod::SpectralMonteCarlo})
    CHECK(pam::chaos_method_from_string(pam::to_string(m)) == m);
  CHECK_THROWS_AS(pam::chaos_method_from_string("simpson"), pam::Error);
  CHECK(pam::default_max_order(ChaosMethod::SimplexQuadrature) == 6);
  CHECK(pam::default_max_order(ChaosMethod::TemporalMonteCarlo) == 4);
  CHECK(pam::default_max_order(ChaosMethod::SpectralMonteCarlo) == 2);
}

TEST_CASE("first chaos of the Brownian sheet") {
  HurstParams p;
  for (double t : {0.5, 1.0, 3.0}) {
    auto est = pam::chaos_moment(request(1, t, p, ChaosMethod::SimplexQuadrature));
    CHECK_FALSE(est.std_error.has_value());
    CHECK(est.value == doctest::Approx(std::sqrt(t / kPi)).epsilon(1e-8));
  }
}

TEST_CASE("quadrature agrees with the resolvent oracle") {
  const double h = 0.6;
  auto p = HurstParams::validate(1, 0.5, {h});
  const double e1 = pam::chaos_moment(request(1, 1.0, p, ChaosMethod::SimplexQuadrature)).value;
  const double i1 = kPi / std::cos(0.5 * kPi * (1.0 - 2.0 * h));
  CHECK(e1 == doctest::Approx(pam::spectral_constant(h) * i1 / std::tgamma(h + 1.0)).epsilon(1e-7));

  for (int n : {2, 3}) {
    auto o = resolvent_oracle(n, h, 1.0, 2'000'000);
    const double q = pam::chaos_moment(request(n, 1.0, p, ChaosMethod::SimplexQuadrature)).value;
    CAPTURE(n);
    CAPTURE(o.value);
    CAPTURE(o.se);
    CHECK(std::abs(q - o.value) <= 4.0 * o.se);
  }
}

TEST_CASE("divergence flags") {
  auto p = HurstParams::validate(2, 0.5, {0.45, 0.5});
  CHECK(pam::white_chaos_divergent(p, 2));
  auto est = pam::chaos_moment(request(2, 1.0, p, ChaosMethod::SimplexQuadrature));
  CHECK(est.divergent);
  CHECK_FALSE(est.divergence_heuristic);
  CHECK_FALSE(pam::white_chaos_divergent(HurstParams::validate(1, 0.5, {0.6}), 4));
}

TEST_CASE("method preconditions") {
  auto white = HurstParams::validate(1, 0.5, {0.6});
  auto colored = HurstParams::validate(1, 0.7, {0.6});
  CHECK_THROWS_AS(pam::chaos_moment_colored(request(1, 1.0, white, ChaosMethod::TemporalMonteCarlo)), pam::Error);
  CHECK_THROWS_AS(pam::chaos_moment(request(1, 1.0, colored, ChaosMethod::SimplexQuadrature)), pam::Error);
  CHECK_THROWS_AS(pam::chaos_moment(request(0, 1.0, white, ChaosMethod::SimplexQuadrature)), pam::Error);
  CHECK_THROWS_AS(pam::chaos_moment(request(1, 0.0, white, ChaosMethod::SimplexQuadrature)), pam::Error);
}

TEST_CASE("gk_equality_mc") {
  pam::McPolicy pol;
  pol.samples = 200'000;
  std::vector<double> u{0.7, 1.9, 0.4};
  auto g = pam::gk_equality_mc(u, 0.5, pol);
  CHECK(g.value == doctest::Approx(pam::gk_gaussian(u)).epsilon(1e-12));

  std::vector<double> u4(u);
  for (auto& v : u4) v *= 4.0;
  const double hk = 0.65;
  CHECK(pam::gk_equality_mc(u4, hk, pol).value ==
        doctest::Approx(std::pow(4.0, 3 * (hk - 1.0)) * pam::gk_equality_mc(u, hk, pol).value).epsilon(1e-10));

  pol.samples = 2'000'000;
  auto mc = pam::gk_equality_mc(u, 0.6, pol);
  pam::GkChain chain(0.6);
  CHECK(std::abs(mc.value - chain.eval(u)) <= 4.0 * mc.std_error);
}

TEST_CASE("serial and parallel estimates are identical") {
  auto p = HurstParams::validate(1, 0.7, {0.6});
  auto a = request(2, 1.0, p, ChaosMethod::TemporalMonteCarlo, 100'000);
  auto b = a;
  b.mc.parallel = false;
  CHECK(pam::chaos_moment(a).value == pam::chaos_moment(b).value);
  CHECK(*pam::chaos_moment(a).std_error == *pam::chaos_moment(b).std_error);
}

TEST_CASE("colored first chaos matches a deterministic integral") {
  auto p = HurstParams::validate(1, 0.7, {0.6});
  auto est = pam::chaos_moment(request(1, 1.0, p, ChaosMethod::TemporalMonteCarlo, 1'000'000));
  REQUIRE(est.std_error.has_value());
  const double ref = colored_first_chaos(0.7, 0.6, 1.0);
  CAPTURE(ref);
  CAPTURE(est.value);
  CHECK(std::abs(est.value - ref) <= 3.0 * *est.std_error);
}

TEST_CASE("colored estimate approaches the white one as H0 -> 1/2") {
  auto white = pam::chaos_moment(request(1, 1.0, HurstParams::validate(1, 0.5, {0.6}), ChaosMethod::SimplexQuadrature));
  auto near = pam::chaos_moment(
      request(1, 1.0, HurstParams::validate(1, 0.51, {0.6}), ChaosMethod::TemporalMonteCarlo, 400'000));
  CHECK(near.value == doctest::Approx(white.value).epsilon(0.1));
}

TEST_CASE("three methods agree on the first two chaoses") {
  for (int n : {1, 2}) {
    auto q = pam::chaos_moment(request(n, 1.0, HurstParams::validate(1, 0.5, {0.7}), ChaosMethod::SimplexQuadrature));
    auto s = pam::chaos_moment(
        request(n, 1.0, HurstParams::validate(1, 0.5, {0.7}), ChaosMethod::SpectralMonteCarlo, 1'000'000));
    auto c = pam::chaos_moment(
        request(n, 1.0, HurstParams::validate(1, 0.501, {0.7}), ChaosMethod::TemporalMonteCarlo, 200'000));
    CAPTURE(n);
    CAPTURE(q.value);
    CAPTURE(s.value);
    CAPTURE(c.value);
    CHECK(std::abs(q.value - s.value) <= 3.0 * *s.std_error);
    CHECK(std::abs(q.value - c.value) <= 3.0 * *c.std_error);
    CHECK(std::abs(s.value - c.value) <= 3.0 * std::hypot(*s.std_error, *c.std_error));
  }
}

TEST_CASE("moments are positive and nondecreasing in t") {
  for (int n = 1; n <= 3; ++n) {
    auto p = n < 3 ? HurstParams::validate(2, 0.5, {0.6, 0.7}) : HurstParams::validate(1, 0.5, {0.6});
    double prev = 0.0;
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      const double v = pam::chaos_moment(request(n, t, p, ChaosMethod::SimplexQuadrature)).value;
      CHECK(v > 0.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("second chaos lower bound") {
  auto half = HurstParams::validate(1, 0.5, {0.5});
  const double lb = pam::second_chaos_lower_bound(0.1, 0.6, 0.2, 0.5, 1.0, half);
  const double g = pam::pair_kernel_g({2.0 - 0.6 - 0.5, 0.5 + 0.3, 0.5});
  CHECK(g / lb >= 1.0);

  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double hks[] = {0.3, 0.45, 0.6, 0.7, 0.85};
  for (int i = 0; i < 1000; ++i) {
    double s1 = u(gen), s2 = u(gen), r1 = u(gen), r2 = u(gen);
    if (s1 > s2) std::swap(s1, s2);
    if (r1 > r2) std::swap(r1, r2);
    if (s1 == s2 || r1 == r2) continue;
    const double hk = hks[i % 5];
    auto p = HurstParams::validate(1, 0.5, {hk});
    const double a = 2.0 - s2 - r2, b = s2 - s1 + r2 - r1;
    CHECK(pam::pair_kernel_g({a, b, hk}) >= pam::second_chaos_lower_bound(s1, s2, r1, r2, 1.0, p));
  }
  try {
    pam::second_chaos_lower_bound(0.3, 0.3, 0.1, 0.5, 1.0, half);
    FAIL("expected DomainOrder");
  } catch (const pam::Error& e) {
    CHECK(e.code() == pam::ErrorCode::DomainOrder);
  }
}

TEST_CASE("second chaos closed form") {
  CHECK(pam::beta_fn(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK_FALSE(pam::second_chaos_closed_white(HurstParams::validate(2, 0.5, {0.5, 0.5}), 1.0).has_value());

  auto p = HurstParams::validate(2, 0.5, {0.6, 0.6});
  auto closed = pam::second_chaos_closed_white(p, 1.0);
  REQUIRE(closed.has_value());
  // With x = 1 - s1 and 1 - s2 = x w the region integral separates into two one-dimensional integrals.
  const double h = p.h_total(), d = 2.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double in_x = ts.integrate([&](double x) { return std::pow(x, d / 2.0 - h + h - d + 2.0 * h - 1.5 * d + 1.0); }, 0.0, 1.0);
  const double in_w = ts.integrate([&](double w) { return std::pow(w, h - d) * std::pow(1.0 - w, 2.0 * h - 1.5 * d); }, 0.0, 1.0);
  const double ref = pam::second_chaos_closed_constant(p) * in_x * in_w;
  CHECK(*closed == doctest::Approx(ref).epsilon(1e-6));
  CHECK_THROWS_AS(pam::second_chaos_closed_white(HurstParams::validate(1, 0.5, {0.6}), 1.0), pam::Error);
}
