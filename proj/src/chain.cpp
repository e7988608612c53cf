#include "pam/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/numerics.hpp"

namespace pam {

namespace {

// Four-point Gauss-Legendre on [-1, 1].
constexpr double kGl4x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                             0.8611363115940526};
constexpr double kGl4w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                             0.3478548451374538};

struct Moments {
  double m0 = 0.0;  // int |z - c|^e dz over [p, q]
  double m1 = 0.0;  // int |z - c|^e (z - p) / (q - p) dz over [p, q]
};

Moments kernel_moments(double p, double q, double c, double e) {
  const double h = q - p;
  const double a = p - c;
  const double b = q - c;
  Moments m;
  if ((a > 0.0 || b < 0.0) && std::min(std::abs(a), std::abs(b)) > 2.0 * h) {
    for (int k = 0; k < 4; ++k) {
      const double s = 0.5 * (1.0 + kGl4x[k]);
      const double wt = 0.5 * h * kGl4w[k] * std::pow(std::abs(a + s * h), e);
      m.m0 += wt;
      m.m1 += wt * s;
    }
    return m;
  }
  auto f0 = [e](double v) { return std::copysign(std::pow(std::abs(v), e + 1.0), v) / (e + 1.0); };
  auto f1 = [e](double v) { return std::pow(std::abs(v), e + 2.0) / (e + 2.0); };
  m.m0 = f0(b) - f0(a);
  m.m1 = (f1(b) - f1(a) - a * m.m0) / h;
  return m;
}

}  // namespace

GkChain::GkChain(double hk, Grid grid) : hk_(hk), e_(1.0 - 2.0 * hk), grid_(grid) {
  if (!(hk > 0.0 && hk < 1.0)) throw Error(ErrorCode::OutOfRange, "chain exponent must lie in (0, 1)");
  if (!(grid.min_ratio > 0.0 && grid.min_ratio <= 1.0) || grid.per_decade < 4 ||
      !(grid.inner > 0.0 && grid.inner < 1.0) || !(grid.cut > 1.0))
    throw Error(ErrorCode::PreconditionViolation, "invalid chain grid");
  coarse_ = build(grid.per_decade);
  fine_ = build(2 * grid.per_decade);
}

GkChain::Level GkChain::build(int per_decade) const {
  Level level;
  const double ymax = grid_.cut / std::sqrt(grid_.min_ratio);
  const double ratio = std::pow(10.0, 1.0 / per_decade);
  level.nodes.push_back(0.0);
  for (double y = grid_.inner; y < ymax * ratio; y *= ratio) level.nodes.push_back(y);

  const std::size_t g = level.nodes.size();
  level.weights.assign(g * g, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    const double y = level.nodes[i];
    double* row = &level.weights[i * g];
    for (std::size_t j = 0; j + 1 < g; ++j) {
      const double p = level.nodes[j];
      const double q = level.nodes[j + 1];
      const Moments minus = kernel_moments(p, q, y, e_);
      const Moments plus = kernel_moments(p, q, -y, e_);
      const double m0 = minus.m0 + plus.m0;
      const double m1 = minus.m1 + plus.m1;
      row[j] += m0 - m1;
      row[j + 1] += m1;
    }
  }
  return level;
}

double GkChain::run(const Level& level, std::span<const double> u) const {
  if (u.empty()) throw Error(ErrorCode::PreconditionViolation, "chain needs at least one gap");
  const double umax = *std::max_element(u.begin(), u.end());
  const double umin = *std::min_element(u.begin(), u.end());
  if (!(umin > 0.0)) throw Error(ErrorCode::PreconditionViolation, "chain gaps must be positive");
  if (umin / umax < grid_.min_ratio * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "gap ratio " << umin / umax << " below grid resolution " << grid_.min_ratio;
    throw Error(ErrorCode::PreconditionViolation, os.str());
  }
  const std::size_t n = u.size();
  const std::vector<double>& y = level.nodes;
  const std::size_t g = y.size();
  std::vector<double> w(g, 1.0), conv(g);
  auto envelope = [&](double uk) {
    const double s = uk / umax;
    for (std::size_t j = 0; j < g; ++j) w[j] *= std::exp(-0.5 * s * y[j] * y[j]);
  };
  envelope(u[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) {
    for (std::size_t i = 0; i < g; ++i) {
      const double* row = &level.weights[i * g];
      double acc = 0.0;
      for (std::size_t j = 0; j < g; ++j) acc += row[j] * w[j];
      conv[i] = acc;
    }
    w.swap(conv);
    envelope(u[k]);
  }
  // Row 0 of the transfer matrix integrates |z|^e against w over the line.
  double g0 = 0.0;
  for (std::size_t j = 0; j < g; ++j) g0 += level.weights[j] * w[j];
  return std::pow(umax, static_cast<double>(n) * (hk_ - 1.0)) * g0;
}

double GkChain::eval(std::span<const double> u) const {
  if (e_ == 0.0) return gk_gaussian(u);
  return (4.0 * run(fine_, u) - run(coarse_, u)) / 3.0;
}

double GkChain::eval_unextrapolated(std::span<const double> u, bool coarse) const {
  return run(coarse ? coarse_ : fine_, u);
}

double gk_gaussian(std::span<const double> u) {
  double v = 1.0;
  for (double x : u) v *= std::sqrt(2.0 * kPi / x);
  return v;
}

}  // namespace pam
