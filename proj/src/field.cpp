#include "pam/field.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/fft.hpp"
#include "pam/kernels.hpp"
#include "pam/rng.hpp"

namespace pam {

const char* to_string(FieldMethod m) {
  return m == FieldMethod::Cholesky ? "Cholesky" : "CirculantEmbedding";
}

FieldMethod field_method_from_string(const std::string& s) {
  if (s == "Cholesky" || s == "cholesky") return FieldMethod::Cholesky;
  if (s == "CirculantEmbedding" || s == "circulant") return FieldMethod::CirculantEmbedding;
  throw Error(ErrorCode::InvalidSpec, "unknown field method '" + s + "'");
}

std::size_t GridSpec::total_points() const {
  std::size_t n = time_points.size();
  for (const auto& a : space_points) n *= a.size();
  return n;
}

std::vector<double> lattice(int k_min, int k_max, double step) {
  std::vector<double> v;
  for (int k = k_min; k <= k_max; ++k) v.push_back(k * step);
  return v;
}

namespace {

// Real linear map from m independent normals to the n points of one axis.
struct AxisOp {
  std::size_t n = 0;
  std::size_t m = 0;
  std::function<void(const std::vector<double>&, std::vector<double>&)> apply;
};

void check_grid(const GridSpec& g, const HurstParams& p) {
  if (static_cast<int>(g.space_points.size()) != p.d())
    throw Error(ErrorCode::GridMismatch, "grid dimension differs from the parameter dimension");
  for (std::size_t a = 0; a < g.axes(); ++a) {
    const auto& ax = g.axis(a);
    if (ax.empty()) throw Error(ErrorCode::InvalidSpec, "empty grid axis");
    for (std::size_t i = 0; i < ax.size(); ++i) {
      if (!std::isfinite(ax[i])) throw Error(ErrorCode::InvalidSpec, "non-finite grid coordinate");
      if (i > 0 && !(ax[i] > ax[i - 1])) throw Error(ErrorCode::InvalidSpec, "grid axes must increase");
    }
  }
  for (double t : g.time_points)
    if (t < 0.0) throw Error(ErrorCode::InvalidSpec, "time points must be nonnegative");
}

AxisOp cholesky_axis(const std::vector<double>& x, double h) {
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) live.push_back(i);
  const auto k = static_cast<Eigen::Index>(live.size());
  Eigen::MatrixXd cov(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) cov(i, j) = covariance_R(h, x[live[static_cast<size_t>(i)]], x[live[static_cast<size_t>(j)]]);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::EmbeddingNotPSD, "axis covariance is not positive definite");
  Eigen::MatrixXd l = llt.matrixL();
  AxisOp op;
  op.n = x.size();
  op.m = live.size();
  op.apply = [l, live, n = x.size()](const std::vector<double>& in, std::vector<double>& out) {
    out.assign(n, 0.0);
    Eigen::Map<const Eigen::VectorXd> z(in.data(), static_cast<Eigen::Index>(in.size()));
    const Eigen::VectorXd y = l * z;
    for (std::size_t i = 0; i < live.size(); ++i) out[live[i]] = y(static_cast<Eigen::Index>(i));
  };
  return op;
}

struct Lattice {
  double step = 1.0;
  std::vector<long> k;
};

bool as_lattice(const std::vector<double>& x, Lattice& out) {
  if (x.size() == 1) {
    out.step = x[0] == 0.0 ? 1.0 : std::abs(x[0]);
    out.k = {x[0] == 0.0 ? 0L : (x[0] > 0.0 ? 1L : -1L)};
    return true;
  }
  const double step = x[1] - x[0];
  out.step = step;
  out.k.clear();
  for (double v : x) {
    const double r = v / step;
    const double kr = std::round(r);
    if (std::abs(r - kr) > 1e-9 * std::max(1.0, std::abs(r))) return false;
    out.k.push_back(static_cast<long>(kr));
  }
  for (std::size_t i = 1; i < out.k.size(); ++i)
    if (out.k[i] != out.k[i - 1] + 1) return false;
  return true;
}

// Davies-Harte embedding of fractional Gaussian noise followed by cumulative
// sums anchored at the lattice origin. Returns false on a negative eigenvalue.
bool circulant_axis(const std::vector<double>& x, double h, AxisOp& op, std::vector<std::string>& warnings) {
  Lattice lat;
  if (!as_lattice(x, lat)) throw Error(ErrorCode::InvalidSpec, "circulant embedding needs a uniform lattice through 0");
  const long j0 = std::min(lat.k.front(), 0L);
  const long j1 = std::max(lat.k.back(), 0L);
  const auto n_inc = static_cast<std::size_t>(j1 - j0);
  if (n_inc > kCirculantMaxAxis) throw Error(ErrorCode::SizeLimit, "circulant axis exceeds 2^16 points");
  op.n = x.size();
  if (n_inc == 0) {
    op.m = 0;
    op.apply = [n = x.size()](const std::vector<double>&, std::vector<double>& out) { out.assign(n, 0.0); };
    return true;
  }
  const std::size_t m = 2 * n_inc;
  auto gamma = [h](double k) {
    return 0.5 * (std::pow(std::abs(k + 1.0), 2.0 * h) - 2.0 * std::pow(std::abs(k), 2.0 * h) +
                  std::pow(std::abs(k - 1.0), 2.0 * h));
  };
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double lag = j <= n_inc ? static_cast<double>(j) : static_cast<double>(m - j);
    c[j] = gamma(lag);
  }
  auto fft = std::make_shared<Fft>(m);
  fft->forward(c);
  std::vector<double> root(m);
  for (std::size_t j = 0; j < m; ++j) {
    double lam = c[j].real();
    if (lam < -1e-10) return false;
    if (lam < 0.0) {
      warnings.push_back("clipped a slightly negative embedding eigenvalue to 0");
      lam = 0.0;
    }
    root[j] = std::sqrt(lam);
  }
  const double scale = std::pow(lat.step, h);
  op.m = m;
  op.apply = [fft, root, lat, j0, n_inc, m, scale](const std::vector<double>& in, std::vector<double>& out) {
    std::vector<std::complex<double>> z(m);
    for (std::size_t j = 0; j < m; ++j) z[j] = in[j];
    fft->forward(z);
    for (std::size_t j = 0; j < m; ++j) z[j] *= root[j];
    fft->backward(z);
    // z / m is now a real N(0, C) vector; its first n_inc entries are fGn.
    std::vector<double> b(n_inc + 1, 0.0);  // b[i] = B(j0 + i)
    const auto origin = static_cast<std::size_t>(-j0);
    for (std::size_t i = origin; i < n_inc; ++i) b[i + 1] = b[i] + z[i].real() / static_cast<double>(m);
    for (std::size_t i = origin; i-- > 0;) b[i] = b[i + 1] - z[i].real() / static_cast<double>(m);
    out.resize(lat.k.size());
    for (std::size_t i = 0; i < lat.k.size(); ++i) out[i] = scale * b[static_cast<size_t>(lat.k[i] - j0)];
  };
  return true;
}

// Applies one axis operator along dimension `axis` of a row-major tensor.
std::vector<double> mode_product(const std::vector<double>& in, std::vector<std::size_t>& shape, std::size_t axis,
                                 const AxisOp& op) {
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t m = shape[axis];
  std::vector<double> out(outer * op.n * inner);
  std::vector<double> fiber(m), res;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t k = 0; k < m; ++k) fiber[k] = in[(o * m + k) * inner + i];
      op.apply(fiber, res);
      for (std::size_t k = 0; k < op.n; ++k) out[(o * op.n + k) * inner + i] = res[k];
    }
  }
  shape[axis] = op.n;
  return out;
}

}  // namespace

FieldGrid sample_sheet(const GridSpec& grid, const HurstParams& params, FieldMethod method, std::uint64_t seed) {
  check_grid(grid, params);
  FieldGrid f;
  f.grid = grid;
  f.h0 = params.h0();
  f.h = params.h();
  f.seed = seed;
  f.method = method;

  std::vector<AxisOp> ops(grid.axes());
  auto exponent = [&](std::size_t a) { return a == 0 ? params.h0() : params.h(static_cast<int>(a) - 1); };
  bool use_cholesky = method == FieldMethod::Cholesky;
  if (!use_cholesky) {
    for (std::size_t a = 0; a < grid.axes(); ++a) {
      if (!circulant_axis(grid.axis(a), exponent(a), ops[a], f.warnings)) {
        f.warnings.push_back("negative circulant eigenvalue; fell back to Cholesky");
        f.fell_back = true;
        use_cholesky = true;
        break;
      }
    }
  }
  if (use_cholesky) {
    if (grid.total_points() > kCholeskyMaxPoints)
      throw Error(ErrorCode::SizeLimit, "Cholesky sampling is limited to 4096 grid points");
    for (std::size_t a = 0; a < grid.axes(); ++a) ops[a] = cholesky_axis(grid.axis(a), exponent(a));
  }

  std::vector<std::size_t> shape(grid.axes());
  std::size_t total = 1;
  for (std::size_t a = 0; a < grid.axes(); ++a) {
    shape[a] = ops[a].m;
    total *= ops[a].m;
  }
  std::mt19937_64 rng = substream(seed, 0);
  std::normal_distribution<double> normal;
  std::vector<double> values(total);
  for (double& v : values) v = normal(rng);
  for (std::size_t a = 0; a < grid.axes(); ++a) values = mode_product(values, shape, a, ops[a]);
  f.values = std::move(values);
  return f;
}

std::vector<FieldGrid> sample_batch(const GridSpec& grid, const HurstParams& params, FieldMethod method,
                                    std::uint64_t seed, std::size_t count, bool parallel) {
  std::vector<FieldGrid> out(count);
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
    seeds[i] = splitmix64(s);
  }
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = sample_sheet(grid, params, method, seeds[static_cast<size_t>(i)]);
  return out;
}

namespace {

std::vector<std::size_t> unravel(const GridSpec& g, std::size_t flat) {
  std::vector<std::size_t> idx(g.axes());
  for (std::size_t a = g.axes(); a-- > 0;) {
    const std::size_t n = g.axis(a).size();
    idx[a] = flat % n;
    flat /= n;
  }
  return idx;
}

}  // namespace

double sheet_covariance(const GridSpec& grid, const HurstParams& params, std::size_t i, std::size_t j) {
  const auto a = unravel(grid, i);
  const auto b = unravel(grid, j);
  double c = covariance_R(params.h0(), grid.time_points[a[0]], grid.time_points[b[0]]);
  for (std::size_t k = 1; k < grid.axes(); ++k)
    c *= covariance_R(params.h(static_cast<int>(k) - 1), grid.axis(k)[a[k]], grid.axis(k)[b[k]]);
  return c;
}

CovarianceReport covariance_validate(const std::vector<FieldGrid>& samples, const HurstParams& params) {
  if (samples.size() < 100) throw Error(ErrorCode::PreconditionViolation, "covariance validation needs >= 100 samples");
  const GridSpec& g = samples.front().grid;
  for (const auto& s : samples) {
    if (s.grid.time_points != g.time_points || s.grid.space_points != g.space_points ||
        s.values.size() != g.total_points())
      throw Error(ErrorCode::GridMismatch, "samples live on different grids");
  }
  check_grid(g, params);
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < g.total_points(); ++i)
    if (sheet_covariance(g, params, i, i) > 0.0) live.push_back(i);

  CovarianceReport r;
  const double n = static_cast<double>(samples.size());
  for (std::size_t a = 0; a < live.size(); ++a) {
    for (std::size_t b = a; b < live.size(); ++b) {
      const std::size_t i = live[a], j = live[b];
      double s = 0.0, ss = 0.0;
      for (const auto& f : samples) {
        const double v = f.values[i] * f.values[j];
        s += v;
        ss += v * v;
      }
      const double mean = s / n;
      const double var = std::max(0.0, (ss - n * mean * mean) / (n - 1.0));
      const double se = std::sqrt(var / n);
      if (!(se > 0.0)) continue;
      const double z = (mean - sheet_covariance(g, params, i, j)) / se;
      ++r.pairs;
      if (std::abs(z) <= 3.0) ++r.within;
      r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
    }
  }
  r.fraction = r.pairs > 0 ? static_cast<double>(r.within) / static_cast<double>(r.pairs) : 0.0;
  r.pass = r.pairs > 0 && r.fraction >= 0.99;
  return r;
}

}  // namespace pam
