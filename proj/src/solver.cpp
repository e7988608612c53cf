#include "pam/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>

#include "pam/errors.hpp"
#include "pam/fft.hpp"
#include "pam/kernels.hpp"

namespace pam {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kOverflow = 1e150;
constexpr std::size_t kChunk = 16;

bool power_of_two(int m) { return m >= 4 && (m & (m - 1)) == 0; }

// Spectral mass c_H |xi|^{1-2H} of each frequency cell of width 2 pi / L.
std::vector<double> cell_masses(double period, double h, int half) {
  const double e = 1.0 - 2.0 * h;
  const double c = spectral_constant(h);
  const double w = kPi / period;
  auto prim = [e](double x) { return std::copysign(std::pow(std::abs(x), e + 1.0), x) / (e + 1.0); };
  std::vector<double> m(static_cast<size_t>(half) + 1);
  for (int k = 0; k <= half; ++k) {
    const double centre = 2.0 * kPi * k / period;
    m[static_cast<size_t>(k)] = c * (prim(centre + w) - prim(centre - w));
  }
  return m;
}

struct Level {
  int grid;
  int ratio;  // fine steps per step of this level
  int steps;
  double dt;
  std::vector<int> record;  // step indices (1-based) that close a slice
  std::vector<double> decay;
  std::unique_ptr<Fft> fft;
  std::vector<double> u;
  std::vector<double> acc_a, acc_b;
  std::vector<std::complex<double>> work, noise;
};

struct Plan {
  std::vector<SchemeSpec> specs;
  int fine_grid = 0;
  int fine_steps = 0;
  double fine_dt = 0.0;
  std::vector<double> mass;
};

Plan make_plan(const std::vector<SchemeSpec>& levels) {
  Plan p;
  p.specs = levels;
  const SchemeSpec& f = levels.back();
  p.fine_grid = f.grid;
  p.fine_steps = f.steps();
  p.fine_dt = f.dt;
  for (const auto& s : levels) {
    s.validate();
    const double r = s.dt / f.dt;
    if (std::abs(r - std::round(r)) > 1e-9 * r || s.grid > f.grid)
      throw Error(ErrorCode::InvalidSpec, "levels must refine dt by integer factors with the finest grid last");
    if (s.period != f.period || s.horizon != f.horizon || s.h != f.h || s.amplitude != f.amplitude ||
        s.paths != f.paths || s.seed != f.seed)
      throw Error(ErrorCode::InvalidSpec, "levels must share period, horizon, h, amplitude, paths and seed");
  }
  p.mass = cell_masses(f.period, f.h, f.grid / 2);
  return p;
}

std::vector<Level> make_levels(const Plan& plan) {
  std::vector<Level> out;
  for (const auto& s : plan.specs) {
    Level l;
    l.grid = s.grid;
    l.steps = s.steps();
    l.ratio = plan.fine_steps / l.steps;
    l.dt = s.dt;
    for (int j = 1; j <= s.slices; ++j)
      l.record.push_back(static_cast<int>(std::lround(static_cast<double>(j) * l.steps / s.slices)));
    l.decay.resize(static_cast<size_t>(l.grid));
    for (int k = 0; k < l.grid; ++k) {
      const int kk = k <= l.grid / 2 ? k : k - l.grid;
      const double xi = 2.0 * kPi * kk / s.period;
      l.decay[static_cast<size_t>(k)] = std::exp(-0.5 * xi * xi * l.dt) / l.grid;
    }
    l.fft = std::make_unique<Fft>(static_cast<size_t>(l.grid));
    l.u.resize(static_cast<size_t>(l.grid));
    l.acc_a.resize(static_cast<size_t>(l.grid / 2 + 1));
    l.acc_b.resize(static_cast<size_t>(l.grid / 2 + 1));
    l.work.resize(static_cast<size_t>(l.grid));
    l.noise.resize(static_cast<size_t>(l.grid));
    out.push_back(std::move(l));
  }
  return out;
}

// One exponential Euler step u <- exp(dt/2 Lap) [u (1 + dW)] from the accumulated Gaussians.
void advance(Level& l, const std::vector<double>& mass, double fine_dt, double amplitude) {
  const auto m = static_cast<size_t>(l.grid);
  const size_t half = m / 2;
  std::fill(l.noise.begin(), l.noise.end(), std::complex<double>{});
  l.noise[0] = amplitude * std::sqrt(mass[0] * fine_dt) * l.acc_a[0];
  for (size_t k = 1; k < half; ++k) {
    const double s = amplitude * std::sqrt(0.5 * mass[k] * fine_dt);
    l.noise[k] = s * std::complex<double>(l.acc_a[k], -l.acc_b[k]);
    l.noise[m - k] = std::conj(l.noise[k]);
  }
  l.noise[half] = amplitude * std::sqrt(mass[half] * fine_dt) * l.acc_a[half];
  l.fft->backward(l.noise);
  for (size_t j = 0; j < m; ++j) l.work[j] = l.u[j] * (1.0 + l.noise[j].real());
  l.fft->forward(l.work);
  for (size_t k = 0; k < m; ++k) l.work[k] *= l.decay[k];
  l.fft->backward(l.work);
  for (size_t j = 0; j < m; ++j) l.u[j] = l.work[j].real();
  std::fill(l.acc_a.begin(), l.acc_a.end(), 0.0);
  std::fill(l.acc_b.begin(), l.acc_b.end(), 0.0);
}

struct PathRecord {
  // Per level: spatial means of u and u^2 at each recorded slice.
  std::vector<std::vector<double>> mean, square;
  std::vector<double> final_square;  // per grid point of level 0
};

bool run_path(const Plan& plan, std::vector<Level>& levels, std::mt19937_64& rng, PathRecord& rec) {
  std::normal_distribution<double> normal;
  const double amp = plan.specs.back().amplitude;
  rec.mean.assign(levels.size(), {});
  rec.square.assign(levels.size(), {});
  for (auto& l : levels) {
    std::fill(l.u.begin(), l.u.end(), 1.0);
    std::fill(l.acc_a.begin(), l.acc_a.end(), 0.0);
    std::fill(l.acc_b.begin(), l.acc_b.end(), 0.0);
  }
  const size_t half = static_cast<size_t>(plan.fine_grid / 2);
  std::vector<double> a(half + 1), b(half + 1);
  for (int step = 1; step <= plan.fine_steps; ++step) {
    for (size_t k = 0; k <= half; ++k) {
      a[k] = normal(rng);
      b[k] = normal(rng);
    }
    for (size_t li = 0; li < levels.size(); ++li) {
      Level& l = levels[li];
      const size_t lh = static_cast<size_t>(l.grid / 2);
      for (size_t k = 0; k <= lh; ++k) {
        l.acc_a[k] += a[k];
        l.acc_b[k] += b[k];
      }
      if (step % l.ratio != 0) continue;
      advance(l, plan.mass, plan.fine_dt, amp);
      const int ls = step / l.ratio;
      if (std::find(l.record.begin(), l.record.end(), ls) == l.record.end()) continue;
      double s1 = 0.0, s2 = 0.0;
      for (double v : l.u) {
        if (!std::isfinite(v) || std::abs(v) > kOverflow) return false;
        s1 += v;
        s2 += v * v;
      }
      rec.mean[li].push_back(s1 / l.grid);
      rec.square[li].push_back(s2 / l.grid);
    }
  }
  rec.final_square.resize(levels[0].u.size());
  for (size_t j = 0; j < levels[0].u.size(); ++j) rec.final_square[j] = levels[0].u[j] * levels[0].u[j];
  return true;
}

// Runs `paths` coupled paths in fixed chunks and hands each record to `sink`
// in path order, so the reduction is independent of the thread schedule.
template <class Sink>
void run_paths(const Plan& plan, Sink&& sink) {
  const SchemeSpec& f = plan.specs.back();
  const std::size_t chunks = (f.paths + kChunk - 1) / kChunk;
  std::vector<std::vector<PathRecord>> out(chunks);
  std::atomic<bool> unstable{false};
  const auto nc = static_cast<long>(chunks);
#pragma omp parallel for schedule(dynamic, 1) if (f.parallel)
  for (long c = 0; c < nc; ++c) {
    if (unstable.load()) continue;
    auto levels = make_levels(plan);
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(f.paths, begin + kChunk);
    auto& recs = out[static_cast<size_t>(c)];
    recs.resize(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = substream(f.seed, i);
      if (!run_path(plan, levels, rng, recs[i - begin])) {
        unstable.store(true);
        break;
      }
    }
  }
  if (unstable.load()) throw Error(ErrorCode::Unstable, "path values exceeded the overflow guard");
  for (auto& chunk : out)
    for (auto& r : chunk) sink(r);
}

double se_of(double sum, double sumsq, double n) {
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) / n);
}

}  // namespace

int SchemeSpec::steps() const { return static_cast<int>(std::lround(horizon / dt)); }

void SchemeSpec::validate() const {
  if (!(period > 0.0 && std::isfinite(period))) throw Error(ErrorCode::InvalidSpec, "period must be positive");
  if (!power_of_two(grid)) throw Error(ErrorCode::InvalidSpec, "grid size must be a power of two >= 4");
  if (!(horizon > 0.0 && dt > 0.0)) throw Error(ErrorCode::InvalidSpec, "horizon and dt must be positive");
  if (!(h > 0.5 && h < 1.0)) throw Error(ErrorCode::InvalidSpec, "solver needs a spatial exponent in (1/2, 1)");
  if (period < 8.0 * std::sqrt(horizon)) throw Error(ErrorCode::InvalidSpec, "period must be at least 8 sqrt(t)");
  const double dx = period / grid;
  if (dt > 0.5 * dx * dx * (1.0 + 1e-12)) throw Error(ErrorCode::InvalidSpec, "dt exceeds (L/M)^2 / 2");
  const int n = steps();
  if (n < 1 || std::abs(n * dt - horizon) > 1e-9 * horizon)
    throw Error(ErrorCode::InvalidSpec, "horizon must be an integer number of steps");
  if (paths < 2) throw Error(ErrorCode::InvalidSpec, "need at least 2 paths");
  if (slices < 1 || slices > n) throw Error(ErrorCode::InvalidSpec, "slices must lie in [1, steps]");
  if (!(amplitude >= 0.0 && std::isfinite(amplitude))) throw Error(ErrorCode::InvalidSpec, "bad noise amplitude");
}

PathStats simulate_paths(const SchemeSpec& spec) {
  const Plan plan = make_plan({spec});
  const auto slices = static_cast<size_t>(spec.slices);
  const auto m = static_cast<size_t>(spec.grid);
  std::vector<double> s1(slices), q1(slices), s2(slices), q2(slices), p1(m), p2(m);
  run_paths(plan, [&](const PathRecord& r) {
    for (size_t j = 0; j < slices; ++j) {
      s1[j] += r.mean[0][j];
      q1[j] += r.mean[0][j] * r.mean[0][j];
      s2[j] += r.square[0][j];
      q2[j] += r.square[0][j] * r.square[0][j];
    }
    for (size_t j = 0; j < m; ++j) {
      p1[j] += r.final_square[j];
      p2[j] += r.final_square[j] * r.final_square[j];
    }
  });
  const auto n = static_cast<double>(spec.paths);
  PathStats st;
  const int steps = spec.steps();
  for (size_t j = 0; j < slices; ++j) {
    SliceStats s;
    s.t = spec.dt * std::lround(static_cast<double>(j + 1) * steps / spec.slices);
    s.mean = s1[j] / n;
    s.mean_se = se_of(s1[j], q1[j], n);
    s.second_moment = s2[j] / n;
    s.second_moment_se = se_of(s2[j], q2[j], n);
    s.paths = spec.paths;
    st.slices.push_back(s);
  }
  for (size_t j = 0; j < m; ++j) {
    st.point_second_moment.push_back(p1[j] / n);
    st.point_second_moment_se.push_back(se_of(p1[j], p2[j], n));
  }
  return st;
}

void write_slices_csv(std::ostream& os, const PathStats& s) {
  os << "t,mean,mean_se,second_moment,second_moment_se,paths\n" << std::scientific << std::setprecision(16);
  for (const auto& r : s.slices)
    os << r.t << ',' << r.mean << ',' << r.mean_se << ',' << r.second_moment << ',' << r.second_moment_se << ','
       << r.paths << '\n';
}

ConvergenceReport convergence_study(const std::vector<SchemeSpec>& levels) {
  if (levels.size() < 3) throw Error(ErrorCode::PreconditionViolation, "convergence study needs >= 3 levels");
  for (size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].dt < levels[i - 1].dt)) throw Error(ErrorCode::InvalidSpec, "levels must refine dt");
  const Plan plan = make_plan(levels);
  const size_t nl = levels.size();
  std::vector<double> sum(nl, 0.0), cross(nl * nl, 0.0);
  run_paths(plan, [&](const PathRecord& r) {
    for (size_t i = 0; i < nl; ++i) {
      sum[i] += r.square[i].back();
      for (size_t j = 0; j < nl; ++j) cross[i * nl + j] += r.square[i].back() * r.square[j].back();
    }
  });
  const auto n = static_cast<double>(levels.front().paths);
  auto combo_se = [&](const std::vector<double>& w) {
    double var = 0.0;
    for (size_t i = 0; i < nl; ++i)
      for (size_t j = 0; j < nl; ++j) {
        const double cov = (cross[i * nl + j] - sum[i] * sum[j] / n) / (n - 1.0);
        var += w[i] * w[j] * cov;
      }
    return std::sqrt(std::max(0.0, var) / n);
  };

  ConvergenceReport rep;
  for (size_t i = 0; i < nl; ++i) {
    rep.dt.push_back(levels[i].dt);
    rep.grid.push_back(levels[i].grid);
    rep.second_moment.push_back(sum[i] / n);
    std::vector<double> w(nl, 0.0);
    w[i] = 1.0;
    rep.second_moment_se.push_back(combo_se(w));
  }
  const size_t f = nl - 1, m = nl - 2, c = nl - 3;
  const double g1 = rep.second_moment[m] - rep.second_moment[c];
  const double g2 = rep.second_moment[f] - rep.second_moment[m];
  const double r1 = levels[c].dt / levels[m].dt, r2 = levels[m].dt / levels[f].dt;
  rep.extrapolated = rep.second_moment[f];
  rep.extrapolated_se = rep.second_moment_se[f];
  if (std::abs(r1 - r2) > 1e-9 * r2) {
    rep.note = "dt ratio not constant; no extrapolation";
    return rep;
  }
  const double q = g1 / g2;
  if (!(q > 1.0) || !std::isfinite(q)) {
    rep.note = "gaps not geometric; no extrapolation";
    return rep;
  }
  rep.observed_order = std::log(q) / std::log(r2);
  rep.extrapolated = rep.second_moment[f] + g2 / (q - 1.0);
  std::vector<double> w(nl, 0.0);
  w[f] = 1.0 + 1.0 / (q - 1.0);
  w[m] = -1.0 / (q - 1.0);
  rep.extrapolated_se = combo_se(w);
  rep.extrapolation_valid = true;
  return rep;
}

}  // namespace pam
