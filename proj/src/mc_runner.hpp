#pragma once

#include <cmath>
#include <cstdint>
#include <omp.h>
#include <random>
#include <vector>

#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/rng.hpp"

namespace pam::detail {

inline constexpr int kMcChunks = 256;

struct ChunkSums {
  double sum = 0.0;
  double sumsq = 0.0;
  std::int64_t count = 0;
};

struct McRun {
  std::vector<ChunkSums> chunks;

  double mean() const;
  double std_error() const;
  std::int64_t count() const;
  /// Mean over the first `k` chunks.
  double prefix_mean(int k) const;
  /// Budget-doubling growth test over prefixes 1/8, 1/4, 1/2 and the full run.
  bool grows_under_doubling() const;
};

/// Runs policy.samples draws of `draw(rng)` split into fixed chunks with
/// substreams (seed, chunk). Chunk results are merged in index order.
template <class Draw>
McRun run_mc(const McPolicy& policy, Draw draw) {
  if (policy.samples < 1) throw Error(ErrorCode::PreconditionViolation, "Monte Carlo needs >= 1 sample");
  const int k = static_cast<int>(std::min<std::int64_t>(kMcChunks, policy.samples));
  McRun run;
  run.chunks.resize(static_cast<size_t>(k));
  const std::int64_t base = policy.samples / k;
  const std::int64_t extra = policy.samples % k;
  const int threads = policy.jobs > 0 ? policy.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) if (policy.parallel) num_threads(threads)
  for (int c = 0; c < k; ++c) {
    std::mt19937_64 rng = substream(policy.seed, static_cast<std::uint64_t>(c));
    Draw local = draw;  // distributions carry state; each chunk starts fresh
    const std::int64_t m = base + (c < extra ? 1 : 0);
    ChunkSums s;
    for (std::int64_t i = 0; i < m; ++i) {
      const double v = local(rng);
      s.sum += v;
      s.sumsq += v * v;
    }
    s.count = m;
    run.chunks[static_cast<size_t>(c)] = s;
  }
  return run;
}

}  // namespace pam::detail
