#pragma once

// Torus walk paths {S_k} and replicated functional sums.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "modwalk/bv_function.hpp"
#include "modwalk/parallel.hpp"
#include "modwalk/step_model.hpp"

namespace modwalk {

enum class PathMode {
  /// Double-double position updated by the sampled increment.
  compensated,
  /// Integer S_k (overflow-checked) reduced as {S_k alpha} every step.
  /// Lattice steps only.
  exact,
};

struct WalkPath {
  std::vector<double> points;  ///< {S_k}, k = 1..N
  std::uint64_t seed = 0;
  std::string dist_id;
};

/// Throws InvalidInput for N < 1, Unsupported for exact mode on the
/// continuous step, ResourceLimit when S_k would overflow 64 bits.
WalkPath simulate_path(const StepDistribution& dist, std::int64_t N,
                       std::uint64_t seed,
                       PathMode mode = PathMode::compensated);

/// Writes {S_k} for k = 1..out.size() into `out` without allocating.
void fill_path(const StepDistribution& dist, std::uint64_t seed,
               std::span<double> out, PathMode mode = PathMode::compensated);

/// Seed of replicate j under `master`.
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t j) noexcept;

/// N^{-1/2} sum_{k=1}^N f(S_k) for replicates j = 0..M-1.
std::vector<double> simulate_functional_sums(
    const StepDistribution& dist, const PeriodicBVFunction& f, std::int64_t N,
    std::int64_t M, std::uint64_t master_seed, Exec exec = Exec::parallel,
    PathMode mode = PathMode::compensated);

/// Runs `stat` on the path of each replicate j = 0..M-1 and returns the
/// results in replicate order. `stat` must be safe to call concurrently.
using PathStatistic = std::function<std::vector<double>(std::span<const double>)>;
std::vector<std::vector<double>> replicate_statistics(
    const StepDistribution& dist, std::int64_t N, std::int64_t M,
    std::uint64_t master_seed, const PathStatistic& stat,
    Exec exec = Exec::parallel, PathMode mode = PathMode::compensated);

}  // namespace modwalk
