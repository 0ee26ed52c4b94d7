#include "modwalk/walk_sim.hpp"

#include <cmath>
#include <numeric>
#include <tuple>

#include "modwalk/dd.hpp"
#include "modwalk/error.hpp"
#include "modwalk/rng.hpp"

namespace modwalk {

namespace {

// Bring hi + lo back into [0,1) and renormalize.
inline void wrap(double& hi, double& lo) noexcept {
  double t = 0.0;
  if (hi >= 1.0) {
    hi -= 1.0;  // exact for hi in [1, 2)
  } else if (hi < 0.0 || (hi == 0.0 && lo < 0.0)) {
    dd::two_sum(hi, 1.0, hi, t);
    lo += t;
  }
  dd::fast_two_sum(hi, lo, hi, lo);
}

void fill_compensated(const StepDistribution& dist, Rng& rng,
                      std::span<double> out) {
  double hi = 0.0, lo = 0.0, s = 0.0, e = 0.0;
  const bool uniform = !dist.is_lattice();
  for (double& point : out) {
    double ihi, ilo;
    if (uniform) {
      ihi = rng.uniform01();
      ilo = 0.0;
    } else {
      std::tie(ihi, ilo) = dist.atom_increment(dist.sample_atom(rng));
    }
    dd::two_sum(hi, ihi, s, e);
    e += lo + ilo;
    dd::fast_two_sum(s, e, hi, lo);
    wrap(hi, lo);
    if (hi >= 1.0) wrap(hi, lo);
    point = (hi >= 1.0) ? dd::kBelowOne : (hi < 0.0 ? 0.0 : hi);
  }
}

void fill_exact(const StepDistribution& dist, Rng& rng, std::span<double> out) {
  if (!dist.is_lattice()) {
    throw Unsupported("exact path mode needs a lattice step");
  }
  const IrrationalAlpha& alpha = *dist.alpha();
  const auto atoms = dist.atoms();
  std::int64_t S = 0;
  for (double& point : out) {
    const std::int64_t x = atoms[dist.sample_atom(rng)].value;
    if (__builtin_add_overflow(S, x, &S)) {
      throw ResourceLimit("S_k overflowed 64 bits in exact path mode");
    }
    point = alpha.frac_multiple(S);
  }
}

}  // namespace

void fill_path(const StepDistribution& dist, std::uint64_t seed,
               std::span<double> out, PathMode mode) {
  Rng rng(seed);
  if (mode == PathMode::exact) {
    fill_exact(dist, rng, out);
  } else {
    fill_compensated(dist, rng, out);
  }
}

WalkPath simulate_path(const StepDistribution& dist, std::int64_t N,
                       std::uint64_t seed, PathMode mode) {
  if (N < 1) throw InvalidInput("simulate_path: N must be >= 1");
  WalkPath path;
  path.seed = seed;
  path.dist_id = dist.id();
  path.points.resize(static_cast<std::size_t>(N));
  fill_path(dist, seed, path.points, mode);
  return path;
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t j) noexcept {
  return derive_seed(master, j, stream::kReplicate);
}

std::vector<std::vector<double>> replicate_statistics(
    const StepDistribution& dist, std::int64_t N, std::int64_t M,
    std::uint64_t master_seed, const PathStatistic& stat, Exec exec,
    PathMode mode) {
  if (N < 1 || M < 1) {
    throw InvalidInput("replicate_statistics: need N >= 1 and M >= 1");
  }
  if (mode == PathMode::exact && !dist.is_lattice()) {
    throw Unsupported("exact path mode needs a lattice step");
  }
  std::vector<std::vector<double>> out(static_cast<std::size_t>(M));
  auto one = [&](std::int64_t j, std::vector<double>& buf) {
    fill_path(dist, replicate_seed(master_seed, static_cast<std::uint64_t>(j)),
              buf, mode);
    out[static_cast<std::size_t>(j)] = stat(buf);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::vector<double> buf(static_cast<std::size_t>(N));
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t j = 0; j < M; ++j) one(j, buf);
    }
  } else {
    std::vector<double> buf(static_cast<std::size_t>(N));
    for (std::int64_t j = 0; j < M; ++j) one(j, buf);
  }
  return out;
}

std::vector<double> simulate_functional_sums(
    const StepDistribution& dist, const PeriodicBVFunction& f, std::int64_t N,
    std::int64_t M, std::uint64_t master_seed, Exec exec, PathMode mode) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  const auto stats = replicate_statistics(
      dist, N, M, master_seed,
      [&](std::span<const double> pts) {
        double s = 0.0;
        for (double x : pts) s += f.evaluate(x);
        return std::vector<double>{s * scale};
      },
      exec, mode);
  std::vector<double> out;
  out.reserve(stats.size());
  for (const auto& v : stats) out.push_back(v[0]);
  return out;
}

}  // namespace modwalk
