#pragma once

// Couplings with the uniform law: the Koksma-type bound, the construction
// U = xi F(X) + (1 - xi) F^-(X), quantile-based Wasserstein distances, and
// the block coupling that makes separated blocks of the walk independent.

#include <cstdint>
#include <optional>
#include <vector>

#include "modwalk/bv_function.hpp"
#include "modwalk/exact_law.hpp"
#include "modwalk/step_model.hpp"

namespace modwalk {

/// A law on [0,1): the uniform law or an atomic one.
class QuantileView {
 public:
  static QuantileView uniform() { return QuantileView(); }
  explicit QuantileView(AtomicLaw law) : law_(std::move(law)) {}

  bool is_uniform() const noexcept { return !law_.has_value(); }
  /// Null for the uniform law.
  const AtomicLaw* atomic() const noexcept {
    return law_ ? &*law_ : nullptr;
  }

  double cdf(double t) const noexcept;
  double cdf_left(double t) const noexcept;
  /// F^{-1}(x) = inf{t : F(t) >= x}, x in (0,1].
  double quantile(double x) const noexcept;
  /// sup_t |F(t) - t|.
  double kolmogorov_distance() const noexcept;

 private:
  QuantileView() = default;
  std::optional<AtomicLaw> law_;
};

struct KoksmaGap {
  double lhs = 0.0;  ///< |E f(X) - E f(U)| = |E f(X)|
  double rhs = 0.0;  ///< V(f) * d_Kol(X, U)
};

KoksmaGap koksma_gap(const PeriodicBVFunction& f, const QuantileView& law);

/// U = xi F(x) + (1 - xi) F^-(x) for x an atom of the law (any x for the
/// uniform law, which returns x). Throws InvalidInput otherwise.
double couple_to_uniform(const QuantileView& law, double xi, double x);

/// ||F^{-1} - G^{-1}||_p over (0,1), p >= 1 or +infinity. Exact piecewise
/// integration for atomic and uniform laws.
double wasserstein_p(const QuantileView& a, const QuantileView& b, double p);

/// Consecutive blocks H_1, J_1, H_2, J_2, ... after an offset M; the J_i
/// are the gaps whose sums are coupled away.
struct BlockScheme {
  std::int64_t M = 0;
  std::vector<std::int64_t> H;
  std::vector<std::int64_t> J;

  /// |H_i| = ceil(i^c), |J_i| = ceil(i^c'), c = 1 - delta/2,
  /// c' = (c + delta/2)/(1 + delta), for 0 < delta < 1.
  static BlockScheme power_law(double delta, std::int64_t blocks,
                               std::int64_t M = 0);
  static BlockScheme constant(std::int64_t block, std::int64_t gap,
                              std::int64_t blocks, std::int64_t M = 0);

  std::int64_t total_length() const noexcept;
  /// Throws InvalidInput unless H and J have equal, nonzero length and
  /// every size is >= 1.
  void validate() const;
};

struct BlockCouplingOptions {
  /// When set, block_sums[n] = sum over block n of f at the shifted points.
  const PeriodicBVFunction* f = nullptr;
  /// Keep every shifted block (memory heavy for long schemes).
  bool keep_blocks = false;
};

struct BlockCouplingResult {
  /// delta_n for the gap J_n, n = 1..R (index n-1).
  std::vector<double> deltas;
  /// psi(|J_n|) of the exact gap law.
  std::vector<double> psi_bounds;
  std::int64_t violations = 0;  ///< count of |delta_n| > psi(|J_n|)
  /// First shifted component {S_i - delta_{n-1}} of each block H_n; block
  /// 1 is unshifted.
  std::vector<double> first_components;
  std::vector<double> block_sums;
  std::vector<std::vector<double>> blocks;
  std::int64_t n_total = 0;
};

/// Runs the walk through the scheme with one path, coupling each gap sum
/// {sum_{k in J_n} X_k} to a uniform through its exact law (mass_tol = 0)
/// and an auxiliary xi_n. Unsupported for steps without an exact law.
BlockCouplingResult block_couple(const StepDistribution& dist,
                                 const BlockScheme& scheme, std::uint64_t seed,
                                 const BlockCouplingOptions& opts = {});

}  // namespace modwalk
