#pragma once

// Statistical verification experiments. Each run_* reads what it needs
// from an ExperimentConfig and returns pass/fail reports plus the raw
// series behind them.

#include <cstdint>
#include <vector>

#include "modwalk/config.hpp"
#include "modwalk/coupling.hpp"
#include "modwalk/covariance.hpp"
#include "modwalk/exact_law.hpp"
#include "modwalk/gaussian_limit.hpp"
#include "modwalk/report.hpp"
#include "modwalk/rng.hpp"

namespace modwalk {

struct CltOutcome {
  std::vector<TestReport> reports;
  CovarianceResult cov;
  double sigma = 0.0;
  std::vector<double> sums;  ///< N^{-1/2} sum f(S_k), one per replicate
};

/// KS of the replicate sums against N(0, sigma^2); for sigma = 0 checks
/// that every sum vanishes. Keys: n, m, seed, f, tol, ks_level,
/// ks_threshold (overrides the critical value).
CltOutcome run_clt(const ExperimentConfig& cfg);

struct FunctionalSample {
  std::string name;  ///< sup, l1, l2, linf
  std::vector<double> walk;
  std::vector<double> limit;
};

struct FcltOutcome {
  std::vector<TestReport> reports;
  std::vector<FunctionalSample> samples;
};

/// sqrt(N) D_N and sqrt(N) D_N^(p) over m walks against the matching
/// functionals of m Gaussian grid paths. Keys: n, m, seed, grid, tol,
/// ks_level, ks_widen (1.5), ks_threshold, functional (comma list),
/// walk_functionals (grid: walk on the same grid, the default; exact).
FcltOutcome run_fclt(const ExperimentConfig& cfg);

struct LilOutcome {
  std::vector<TestReport> reports;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> f_stat;  ///< |sum f| / sqrt(2 N log log N)
  std::vector<double> d_stat;  ///< N D_N / sqrt(2 N log log N)
  double sigma = 0.0;
  double rkhs_extreme = 0.0;
};

/// One path to 2^j_max with checkpoints 2^j_min..2^j_max. Keys: j_min,
/// j_max, seed, f, grid, tol, band_lo, band_hi (times sigma), d_band_lo,
/// d_band_hi (times the RKHS constant).
LilOutcome run_lil(const ExperimentConfig& cfg);

struct PsiOutcome {
  std::vector<TestReport> reports;
  std::vector<PsiValue> values;
  DecayEstimate fit;
};

/// psi at k = 2^4..2^10 (or k_list) and the log-log slope. Keys: k_list,
/// mass_tol, slope_lo, slope_hi.
PsiOutcome run_psi_decay(const ExperimentConfig& cfg);

struct VarianceScanRow {
  std::int64_t n = 0;
  double per_step = 0.0;  ///< window variance / N
  double tail_estimate = 0.0;
  std::int64_t H = 0;
};

/// window_variance_spectral(0, N)/N for N in n_list (with h as the
/// cutoff, 0 = automatic).
std::vector<VarianceScanRow> run_variance_scan(const ExperimentConfig& cfg);

/// Quantile coupling on a random 5-atom law (or law_a): KS of U against
/// uniform and the pathwise bound |U - X| <= d_Kol. Keys: draws, seed,
/// law_a, ks_threshold.
std::vector<TestReport> run_coupling(const ExperimentConfig& cfg);

/// W_inf = d_Kol and W_1 <= W_2 <= W_inf on random atomic laws. Keys:
/// laws, max_atoms, seed.
std::vector<TestReport> run_duality(const ExperimentConfig& cfg);

/// |E f(X)| <= V(f) d_Kol on random (f, law) pairs. Keys: pairs, seed.
std::vector<TestReport> run_koksma(const ExperimentConfig& cfg);

struct BlockOutcome {
  std::vector<TestReport> reports;
  BlockCouplingResult result;
  double delta_fit = 0.0;   ///< delta_hat from the psi fit
  double delta_used = 0.0;  ///< after clamping into [0.1, 0.95]
};

/// Block coupling with power-law block sizes. Keys: blocks, delta
/// (overrides the fit), block/gap (constant sizes), seed, f,
/// ks_threshold, corr_threshold.
BlockOutcome run_block_coupling(const ExperimentConfig& cfg);

/// Random atomic law on [0,1) with 1..max_atoms atoms.
AtomicLaw random_atomic_law(Rng& rng, std::size_t max_atoms);
/// Random mean-zero step function or trig polynomial.
PeriodicBVFunction random_bv_function(Rng& rng);

}  // namespace modwalk
