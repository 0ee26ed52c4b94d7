#pragma once

// Exact laws of S_k for lattice steps and the quantities read off them:
// psi(k), E f(S_k), and the spectral window variance.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "modwalk/bv_function.hpp"
#include "modwalk/parallel.hpp"
#include "modwalk/step_model.hpp"

namespace modwalk {

/// Dense integer pmf on min_value .. min_value + pmf.size() - 1.
struct IntegerLaw {
  std::int64_t min_value = 0;
  std::vector<double> pmf;
  double mass_deficit = 0.0;

  std::int64_t max_value() const noexcept {
    return min_value + static_cast<std::int64_t>(pmf.size()) - 1;
  }
  double at(std::int64_t n) const noexcept {
    if (n < min_value || n > max_value()) return 0.0;
    return pmf[static_cast<std::size_t>(n - min_value)];
  }
};

inline constexpr double kDefaultMassTol = 1e-12;
inline constexpr std::size_t kDefaultSupportBudget = std::size_t{1} << 24;

/// One convolution with the step pmf. Atoms are then trimmed from both
/// ends while the cumulative dropped mass stays within `drop_allowance`.
IntegerLaw convolve_step(const IntegerLaw& law, const StepDistribution& dist,
                         double drop_allowance, Exec exec = Exec::parallel,
                         std::size_t support_budget = kDefaultSupportBudget);

/// Law of S_k; the total mass dropped over the k steps is at most mass_tol.
/// Throws Unsupported for the continuous step and ResourceLimit when the
/// support would exceed `support_budget` entries.
IntegerLaw integer_law_power(const StepDistribution& dist, std::int64_t k,
                             double mass_tol = kDefaultMassTol,
                             Exec exec = Exec::parallel,
                             std::size_t support_budget = kDefaultSupportBudget);

/// Calls visit(k, law of S_k) for k = 1..K with one convolution per step.
void for_each_power(const StepDistribution& dist, std::int64_t K,
                    double mass_tol,
                    const std::function<void(std::int64_t, const IntegerLaw&)>& visit,
                    Exec exec = Exec::parallel);

/// A finite atomic law on [0,1) with sorted, distinct positions. Laws built
/// from an IntegerLaw keep the integer n of each atom {n alpha} as its key.
class AtomicLaw {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  /// Positions must lie in [0,1); equal positions are merged and zero-mass
  /// atoms dropped. Probabilities plus `mass_deficit` must sum to 1 within
  /// 1e-12.
  static AtomicLaw from_points(std::vector<double> positions,
                               std::vector<double> probs,
                               double mass_deficit = 0.0);
  static AtomicLaw dirac(double x);
  static AtomicLaw from_integer_law(const IntegerLaw& law,
                                    const IrrationalAlpha& alpha);

  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> probs() const noexcept { return probs_; }
  /// F(a_i), cumulative through atom i.
  std::span<const double> cumulative() const noexcept { return cum_; }
  std::span<const std::int64_t> keys() const noexcept { return keys_; }
  double mass_deficit() const noexcept { return mass_deficit_; }

  /// P(X <= t).
  double cdf(double t) const noexcept;
  /// P(X < t).
  double cdf_left(double t) const noexcept;
  /// Index of the atom at exactly x, or npos.
  std::size_t index_of(double x) const noexcept;
  /// Index of the atom with integer key n, or npos.
  std::size_t index_of_key(std::int64_t n) const noexcept;

  /// sup_t |F(t) - t|, including the deficit at t = 1.
  double kolmogorov_distance() const noexcept;

  double expectation(const PeriodicBVFunction& f) const noexcept;

 private:
  AtomicLaw() = default;
  void finish();

  std::vector<double> positions_;
  std::vector<double> probs_;
  std::vector<double> cum_;
  std::vector<std::int64_t> keys_;
  std::vector<std::size_t> key_order_;  // indices sorted by key
  double mass_deficit_ = 0.0;
};

AtomicLaw pmf_power(const StepDistribution& dist, std::int64_t k,
                    double mass_tol = kDefaultMassTol,
                    Exec exec = Exec::parallel);

/// psi(k) with the rigorous interval value +- slack (slack = mass deficit).
struct PsiValue {
  double value = 0.0;
  double slack = 0.0;
};

PsiValue psi_exact(const StepDistribution& dist, std::int64_t k,
                   double mass_tol = kDefaultMassTol);

/// E f(S_k); 0 for the continuous step.
double expected_f(const StepDistribution& dist, const PeriodicBVFunction& f,
                  std::int64_t k, double mass_tol = kDefaultMassTol);

struct WindowVariance {
  double value = 0.0;
  /// Estimated contribution of frequencies |h| > H.
  double tail_estimate = 0.0;
  std::int64_t H = 0;
  /// Frequencies in 1..2H with 1 - |phi_h| < 1e-12.
  std::vector<std::int64_t> ill_conditioned;
};

inline constexpr std::int64_t kWindowVarianceMaxH = 4096;

/// E(sum_{k=M+1}^{M+N} f(S_k))^2 from the Fourier expansion of f cut at
/// |h|, |h'| <= H, summing the geometric series in k and l in closed form.
/// H = 0 picks the smallest power of two >= 64 whose tail estimate is below
/// 1e-8, capped at kWindowVarianceMaxH; trig polynomials use their degree.
WindowVariance window_variance_spectral(const StepDistribution& dist,
                                        const PeriodicBVFunction& f,
                                        std::int64_t M, std::int64_t N,
                                        std::int64_t H = 0,
                                        Exec exec = Exec::parallel);

/// Least-squares fit of log psi(k) = a + slope log k.
struct DecayEstimate {
  std::vector<std::int64_t> ks;
  std::vector<double> psi_values;
  double slope = 0.0;
  double intercept = 0.0;
  /// psi(k) ~ C k^-(1 + delta_hat), i.e. delta_hat = -slope - 1.
  double delta_hat = 0.0;
  /// Every psi value was exactly zero (continuous step); no slope.
  bool exact_zero = false;
};

/// Throws InvalidInput on size mismatch or fewer than two points, and
/// Unsupported when only some values are zero.
DecayEstimate fit_decay(std::vector<std::int64_t> ks,
                        std::vector<double> psi_values);

DecayEstimate psi_decay(const StepDistribution& dist,
                        std::span<const std::int64_t> ks,
                        double mass_tol = kDefaultMassTol);

}  // namespace modwalk
