#pragma once

// The law of X_1 and its torus increment. With an alpha present the walk is
// the arithmetic one, {S_k alpha}; the continuous uniform step is the iid
// anchor whose torus increment is exactly uniform.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modwalk/diophantine.hpp"
#include "modwalk/parallel.hpp"
#include "modwalk/rng.hpp"

namespace modwalk {

struct StepAtom {
  std::int64_t value = 0;
  double prob = 0.0;
};

class StepDistribution {
 public:
  enum class Kind { lattice, heavy_tail_lattice, continuous_uniform };

  /// Integer atoms with probabilities summing to 1 within 1e-12. Needs at
  /// least two distinct values with positive mass. Equal values are merged.
  static StepDistribution lattice(std::vector<StepAtom> atoms,
                                  IrrationalAlpha alpha);
  /// P(X = n) proportional to |n|^-(beta+1) for 1 <= |n| <= cutoff.
  static StepDistribution heavy_tail(double beta, std::int64_t cutoff,
                                     IrrationalAlpha alpha);
  static StepDistribution continuous_uniform();
  /// X = value surely. Degenerate (|phi_h| = 1), so outside the limit
  /// theorems, but the walk is the Weyl sequence {k value alpha}.
  static StepDistribution dirac(std::int64_t value, IrrationalAlpha alpha);

  /// The simple +-1 walk with the golden-ratio rotation.
  static StepDistribution pm_one_golden();

  Kind kind() const noexcept { return kind_; }
  bool is_lattice() const noexcept { return kind_ != Kind::continuous_uniform; }
  bool is_symmetric() const noexcept { return symmetric_; }
  bool is_degenerate() const noexcept { return atoms_.size() == 1; }
  /// Sorted by value.
  std::span<const StepAtom> atoms() const noexcept { return atoms_; }
  /// Null for the continuous uniform step.
  const IrrationalAlpha* alpha() const noexcept { return alpha_.get(); }
  std::shared_ptr<const IrrationalAlpha> alpha_ptr() const noexcept {
    return alpha_;
  }
  double beta() const noexcept { return beta_; }
  std::int64_t cutoff() const noexcept { return cutoff_; }

  /// Index of a sampled atom (lattice kinds), by inverse CDF.
  std::size_t sample_atom(Rng& rng) const noexcept;
  /// {X alpha} (lattice) or a uniform draw (continuous), in [0,1).
  double sample_step(Rng& rng) const noexcept;
  /// {value_i alpha} as a double-double.
  std::pair<double, double> atom_increment(std::size_t i) const noexcept {
    return {inc_hi_[i], inc_lo_[i]};
  }

  /// E {X alpha}; 1/2 for the uniform step.
  double mean_increment() const noexcept;
  /// P(|X| > t) from the pmf.
  double tail_probability(double t) const noexcept;

  std::string id() const;

 private:
  StepDistribution() = default;
  void finish();

  Kind kind_ = Kind::continuous_uniform;
  std::vector<StepAtom> atoms_;
  std::vector<double> cdf_;
  std::vector<double> inc_hi_, inc_lo_;
  std::shared_ptr<const IrrationalAlpha> alpha_;
  double beta_ = 0.0;
  std::int64_t cutoff_ = 0;
  bool symmetric_ = false;
};

/// phi_h = E exp(2 pi i h * increment), with 1 - phi_h carried separately
/// so that small denominators keep their relative accuracy.
struct CharacteristicValue {
  std::int64_t h = 0;
  std::complex<double> phi{1.0, 0.0};
  std::complex<double> one_minus_phi{0.0, 0.0};
  /// 1 - |phi_h|; strictly positive for h != 0 and irrational alpha.
  double eps = 0.0;
};

CharacteristicValue char_coeff(const StepDistribution& dist, std::int64_t h);

/// char_coeff for h = 1..H (index h-1).
std::vector<CharacteristicValue> char_table(const StepDistribution& dist,
                                            std::int64_t H,
                                            Exec exec = Exec::parallel);

}  // namespace modwalk
