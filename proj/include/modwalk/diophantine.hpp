#pragma once

// Continued-fraction irrationals and Diophantine type estimation.
//
// An IrrationalAlpha keeps its value as an exact rational convergent
// p_N/q_N with q_N^2 >= 2^precision_bits, so |alpha - p_N/q_N| < 2^-bits.
// Distances ||q alpha|| are then exact modular integer arithmetic, and the
// hot paths use a double-double copy of the value.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace modwalk {

/// How a finite quotient list is continued.
enum class CfTail {
  none,      ///< no continuation; may yield an exact rational
  periodic,  ///< repeat the given quotients cyclically
  ones,      ///< append 1, 1, 1, ... after the given quotients
};

struct Convergent {
  mpz_class p;
  mpz_class q;
};

class IrrationalAlpha {
 public:
  static constexpr int kDefaultPrecisionBits = 256;

  /// alpha = [0; a_1, a_2, ...] in (0,1). Throws InvalidInput on an empty
  /// list or a zero quotient.
  static IrrationalAlpha from_cf(std::span<const std::uint64_t> quotients,
                                 int precision_bits = kDefaultPrecisionBits,
                                 CfTail tail = CfTail::periodic);
  static IrrationalAlpha golden(int precision_bits = kDefaultPrecisionBits);
  static IrrationalAlpha sqrt2_minus_1(
      int precision_bits = kDefaultPrecisionBits);

  /// Same number carried to at least `bits` of precision.
  IrrationalAlpha with_precision(int bits) const;

  int precision_bits() const noexcept { return precision_bits_; }
  CfTail tail() const noexcept { return tail_; }
  std::span<const std::uint64_t> base_quotients() const noexcept {
    return base_;
  }
  /// Materialized a_1..a_N.
  std::span<const std::uint64_t> quotients() const noexcept {
    return quotients_;
  }
  /// p_n/q_n for n = 1..N (index 0 holds n = 1).
  const std::vector<Convergent>& convergents() const noexcept {
    return convergents_;
  }
  /// True when the quotient list ran out (CfTail::none) before the
  /// requested precision; the value is then the exact rational p_N/q_N.
  bool is_exact_rational() const noexcept { return exact_rational_; }

  double value() const noexcept { return hi_; }
  std::pair<double, double> value_dd() const noexcept { return {hi_, lo_}; }
  /// Decimal expansion truncated to `digits` digits after the point.
  std::string decimal(int digits) const;
  const Convergent& best_convergent() const { return convergents_.back(); }

  /// {n alpha} in [0,1), accurate to about one ulp for |n| < 2^53.
  double frac_multiple(std::int64_t n) const noexcept;
  /// {n alpha} as an unevaluated sum hi + lo (hi in [0,1)).
  std::pair<double, double> frac_multiple_dd(std::int64_t n) const noexcept;

  std::string id() const;

 private:
  IrrationalAlpha() = default;
  void materialize(int bits);
  std::uint64_t quotient_at(std::size_t index) const;  // 0-based

  std::vector<std::uint64_t> base_;
  CfTail tail_ = CfTail::periodic;
  int precision_bits_ = 0;
  std::vector<std::uint64_t> quotients_;
  std::vector<Convergent> convergents_;
  bool exact_rational_ = false;
  double hi_ = 0.0;
  double lo_ = 0.0;
};

/// ||q alpha||, the distance from q*alpha to the nearest integer. Raises
/// the working precision to 64 + log2(q) bits when needed.
double nearest_int_distance(const IrrationalAlpha& alpha, std::uint64_t q);

struct ConvergentDistance {
  std::uint64_t q = 0;
  double distance = 0.0;        ///< ||q alpha||
  double local_exponent = 0.0;  ///< log(1/||q alpha||) / log q
};

struct TypeEstimate {
  /// max over convergents n >= 3 of the local exponent.
  double gamma_hat = 0.0;
  /// Least-squares slope of log(1/||q_n alpha||) against log q_n, n >= 3.
  /// Insensitive to the constant in ||q_n alpha|| ~ c q_n^-gamma.
  double gamma_fit = 0.0;
  std::uint64_t q_max = 0;
  std::vector<ConvergentDistance> per_convergent;  ///< n = 1, 2, ...
};

/// Throws InsufficientData when fewer than 5 convergents have q_n <= q_max.
TypeEstimate estimate_type(const IrrationalAlpha& alpha, std::uint64_t q_max);

}  // namespace modwalk
