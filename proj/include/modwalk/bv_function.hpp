#pragma once

// Mean-zero, 1-periodic functions of bounded variation, in two exact
// families: piecewise constant on right-open pieces [b_i, b_{i+1}), and
// real trigonometric polynomials without a constant term.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace modwalk {

class PeriodicBVFunction {
 public:
  enum class Kind { piecewise_constant, trig_poly };

  /// The zero function (piecewise constant, one piece).
  PeriodicBVFunction();

  /// `breaks` strictly increasing in [0,1); value[i] holds on
  /// [breaks[i], breaks[i+1]) and the last value wraps through 1 == 0.
  /// Throws InvalidInput unless the mean is zero within 1e-14 (scaled by
  /// the largest |value|).
  static PeriodicBVFunction piecewise(std::vector<double> breaks,
                                      std::vector<double> values);
  /// Same, but subtracts the mean instead of rejecting it.
  static PeriodicBVFunction centered_piecewise(std::vector<double> breaks,
                                               std::vector<double> values);
  /// Coefficients h -> c_h, h != 0, with c_{-h} = conj(c_h). A missing
  /// partner is filled in by conjugation; a mismatched one is rejected.
  static PeriodicBVFunction trig(
      const std::map<std::int64_t, std::complex<double>>& coeffs);

  Kind kind() const noexcept { return kind_; }
  bool is_piecewise() const noexcept {
    return kind_ == Kind::piecewise_constant;
  }
  bool is_zero() const noexcept;

  std::span<const double> breaks() const noexcept { return breaks_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::map<std::int64_t, std::complex<double>>& coeffs() const noexcept {
    return coeffs_;
  }
  /// Largest |h| with a nonzero coefficient (trig), 0 otherwise.
  std::int64_t degree() const noexcept;

  double evaluate(double x) const noexcept;
  std::complex<double> fourier_coeff(std::int64_t h) const noexcept;

  /// Exact for piecewise constant (sum of |jumps| including 1 -> 0);
  /// numeric with 1e-9 tolerance for trig polynomials.
  double total_variation() const noexcept { return total_variation_; }
  double l1_norm() const noexcept { return l1_norm_; }
  double l2_norm() const noexcept { return l2_norm_; }
  double sup_norm() const noexcept { return sup_norm_; }
  /// p in {1, 2} or +infinity.
  double lp_norm(double p) const;

  std::string describe() const;

 private:
  void compute_cached();

  Kind kind_ = Kind::piecewise_constant;
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::map<std::int64_t, std::complex<double>> coeffs_;
  double total_variation_ = 0.0;
  double l1_norm_ = 0.0;
  double l2_norm_ = 0.0;
  double sup_norm_ = 0.0;
};

/// f_J(x) = 1_J({x}) - |J| for J = [a, b), 0 <= a < b <= 1.
PeriodicBVFunction centered_indicator(double a, double b);

/// Integral over [0,1) of f*g, exact for both families.
double inner_product(const PeriodicBVFunction& f, const PeriodicBVFunction& g);

/// G(x) = integral over [0,1) of f(u) g(u+x) du, exact for both families.
double lag_correlation(const PeriodicBVFunction& f,
                       const PeriodicBVFunction& g, double x);

}  // namespace modwalk
