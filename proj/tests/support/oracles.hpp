#pragma once

// Brute-force references for the test suite. They share no code with the
// library: positions {n alpha} come from 400-bit GMP floats, laws of S_k
// from binomial coefficients, discrepancies from direct enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline constexpr mp_bitcnt_t kBits = 400;

/// (sqrt 5 - 1) / 2 to kBits bits.
inline mpf_class golden() {
  mpf_class five(5, kBits);
  mpf_class r(0, kBits);
  mpf_sqrt(r.get_mpf_t(), five.get_mpf_t());
  return mpf_class((r - 1) / 2, kBits);
}

inline mpf_class sqrt2_minus_1() {
  mpf_class two(2, kBits);
  mpf_class r(0, kBits);
  mpf_sqrt(r.get_mpf_t(), two.get_mpf_t());
  return mpf_class(r - 1, kBits);
}

/// {n alpha} rounded to double.
inline double frac(const mpf_class& alpha, std::int64_t n) {
  mpf_class x(alpha * static_cast<double>(n), kBits);
  mpf_class fl(0, kBits);
  mpf_floor(fl.get_mpf_t(), x.get_mpf_t());
  return mpf_class(x - fl, kBits).get_d();
}

/// pmf of the sum of k iid steps with integer atoms, by repeated
/// convolution in long double.
inline std::map<std::int64_t, long double> law_of_sum(
    const std::vector<std::pair<std::int64_t, double>>& atoms,
    std::int64_t k) {
  std::map<std::int64_t, long double> law{{0, 1.0L}};
  for (std::int64_t j = 0; j < k; ++j) {
    std::map<std::int64_t, long double> next;
    for (const auto& [n, p] : law) {
      for (const auto& [v, q] : atoms) next[n + v] += p * q;
    }
    law.swap(next);
  }
  return law;
}

/// pmf of the simple +-1 walk after k steps from binomial coefficients.
inline std::map<std::int64_t, long double> pm_one_law(std::int64_t k) {
  std::map<std::int64_t, long double> law;
  for (std::int64_t j = 0; j <= k; ++j) {
    const long double lp = std::lgamma(static_cast<long double>(k + 1)) -
                           std::lgamma(static_cast<long double>(j + 1)) -
                           std::lgamma(static_cast<long double>(k - j + 1)) -
                           static_cast<long double>(k) * std::log(2.0L);
    law[2 * j - k] = std::exp(lp);
  }
  return law;
}

/// sup_t |P({S alpha} <= t) - t| for an integer law, by sorting atoms.
inline double kolmogorov(const std::map<std::int64_t, long double>& law,
                         const mpf_class& alpha) {
  std::vector<std::pair<double, long double>> pts;
  for (const auto& [n, p] : law) pts.emplace_back(frac(alpha, n), p);
  std::sort(pts.begin(), pts.end());
  long double cum = 0.0L;
  long double worst = 0.0L;
  for (const auto& [x, p] : pts) {
    worst = std::max(worst, std::abs(cum - static_cast<long double>(x)));
    cum += p;
    worst = std::max(worst, std::abs(cum - static_cast<long double>(x)));
  }
  return static_cast<double>(worst);
}

/// E (sum_{k=M+1}^{M+N} f(S_k))^2 by enumerating the joint law of
/// (S_k, S_l - S_k) for every pair k <= l.
inline double window_variance(
    const std::vector<std::pair<std::int64_t, double>>& atoms,
    const mpf_class& alpha, const std::function<double(double)>& f,
    std::int64_t M, std::int64_t N) {
  const std::int64_t last = M + N;
  std::vector<std::map<std::int64_t, long double>> laws(last + 1);
  for (std::int64_t k = 0; k <= last; ++k) laws[k] = law_of_sum(atoms, k);
  std::int64_t lo = 0, hi = 0;
  for (const auto& [v, p] : atoms) {
    lo = std::min(lo, v * last);
    hi = std::max(hi, v * last);
  }
  std::map<std::int64_t, double> cache;
  for (std::int64_t n = lo; n <= hi; ++n) cache[n] = f(frac(alpha, n));
  long double total = 0.0L;
  for (std::int64_t k = M + 1; k <= last; ++k) {
    for (const auto& [a, p] : laws[k]) {
      total += p * cache[a] * cache[a];
    }
    for (std::int64_t l = k + 1; l <= last; ++l) {
      for (const auto& [a, p] : laws[k]) {
        for (const auto& [b, q] : laws[l - k]) {
          total += 2.0L * p * q * cache[a] * cache[a + b];
        }
      }
    }
  }
  return static_cast<double>(total);
}

/// F_N(t) - t with F_N(t) = #{x < t}/N evaluated at every t where it can
/// attain an extreme value: 0, 1, each point and just after each point.
inline std::vector<double> empirical_process_values(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  std::vector<double> g{0.0, 0.0};
  for (double t : x) {
    double below = 0.0, at_or_below = 0.0;
    for (double y : x) {
      if (y < t) below += 1.0;
      if (y <= t) at_or_below += 1.0;
    }
    g.push_back(below / n - t);
    g.push_back(at_or_below / n - t);
  }
  return g;
}

inline double star_discrepancy(const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : empirical_process_values(x)) worst = std::max(worst, std::abs(v));
  return worst;
}

inline double extreme_discrepancy(const std::vector<double>& x) {
  const auto g = empirical_process_values(x);
  return *std::max_element(g.begin(), g.end()) -
         *std::min_element(g.begin(), g.end());
}

/// (integral |F_N(t) - t|^p dt)^{1/p} by the midpoint rule on `cells`.
inline double lp_discrepancy(const std::vector<double>& x, double p,
                             int cells = 200000) {
  const double n = static_cast<double>(x.size());
  std::vector<double> s = x;
  std::sort(s.begin(), s.end());
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double t = (i + 0.5) / cells;
    const double f =
        static_cast<double>(std::lower_bound(s.begin(), s.end(), t) - s.begin()) / n;
    acc += std::pow(std::abs(f - t), p);
  }
  return std::pow(acc / cells, 1.0 / p);
}

/// Quantile of an atomic law given as sorted (position, prob) pairs.
inline double quantile(const std::vector<std::pair<double, double>>& law,
                       double u) {
  double cum = 0.0;
  for (const auto& [x, p] : law) {
    cum += p;
    if (cum >= u) return x;
  }
  return law.back().first;
}

/// ||F^-1 - G^-1||_p against the uniform law by the midpoint rule.
inline double wasserstein_to_uniform(
    const std::vector<std::pair<double, double>>& law, double p,
    int cells = 400000) {
  double acc = 0.0, worst = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double u = (i + 0.5) / cells;
    const double d = std::abs(quantile(law, u) - u);
    acc += std::pow(d, p);
    worst = std::max(worst, d);
  }
  return std::isinf(p) ? worst : std::pow(acc / cells, 1.0 / p);
}

/// Total variation of a periodic function sampled on a fine grid.
inline double sampled_variation(const std::function<double(double)>& f,
                                int cells = 200000) {
  double v = 0.0;
  double prev = f(0.0);
  for (int i = 1; i <= cells; ++i) {
    const double cur = f(static_cast<double>(i % cells) / cells);
    v += std::abs(cur - prev);
    prev = cur;
  }
  return v;
}

}  // namespace oracle
