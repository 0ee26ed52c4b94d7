#pragma once

// Kolmogorov-Smirnov statistics and small helpers for the experiments.

#include <functional>
#include <span>

namespace modwalk {

/// sup_x |F_n(x) - F(x)| over the sorted sample, i.e. the max over i of
/// max(i/n - F(x_i), F(x_i) - (i-1)/n). Throws InvalidInput when empty.
double ks_one_sample(std::span<const double> samples,
                     const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)| by a merge scan.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical value sqrt(-ln(level/2)/2) / sqrt(n_eff).
double ks_critical_value(double level, double n_eff);
/// Same with n_eff = n m / (n + m).
double ks_two_sample_critical_value(double level, double n, double m);

/// CDF of N(0, sigma^2); a point mass at 0 when sigma = 0.
double normal_cdf(double x, double sigma);

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
/// Pearson correlation; 0 when either side is constant.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace modwalk
