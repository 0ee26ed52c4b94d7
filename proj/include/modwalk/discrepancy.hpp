#pragma once

// Discrepancy functionals of a finite point set in [0,1), through the
// empirical process G(t) = F_N(t) - t with F_N(t) = #{x_k < t} / N.

#include <span>
#include <vector>

namespace modwalk {

struct DiscrepancySet {
  double extreme = 0.0;  ///< D_N = sup_{s<t} |G(t) - G(s)|
  double star = 0.0;     ///< D_N^* = sup_t |G(t)|
  double l1 = 0.0;       ///< integral of |G|
  double l2 = 0.0;       ///< (integral of G^2)^{1/2}
};

/// Requires sorted input.
DiscrepancySet discrepancies_sorted(std::span<const double> sorted);

/// Sorts a copy.
DiscrepancySet discrepancies(std::span<const double> points);

double extreme_discrepancy(std::span<const double> points);
double star_discrepancy(std::span<const double> points);
/// (integral of |G|^p)^{1/p}; p = infinity gives the star discrepancy.
double lp_discrepancy(std::span<const double> points, double p);

}  // namespace modwalk
