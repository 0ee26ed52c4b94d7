#include "modwalk/discrepancy.hpp"

#include <algorithm>
#include <cmath>

#include "modwalk/error.hpp"

namespace modwalk {

namespace {

// integral_a^b |c - t|^p dt = A(c - a) - A(c - b), A(u) = sgn(u)|u|^{p+1}/(p+1)
double abs_power_integral(double c, double a, double b, double p) {
  const auto A = [p](double u) {
    const double m = std::pow(std::abs(u), p + 1.0) / (p + 1.0);
    return u < 0.0 ? -m : m;
  };
  return A(c - a) - A(c - b);
}

double lp_sorted(std::span<const double> x, double p) {
  const double n = static_cast<double>(x.size());
  double total = 0.0, left = 0.0;
  for (std::size_t i = 0; i <= x.size(); ++i) {
    const double right = (i < x.size()) ? x[i] : 1.0;
    if (right > left) {
      total += abs_power_integral(static_cast<double>(i) / n, left, right, p);
    }
    left = std::max(left, right);
  }
  return std::pow(total, 1.0 / p);
}

void check_points(std::span<const double> x) {
  if (x.empty()) throw InvalidInput("discrepancy of an empty point set");
}

}  // namespace

DiscrepancySet discrepancies_sorted(std::span<const double> x) {
  check_points(x);
  const double n = static_cast<double>(x.size());
  double gmax = 0.0, gmin = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    gmax = std::max(gmax, static_cast<double>(i + 1) / n - x[i]);
    gmin = std::min(gmin, static_cast<double>(i) / n - x[i]);
  }
  DiscrepancySet d;
  d.extreme = gmax - gmin;
  d.star = std::max(gmax, -gmin);
  d.l1 = lp_sorted(x, 1.0);
  d.l2 = lp_sorted(x, 2.0);
  return d;
}

DiscrepancySet discrepancies(std::span<const double> points) {
  std::vector<double> x(points.begin(), points.end());
  std::sort(x.begin(), x.end());
  return discrepancies_sorted(x);
}

double extreme_discrepancy(std::span<const double> points) {
  return discrepancies(points).extreme;
}

double star_discrepancy(std::span<const double> points) {
  return discrepancies(points).star;
}

double lp_discrepancy(std::span<const double> points, double p) {
  check_points(points);
  if (std::isinf(p)) return star_discrepancy(points);
  if (!(p >= 1.0)) throw InvalidInput("lp_discrepancy needs p >= 1");
  std::vector<double> x(points.begin(), points.end());
  std::sort(x.begin(), x.end());
  return lp_sorted(x, p);
}

}  // namespace modwalk
