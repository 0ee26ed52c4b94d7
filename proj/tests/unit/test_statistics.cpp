#include <doctest.h>

#include <cmath>
#include <vector>

#include "modwalk/error.hpp"
#include "modwalk/rng.hpp"
#include "modwalk/statistics.hpp"

using namespace modwalk;

namespace {
double unif(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

TEST_CASE("one-sample KS") {
  CHECK(ks_one_sample(std::vector<double>{0.5}, unif) == doctest::Approx(0.5));
  CHECK(ks_one_sample(std::vector<double>{0.25, 0.75}, unif) ==
        doctest::Approx(0.25));
  CHECK_THROWS_AS(ks_one_sample(std::vector<double>{}, unif), InvalidInput);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(ks_two_sample(a, b) == 1.0);
  CHECK(ks_two_sample(a, a) == 0.0);
  const std::vector<double> c{1, 1, 2}, d{1, 2, 2};
  CHECK(ks_two_sample(c, d) == doctest::Approx(1.0 / 3));
}

TEST_CASE("property: KS in [0,1] and two-sample symmetry") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(1 + t), b(3 + 2 * t);
    for (double& v : a) v = std::floor(rng.normal() * 4) / 4;
    for (double& v : b) v = std::floor(rng.normal() * 4) / 4 + 0.1;
    const double ab = ks_two_sample(a, b);
    CHECK(ab == ks_two_sample(b, a));
    CHECK_UNARY(ab >= 0.0 && ab <= 1.0);
    const double one = ks_one_sample(a, [](double x) { return normal_cdf(x, 1.0); });
    CHECK_UNARY(one >= 0.0 && one <= 1.0);
  }
}

TEST_CASE("critical values and helpers") {
  CHECK(ks_critical_value(0.001, 2000) == doctest::Approx(0.0437).epsilon(1e-3));
  CHECK(ks_critical_value(0.001, 1e5) == doctest::Approx(0.00617).epsilon(1e-2));
  CHECK(ks_two_sample_critical_value(0.001, 1000, 1000) ==
        doctest::Approx(ks_critical_value(0.001, 500)));
  CHECK(normal_cdf(0.0, 2.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96, 1.0) == doctest::Approx(0.9750).epsilon(1e-4));
  CHECK(normal_cdf(-1e-300, 0.0) == 0.0);
  CHECK(normal_cdf(0.0, 0.0) == 1.0);
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{1, 1, 1, 1};
  CHECK(mean(x) == 2.5);
  CHECK(variance(x) == doctest::Approx(5.0 / 3));
  CHECK(pearson(x, y) == doctest::Approx(1.0));
  CHECK(pearson(x, z) == 0.0);
}

TEST_CASE("KS of a true uniform sample stays below its critical value") {
  Rng rng(2);
  std::vector<double> u(100000);
  for (double& v : u) v = rng.uniform01();
  CHECK(ks_one_sample(u, unif) < ks_critical_value(0.001, 1e5));
}
