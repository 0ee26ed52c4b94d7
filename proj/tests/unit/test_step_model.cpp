#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "../support/oracles.hpp"
#include "modwalk/error.hpp"
#include "modwalk/step_model.hpp"

using namespace modwalk;

namespace {

StepDistribution three_atom() {
  return StepDistribution::lattice({{-2, 0.25}, {1, 0.5}, {3, 0.25}},
                                   IrrationalAlpha::sqrt2_minus_1());
}

}  // namespace

TEST_CASE("construction checks") {
  const auto g = IrrationalAlpha::golden();
  CHECK_THROWS_AS(StepDistribution::lattice({{1, 0.5}, {-1, 0.4}}, g),
                  InvalidInput);
  CHECK_THROWS_AS(StepDistribution::lattice({{1, 1.0}}, g), InvalidInput);
  CHECK_THROWS_AS(StepDistribution::lattice({{1, 0.5}, {1, 0.5}}, g),
                  InvalidInput);
  CHECK_THROWS_AS(StepDistribution::lattice({{1, 1.5}, {-1, -0.5}}, g),
                  InvalidInput);
  const auto merged =
      StepDistribution::lattice({{1, 0.25}, {-1, 0.5}, {1, 0.25}}, g);
  CHECK(merged.atoms().size() == 2);
  CHECK(merged.is_symmetric());
  CHECK_FALSE(three_atom().is_symmetric());
}

TEST_CASE("characteristic values") {
  const auto pm = StepDistribution::pm_one_golden();
  CHECK(char_coeff(pm, 0).phi == std::complex<double>(1.0, 0.0));
  const auto c1 = char_coeff(pm, 1);
  CHECK(c1.phi.real() == doctest::Approx(-0.7374).epsilon(1e-4));
  CHECK(c1.phi.real() ==
        doctest::Approx(std::cos(2 * std::numbers::pi *
                                 IrrationalAlpha::golden().value()))
            .epsilon(1e-14));
  CHECK(std::abs(c1.phi.imag()) < 1e-15);

  const auto u = StepDistribution::continuous_uniform();
  CHECK(std::abs(char_coeff(u, 7).phi) == 0.0);
  CHECK(char_coeff(u, 0).phi == std::complex<double>(1.0, 0.0));
}

TEST_CASE("property: conjugate symmetry, 1 - phi consistency, eps > 0") {
  const mpf_class alpha = oracle::sqrt2_minus_1();
  const auto d = three_atom();
  for (std::int64_t h = 1; h <= 300; h += 7) {
    const auto p = char_coeff(d, h);
    const auto m = char_coeff(d, -h);
    CHECK(std::abs(m.phi - std::conj(p.phi)) < 1e-14);
    CHECK(std::abs((1.0 - p.phi) - p.one_minus_phi) < 1e-14);
    CHECK(p.eps > 0.0);
    CHECK(std::abs(p.phi) <= 1.0 - p.eps * (1 - 1e-9));

    std::complex<double> want = 0.0;
    for (const auto& [v, q] : {std::pair{-2, 0.25}, {1, 0.5}, {3, 0.25}}) {
      want += q * std::polar(1.0, 2 * std::numbers::pi * oracle::frac(alpha, h * v));
    }
    CHECK(std::abs(p.phi - want) < 1e-12);
  }
  const auto table = char_table(d, 50, Exec::parallel);
  const auto serial = char_table(d, 50, Exec::serial);
  REQUIRE(table.size() == 50);
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].h == static_cast<std::int64_t>(i + 1));
    CHECK(table[i].phi == serial[i].phi);
  }
}

TEST_CASE("sampling") {
  Rng rng(7);
  const auto dirac = StepDistribution::dirac(1, IrrationalAlpha::golden());
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(dirac.sample_step(rng) - IrrationalAlpha::golden().value()) <= 0x1p-52);
  }
  CHECK(dirac.is_degenerate());

  const auto u = StepDistribution::continuous_uniform();
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.sample_step(rng);
    CHECK_UNARY(x >= 0.0 && x < 1.0);
    s += x;
  }
  CHECK(std::abs(s / 1e5 - 0.5) < 4 * std::sqrt(1.0 / 12 / 1e5));
}

TEST_CASE("property: sample mean of increments") {
  const auto d = three_atom();
  Rng rng(11);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = d.sample_step(rng);
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  const double se = std::sqrt((s2 / n - m * m) / n);
  CHECK(std::abs(m - d.mean_increment()) < 4 * se);
}

TEST_CASE("many-atom characteristic values keep relative accuracy") {
  const mpf_class alpha = oracle::golden();
  const auto d = StepDistribution::heavy_tail(0.5, 1000, IrrationalAlpha::golden());
  // Fibonacci h put h*alpha next to an integer, so 1 - phi is small.
  for (std::int64_t h : {1, 7, 89, 377, 1000, 10946, 46368, 99991}) {
    const auto c = char_coeff(d, h);
    long double re = 0, im = 0;
    for (const auto& a : d.atoms()) {
      long double y = oracle::frac(alpha, h * a.value);
      if (y > 0.5L) y -= 1.0L;
      const long double s = std::sin(std::numbers::pi_v<long double> * y);
      re += a.prob * 2 * s * s;
      im -= a.prob * std::sin(2 * std::numbers::pi_v<long double> * y);
    }
    CHECK(std::abs(c.one_minus_phi.real() - re) <= 1e-11 * re);
    CHECK(std::abs(c.one_minus_phi.imag() - im) <= 1e-11 * re + 1e-15);
  }
}

TEST_CASE("heavy-tail sampling follows the exact pmf tail") {
  const auto d = StepDistribution::heavy_tail(1.5, 1000000,
                                              IrrationalAlpha::golden());
  CHECK(d.is_symmetric());
  Rng rng(3);
  const int n = 1000000;
  int over10 = 0, over100 = 0;
  for (int i = 0; i < n; ++i) {
    const auto v = std::abs(d.atoms()[d.sample_atom(rng)].value);
    over10 += v > 10;
    over100 += v > 100;
  }
  for (auto [t, count] : {std::pair{10.0, over10}, {100.0, over100}}) {
    const double p = d.tail_probability(t);
    const double band = 3 * std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(count / static_cast<double>(n) - p) < band);
  }
  // P(|X| > t) ~ c t^-beta: the ratio across a decade is about 10^-1.5.
  CHECK(d.tail_probability(1000) / d.tail_probability(100) ==
        doctest::Approx(std::pow(10.0, -1.5)).epsilon(0.05));
}
