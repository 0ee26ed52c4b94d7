#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "../support/oracles.hpp"
#include "modwalk/covariance.hpp"
#include "modwalk/error.hpp"
#include "modwalk/experiments.hpp"

using namespace modwalk;
using cplx = std::complex<double>;

namespace {

PeriodicBVFunction low_trig() {
  return PeriodicBVFunction::trig({{1, cplx(0.4, 0.1)}, {2, cplx(-0.2, 0.3)}});
}

// C(f,f) for a trig f from Fourier coefficients and the closed-form
// geometric sums over k, with phi_h from high-precision positions.
double trig_cov_oracle(const PeriodicBVFunction& f) {
  const mpf_class alpha = oracle::golden();
  double c = 0.0;
  for (const auto& [h, a] : f.coeffs()) {
    const double x = oracle::frac(alpha, h);
    const double phi = std::cos(2 * std::numbers::pi * x);  // +-1 step
    c += std::norm(a) * (1 + phi) / (1 - phi);
  }
  return c;
}

}  // namespace

TEST_CASE("iid anchor") {
  const auto u = StepDistribution::continuous_uniform();
  for (double t : {0.1, 0.5, 0.9}) {
    const auto f = centered_indicator(0.0, t);
    CHECK(c_series(u, f, f, 0).value == doctest::Approx(t - t * t).epsilon(1e-15));
    CHECK(c_series(u, f, f, 50).value == doctest::Approx(t - t * t).epsilon(1e-15));
    CHECK(c_spectral(u, f, f).value == doctest::Approx(t - t * t).epsilon(1e-15));
  }
  const auto c = PeriodicBVFunction::trig({{1, cplx(std::sqrt(2.0) / 2, 0.0)}});
  CHECK(c_spectral(u, c, c).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigma(u, centered_indicator(0.0, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("zero function") {
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = centered_indicator(0.0, 0.5);
  const PeriodicBVFunction z;
  CHECK(c_series(pm, f, z, 20).value == 0.0);
  CHECK(c_spectral(pm, f, z).value == 0.0);
  CHECK(sigma(pm, z) == 0.0);
  CHECK_THROWS_AS(c_series(pm, f, f, -1), InvalidInput);
}

TEST_CASE("trigonometric f: series, spectral and closed form agree") {
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = low_trig();
  const double want = trig_cov_oracle(f);
  const CovarianceResult s = c_spectral(pm, f, f);
  CHECK(s.value == doctest::Approx(want).epsilon(1e-12));
  CHECK(s.terms_used == 2);
  // The lag terms decay like |phi_h|^k with |phi_h| <= 0.74.
  const CovarianceResult r = c_series(pm, f, f, 200);
  CHECK(r.value == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("cross covariances are symmetric and bilinear") {
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = low_trig();
  const auto g = PeriodicBVFunction::trig({{1, cplx(0.0, -0.3)}, {3, cplx(0.5, 0.0)}});
  const double fg = c_spectral(pm, f, g).value;
  CHECK(fg == doctest::Approx(c_spectral(pm, g, f).value).epsilon(1e-14));
  // Polarization.
  std::map<std::int64_t, cplx> sum = f.coeffs(), diff = f.coeffs();
  for (const auto& [h, a] : g.coeffs()) {
    sum[h] += a;
    diff[h] -= a;
  }
  const auto fp = PeriodicBVFunction::trig(sum);
  const auto fm = PeriodicBVFunction::trig(diff);
  const double polar =
      (c_spectral(pm, fp, fp).value - c_spectral(pm, fm, fm).value) / 4;
  CHECK(fg == doctest::Approx(polar).epsilon(1e-12));
  CHECK(c_series(pm, f, g, 200).value == doctest::Approx(fg).epsilon(1e-9));
}

TEST_CASE("property: positive semidefiniteness of the form") {
  const auto pm = StepDistribution::pm_one_golden();
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<PeriodicBVFunction> fs;
    for (int i = 0; i < 4; ++i) {
      fs.push_back(trial % 2 ? random_bv_function(rng)
                             : PeriodicBVFunction::trig(
                                   {{1 + i, cplx(rng.normal(), rng.normal())}}));
    }
    double q = 0.0, bound = 0.0;
    std::vector<double> x(4);
    for (double& v : x) v = rng.normal();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const auto c = c_spectral(pm, fs[i], fs[j], 1e-6, 4096);
        q += x[i] * x[j] * c.value;
        bound += std::abs(x[i] * x[j]) * c.truncation_bound;
      }
    }
    CHECK(q >= -bound - 1e-12);
  }
}

TEST_CASE("property: lag terms obey the Koksma-type bound") {
  // |E f(U) g(U + S_k)| <= V(g) ||f||_1 psi(k).
  const auto pm = StepDistribution::pm_one_golden();
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_bv_function(rng);
    const auto g = random_bv_function(rng);
    const std::int64_t k = 1 + static_cast<std::int64_t>(rng.uniform01() * 100);
    const AtomicLaw law = pmf_power(pm, k, 0.0);
    double lag = 0.0;
    for (std::size_t i = 0; i < law.size(); ++i) {
      lag += law.probs()[i] * lag_correlation(f, g, law.positions()[i]);
    }
    CHECK(std::abs(lag) <=
          g.total_variation() * f.l1_norm() * law.kolmogorov_distance() + 1e-12);
  }
  // With no lag terms the constant is 1.
  const auto u = StepDistribution::continuous_uniform();
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_bv_function(rng);
    const auto g = random_bv_function(rng);
    CHECK(std::abs(c_spectral(u, f, g).value) <=
          f.total_variation() * g.l1_norm() + g.total_variation() * f.l1_norm() + 1e-12);
  }
}

TEST_CASE("Monte Carlo series engine") {
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = low_trig();
  SeriesOptions opts;
  opts.mc_paths = 4000;
  opts.seed = 5;
  const CovarianceResult r = c_series(pm, f, f, 60, SeriesEngine::mc, opts);
  CHECK(std::isinf(r.truncation_bound));
  CHECK(r.stat_error > 0.0);
  CHECK(std::abs(r.value - trig_cov_oracle(f)) < 5 * r.stat_error);
  const CovarianceResult again = c_series(pm, f, f, 60, SeriesEngine::mc, opts);
  CHECK(again.value == r.value);
}

TEST_CASE("truncation bound is finite only for fast psi decay") {
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = centered_indicator(0.0, 0.5);
  // psi(k) ~ k^-1/2 here, so no finite bound exists.
  CHECK(std::isinf(c_series(pm, f, f, 64).truncation_bound));
}

TEST_CASE("Brownian bridge reduction") {
  const auto u = StepDistribution::continuous_uniform();
  const std::vector<double> grids[] = {{0.0, 0.5, 1.0},
                                       {0.0, 0.1, 0.33, 0.34, 0.9, 1.0},
                                       equispaced_grid(65)};
  for (const auto& grid : grids) {
    const CovarianceGrid g = gamma_grid(u, grid);
    const auto n = static_cast<Eigen::Index>(grid.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double s = grid[i], t = grid[j];
        CHECK(std::abs(g.matrix()(i, j) - (std::min(s, t) - s * t)) < 1e-10);
        CHECK(g.matrix()(i, j) == g.matrix()(j, i));
      }
    }
    CHECK(g.reconstruction_error() <= 1e-8);
  }
  const CovarianceGrid three = gamma_grid(u, {0.0, 0.5, 1.0});
  CHECK(three.matrix()(1, 1) == doctest::Approx(0.25));
  CHECK(three.matrix()(0, 1) == 0.0);
  CHECK(three.matrix()(2, 2) == 0.0);
}

TEST_CASE("gamma grid for the +-1 walk") {
  const auto pm = StepDistribution::pm_one_golden();
  const auto grid = equispaced_grid(33);
  const CovarianceGrid g = gamma_grid(pm, grid, 1e-6, 4096);
  const auto n = static_cast<Eigen::Index>(grid.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(g.matrix()(0, i) == 0.0);
    CHECK(g.matrix()(n - 1, i) == 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      CHECK(g.matrix()(i, j) == g.matrix()(j, i));
    }
  }
  CHECK(g.factorized());
  CHECK(g.reconstruction_error() <= 1e-8);
  // Entries agree with c_spectral on the indicators at the same cutoff.
  const auto f = centered_indicator(0.0, grid[8]);
  const auto h = centered_indicator(0.0, grid[20]);
  const auto c = c_spectral(pm, f, h, 1e-6, g.H);
  CHECK(g.matrix()(8, 20) == doctest::Approx(c.value).epsilon(1e-9));

  // Serial and parallel assembly, general and equispaced paths.
  const CovarianceGrid gs = gamma_grid(pm, grid, 1e-6, 4096, Exec::serial);
  CHECK((g.matrix() - gs.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  std::vector<double> bent = grid;
  bent[5] += 1e-9;
  const CovarianceGrid gb = gamma_grid(pm, bent, 1e-6, 4096);
  CHECK((g.matrix() - gb.matrix()).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("property: continuity proxy on the bridge kernel") {
  const auto u = StepDistribution::continuous_uniform();
  const auto grid = equispaced_grid(41);
  const CovarianceGrid g = gamma_grid(u, grid);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double d = std::abs(g.matrix()(i + 1, j) - g.matrix()(i, j));
      CHECK(d <= 2 * (grid[i + 1] - grid[i]) + 1e-10);
    }
  }
}

TEST_CASE("grid validation and repair") {
  CHECK_THROWS_AS(brownian_bridge_grid({0.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(brownian_bridge_grid({0.0, 0.5, 0.5, 1.0}), InvalidInput);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(1, 1) = 1.0;
  m(2, 2) = 1.0;
  m(1, 2) = m(2, 1) = 1.5;  // indefinite
  const CovarianceGrid g({0.0, 0.3, 0.6, 1.0}, m);
  CHECK(g.min_eigenvalue() < 0.0);
  CHECK(g.factorized());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix());
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}
