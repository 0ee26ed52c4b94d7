// Acceptance suite. Each criterion prints one PASS/FAIL line; run with
// criterion numbers as arguments to select a subset (ctest registers each
// one separately), or with no arguments to run all twelve.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "modwalk/covariance.hpp"
#include "modwalk/experiments.hpp"
#include "modwalk/gaussian_limit.hpp"
#include "modwalk/statistics.hpp"

using namespace modwalk;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void require_reports(Outcome& o, const std::vector<TestReport>& rs) {
  for (const auto& r : rs) {
    o.require(r.pass, r.name + "=" + fmt("%.6g", r.observed) + " (" +
                          sidedness_name(r.sidedness) + " ref " +
                          fmt("%.6g tol %.3g", r.reference, r.tolerance) + ")");
  }
}

const char* kIndicator = "indicator 0 0.5";

Outcome brownian_bridge_oracle() {
  Outcome o;
  const auto grid = equispaced_grid(101);
  const CovarianceGrid g = gamma_grid(StepDistribution::continuous_uniform(), grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double want = std::min(grid[i], grid[j]) - grid[i] * grid[j];
      worst = std::max(worst, std::abs(g.matrix()(i, j) - want));
    }
  }
  o.require(worst < 1e-10, fmt("max entry error %.3g < 1e-10", worst));
  return o;
}

Outcome covariance_cross_method() {
  Outcome o;
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = centered_indicator(0.0, 0.5);
  const CovarianceResult s = c_series(pm, f, f, 200);
  const CovarianceResult sp = c_spectral(pm, f, f, 1e-6);
  const double diff = std::abs(s.value - sp.value);
  o.require(diff < 1e-4,
            fmt("|c_series(K=200) %.6f - c_spectral %.6f| = %.3g < 1e-4",
                s.value, sp.value, diff));
  o.require(sp.truncation_bound < 1e-6,
            fmt("spectral tail estimate %.3g at H=%g", sp.truncation_bound,
                static_cast<double>(sp.terms_used)));
  return o;
}

Outcome window_variance_oracle() {
  Outcome o;
  const auto pm = StepDistribution::pm_one_golden();
  const auto f = centered_indicator(0.0, 0.5);
  const double C = c_spectral(pm, f, f, 1e-6).value;
  const WindowVariance w4096 = window_variance_spectral(pm, f, 0, 4096);
  const WindowVariance w256 = window_variance_spectral(pm, f, 0, 256);
  const double e4096 = std::abs(w4096.value / 4096 - C);
  const double e256 = std::abs(w256.value / 256 - C);
  o.require(e4096 < 0.05 * C,
            fmt("|W/N - C| at N=4096: %.4f vs 5%% of C=%.4f", e4096, C));
  o.require(e4096 < e256, fmt("error shrinks from N=256 (%.4f) to 4096 (%.4f)",
                              e256, e4096));
  const double spectral16 = window_variance_spectral(pm, f, 0, 16, 128).value;
  const double brute16 = oracle::window_variance(
      {{1, 0.5}, {-1, 0.5}}, oracle::golden(),
      [&](double x) { return f.evaluate(x); }, 0, 16);
  o.require(std::abs(spectral16 - brute16) < 1e-6,
            fmt("N=16 spectral %.6f vs brute force %.6f", spectral16, brute16));
  return o;
}

Outcome clt() {
  Outcome o;
  std::ostringstream c;
  c << "f = " << kIndicator << "\nn = 16384\nm = 2000\nseed = 1\n"
    << "ks_threshold = 0.044\n";
  const CltOutcome r = run_clt(ExperimentConfig::parse(c.str()));
  require_reports(o, r.reports);
  o.require(true, fmt("sigma=%.6f, sample sd=%.6f", r.sigma,
                      std::sqrt(variance(r.sums))));
  return o;
}

Outcome fclt() {
  Outcome o;
  const FcltOutcome r = run_fclt(ExperimentConfig::parse(
      "n = 16384\nm = 1000\ngrid = 257\nseed = 1\nks_threshold = 0.08\n"
      "functional = sup, l2\n"));
  require_reports(o, r.reports);
  return o;
}

Outcome lil() {
  Outcome o;
  std::ostringstream c;
  c << "f = " << kIndicator << "\nj_min = 10\nj_max = 22\nseed = 1\n";
  const LilOutcome pm = run_lil(ExperimentConfig::parse(c.str()));
  for (const auto& r : pm.reports) {
    if (r.name == "lil_f_max") require_reports(o, {r});
  }
  const LilOutcome u = run_lil(ExperimentConfig::parse(
      "kind = uniform\nj_min = 10\nj_max = 22\nseed = 1\n"
      "d_band_lo = 0.5\nd_band_hi = 2\n"));
  for (const auto& r : u.reports) {
    if (r.name == "lil_d_max") require_reports(o, {r});
  }
  o.require(std::abs(u.rkhs_extreme - 0.5) < 1e-9,
            fmt("uniform RKHS extreme constant %.6f", u.rkhs_extreme));
  return o;
}

Outcome psi_decay() {
  Outcome o;
  const PsiOutcome r = run_psi_decay(ExperimentConfig::parse(
      "k_list = 16, 32, 64, 128, 256, 512, 1024\n"));
  require_reports(o, r.reports);
  const double psi1 = psi_exact(StepDistribution::pm_one_golden(), 1).value;
  const double want = (3.0 - std::sqrt(5.0)) / 2.0;
  o.require(std::abs(psi1 - want) <= 4e-16,
            fmt("psi(1)=%.17g vs (3-sqrt5)/2=%.17g", psi1, want));
  return o;
}

Outcome coupling() {
  Outcome o;
  require_reports(o, run_coupling(ExperimentConfig::parse(
                         "draws = 100000\nseed = 1\nks_threshold = 0.0139\n")));
  return o;
}

Outcome duality() {
  Outcome o;
  require_reports(o, run_duality(ExperimentConfig::parse(
                         "laws = 20\nmax_atoms = 50\nseed = 1\n")));
  return o;
}

Outcome koksma() {
  Outcome o;
  require_reports(o, run_koksma(ExperimentConfig::parse(
                         "pairs = 100\nmax_atoms = 50\nseed = 1\n")));
  return o;
}

Outcome rkhs_constants() {
  Outcome o;
  const LilConstants c = lil_constants(brownian_bridge_grid(equispaced_grid(513)));
  o.require(std::abs(c.extreme - 0.5) <= 0.01, fmt("extreme %.6f", c.extreme));
  o.require(std::abs(c.star - 0.5) <= 0.01, fmt("star %.6f", c.star));
  o.require(std::abs(c.l2 - 1.0 / std::numbers::pi) <= 0.01,
            fmt("l2 %.6f vs 1/pi", c.l2));
  return o;
}

Outcome block_coupling() {
  Outcome o;
  std::ostringstream c;
  c << "f = " << kIndicator << "\nblocks = 10000\nseed = 1\n"
    << "ks_threshold = 0.02\ncorr_threshold = 0.05\n";
  const BlockOutcome r = run_block_coupling(ExperimentConfig::parse(c.str()));
  require_reports(o, r.reports);
  o.require(true, fmt("delta fit %.4f, used %.4f", r.delta_fit, r.delta_used));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "Brownian-bridge kernel for iid uniform steps", 1.0, brownian_bridge_oracle},
      {2, "covariance: series vs spectral", 10.0, covariance_cross_method},
      {3, "window variance vs covariance and brute force", 30.0, window_variance_oracle},
      {4, "CLT for the +-1/golden walk", 60.0, clt},
      {5, "functional CLT for discrepancies", 180.0, fclt},
      {6, "LIL bands", 120.0, lil},
      {7, "psi decay and psi(1)", 30.0, psi_decay},
      {8, "quantile coupling to the uniform law", 1e9, coupling},
      {9, "W_inf = d_Kol and W_1 <= W_2 <= W_inf", 1e9, duality},
      {10, "Koksma-type bound", 1e9, koksma},
      {11, "RKHS constants of the Brownian bridge", 1e9, rkhs_constants},
      {12, "block coupling", 1e9, block_coupling},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  bool all_ok = true;
  for (const auto& c : criteria()) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s < 1e9) {
      o.require(s < c.budget_s, fmt("runtime %.2fs < %.0fs", s, c.budget_s));
    }
    all_ok = all_ok && o.pass;
    std::printf("%s criterion %d: %s | %s | %.2fs\n", o.pass ? "PASS" : "FAIL",
                c.id, c.title, o.detail.c_str(), s);
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
