#include "modwalk/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "modwalk/discrepancy.hpp"
#include "modwalk/error.hpp"
#include "modwalk/statistics.hpp"
#include "modwalk/walk_sim.hpp"

namespace modwalk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void stamp(std::vector<TestReport>& reports, std::size_t from,
           Clock::time_point t0) {
  const double s = seconds_since(t0);
  for (std::size_t i = from; i < reports.size(); ++i) reports[i].runtime_s = s;
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

double lil_norm(std::int64_t n) {
  const double x = static_cast<double>(n);
  return std::sqrt(2.0 * x * std::log(std::log(x)));
}

// Two-sided band (lo, hi) as a report centred on its midpoint.
TestReport band_report(std::string name, double observed, double lo, double hi,
                       std::uint64_t seed) {
  return make_report(std::move(name), observed, 0.5 * (lo + hi),
                     0.5 * (hi - lo), Sidedness::two_sided, seed);
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

CltOutcome run_clt(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  cfg.validate();
  const StepDistribution dist = cfg.make_step();
  const PeriodicBVFunction f = cfg.make_function();
  const std::int64_t N = cfg.n(), M = cfg.m();
  const std::uint64_t seed = cfg.seed();

  CltOutcome out;
  out.cov = c_spectral(dist, f, f, cfg.get_double("tol", 1e-6));
  out.sigma = std::sqrt(std::max(out.cov.value, 0.0));
  out.sums = simulate_functional_sums(dist, f, N, M, seed);
  if (out.sigma == 0.0) {
    double worst = 0.0;
    for (double s : out.sums) worst = std::max(worst, std::abs(s));
    out.reports.push_back(make_report("clt_degenerate_max_abs", worst, 0.0,
                                      1e-12, Sidedness::two_sided, seed));
  } else {
    const double sigma = out.sigma;
    const double ks = ks_one_sample(
        out.sums, [sigma](double x) { return normal_cdf(x, sigma); });
    const double crit = cfg.has("ks_threshold")
                            ? cfg.get_double("ks_threshold", 0.0)
                            : ks_critical_value(cfg.get_double("ks_level", 1e-3),
                                                static_cast<double>(M));
    out.reports.push_back(
        make_report("clt_ks", ks, crit, 0.0, Sidedness::upper, seed));
  }
  stamp(out.reports, 0, t0);
  return out;
}

FcltOutcome run_fclt(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  cfg.validate();
  const StepDistribution dist = cfg.make_step();
  const std::int64_t N = cfg.n(), M = cfg.m();
  const std::uint64_t seed = cfg.seed();
  const double root_n = std::sqrt(static_cast<double>(N));

  const auto grid = equispaced_grid(
      static_cast<std::size_t>(cfg.grid_points()));
  const std::string mode = cfg.get_string("walk_functionals", "grid");
  if (mode != "grid" && mode != "exact") {
    throw InvalidInput("walk_functionals must be grid or exact, got " + mode);
  }
  // "grid" puts the walk through the same discretised functionals as the
  // Gaussian paths; "exact" uses the exact discrepancies, whose sups sit
  // above any grid maximum.
  const auto walk = replicate_statistics(
      dist, N, M, seed, [&](std::span<const double> pts) {
        std::vector<double> x(pts.begin(), pts.end());
        std::sort(x.begin(), x.end());
        if (mode == "exact") {
          const DiscrepancySet d = discrepancies_sorted(x);
          return std::vector<double>{root_n * d.extreme, root_n * d.l1,
                                     root_n * d.l2, root_n * d.star};
        }
        std::vector<double> e(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const auto below = std::lower_bound(x.begin(), x.end(), grid[i]) - x.begin();
          e[i] = root_n * (static_cast<double>(below) / static_cast<double>(N) - grid[i]);
        }
        return std::vector<double>{functional_sup_increment(e),
                                   functional_lp(e, 1.0, grid),
                                   functional_lp(e, 2.0, grid),
                                   functional_lp(e, HUGE_VAL, grid)};
      });

  const CovarianceGrid cov =
      gamma_grid(dist, grid, cfg.get_double("tol", 1e-6));
  const GaussianPathBatch batch =
      sample_paths(cov, M, derive_seed(seed, 0, stream::kGaussianPath));

  FcltOutcome out;
  const char* names[] = {"sup", "l1", "l2", "linf"};
  for (int k = 0; k < 4; ++k) {
    FunctionalSample s;
    s.name = names[k];
    for (const auto& w : walk) s.walk.push_back(w[static_cast<std::size_t>(k)]);
    for (const auto& p : batch.paths) {
      switch (k) {
        case 0:
          s.limit.push_back(functional_sup_increment(p));
          break;
        case 1:
          s.limit.push_back(functional_lp(p, 1.0, grid));
          break;
        case 2:
          s.limit.push_back(functional_lp(p, 2.0, grid));
          break;
        default:
          s.limit.push_back(functional_lp(p, INFINITY, grid));
      }
    }
    out.samples.push_back(std::move(s));
  }

  const double crit =
      cfg.has("ks_threshold")
          ? cfg.get_double("ks_threshold", 0.0)
          : cfg.get_double("ks_widen", 1.5) *
                ks_two_sample_critical_value(cfg.get_double("ks_level", 1e-3),
                                             static_cast<double>(M),
                                             static_cast<double>(M));
  const auto wanted = split_names(cfg.get_string("functional", "sup,l1,l2,linf"));
  for (const auto& s : out.samples) {
    if (std::find(wanted.begin(), wanted.end(), s.name) == wanted.end()) {
      continue;
    }
    out.reports.push_back(make_report("fclt_ks_" + s.name,
                                      ks_two_sample(s.walk, s.limit), crit,
                                      0.0, Sidedness::upper, seed));
  }
  stamp(out.reports, 0, t0);
  return out;
}

LilOutcome run_lil(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const StepDistribution dist = cfg.make_step();
  const PeriodicBVFunction f = cfg.make_function();
  const std::int64_t j_min = cfg.get_int("j_min", 10);
  const std::int64_t j_max = cfg.get_int("j_max", 22);
  if (j_min < 3 || j_max < j_min || j_max > 34) {
    throw InvalidInput("run_lil needs 3 <= j_min <= j_max <= 34");
  }
  const std::uint64_t seed = cfg.seed();
  const double tol = cfg.get_double("tol", 1e-6);

  LilOutcome out;
  out.sigma = sigma(dist, f, tol);
  out.rkhs_extreme =
      lil_constants(gamma_grid(dist,
                               equispaced_grid(static_cast<std::size_t>(
                                   cfg.grid_points())),
                               tol))
          .extreme;

  std::vector<double> path(std::size_t{1} << j_max);
  fill_path(dist, derive_seed(seed, 0, stream::kLil), path);
  double fsum = 0.0;
  std::size_t done = 0;
  std::vector<double> prefix;
  for (std::int64_t j = j_min; j <= j_max; ++j) {
    const std::size_t n = std::size_t{1} << j;
    for (; done < n; ++done) fsum += f.evaluate(path[done]);
    prefix.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(prefix.begin(), prefix.end());
    const double d = discrepancies_sorted(prefix).extreme;
    const double norm = lil_norm(static_cast<std::int64_t>(n));
    out.checkpoints.push_back(static_cast<std::int64_t>(n));
    out.f_stat.push_back(std::abs(fsum) / norm);
    out.d_stat.push_back(static_cast<double>(n) * d / norm);
  }
  const double f_max = *std::max_element(out.f_stat.begin(), out.f_stat.end());
  const double d_max = *std::max_element(out.d_stat.begin(), out.d_stat.end());
  if (out.sigma == 0.0) {
    out.reports.push_back(make_report("lil_f_degenerate", f_max, 0.0, 1e-12,
                                      Sidedness::two_sided, seed));
  } else {
    out.reports.push_back(band_report(
        "lil_f_max", f_max, cfg.get_double("band_lo", 0.2) * out.sigma,
        cfg.get_double("band_hi", 1.8) * out.sigma, seed));
  }
  out.reports.push_back(band_report(
      "lil_d_max", d_max, cfg.get_double("d_band_lo", 0.5) * out.rkhs_extreme,
      cfg.get_double("d_band_hi", 2.0) * out.rkhs_extreme, seed));
  stamp(out.reports, 0, t0);
  return out;
}

PsiOutcome run_psi_decay(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const StepDistribution dist = cfg.make_step();
  if (dist.is_lattice() && dist.is_degenerate()) {
    throw Unsupported("psi of a Dirac step does not decay; no slope");
  }
  const auto ks =
      cfg.get_int_list("k_list", {16, 32, 64, 128, 256, 512, 1024});
  const double mass_tol = cfg.get_double("mass_tol", kDefaultMassTol);
  PsiOutcome out;
  std::vector<double> v;
  for (std::int64_t k : ks) {
    out.values.push_back(psi_exact(dist, k, mass_tol));
    v.push_back(out.values.back().value);
  }
  out.fit = fit_decay(ks, v);
  if (out.fit.exact_zero) {
    out.reports.push_back(make_report("psi_exact_zero", 0.0, 0.0, 0.0,
                                      Sidedness::two_sided, cfg.seed()));
  } else {
    out.reports.push_back(band_report("psi_slope", out.fit.slope,
                                      cfg.get_double("slope_lo", -0.65),
                                      cfg.get_double("slope_hi", -0.35),
                                      cfg.seed()));
  }
  stamp(out.reports, 0, t0);
  return out;
}

std::vector<VarianceScanRow> run_variance_scan(const ExperimentConfig& cfg) {
  const StepDistribution dist = cfg.make_step();
  const PeriodicBVFunction f = cfg.make_function();
  const std::int64_t H = cfg.get_int("h", 0);
  std::vector<VarianceScanRow> rows;
  for (std::int64_t n : cfg.get_int_list("n_list", {256, 1024, 4096})) {
    const WindowVariance w = window_variance_spectral(dist, f, 0, n, H);
    rows.push_back({n, w.value / static_cast<double>(n),
                    w.tail_estimate / static_cast<double>(n), w.H});
  }
  return rows;
}

AtomicLaw random_atomic_law(Rng& rng, std::size_t max_atoms) {
  const std::size_t n =
      1 + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(max_atoms));
  std::vector<double> xs(n), ps(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform01();
    ps[i] = 0.05 + rng.uniform01();
    total += ps[i];
  }
  for (double& p : ps) p /= total;
  // Renormalized weights can miss 1 by an ulp or two; that is within the
  // constructor's 1e-12.
  return AtomicLaw::from_points(std::move(xs), std::move(ps));
}

PeriodicBVFunction random_bv_function(Rng& rng) {
  if (rng.uniform01() < 0.5) {
    const std::size_t pieces = 1 + static_cast<std::size_t>(rng.uniform01() * 6);
    std::vector<double> breaks(pieces), values(pieces);
    for (double& b : breaks) b = rng.uniform01();
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    values.resize(breaks.size());
    for (double& v : values) v = rng.normal();
    return PeriodicBVFunction::centered_piecewise(std::move(breaks),
                                                  std::move(values));
  }
  std::map<std::int64_t, std::complex<double>> c;
  const auto degree = 1 + static_cast<std::int64_t>(rng.uniform01() * 5);
  for (std::int64_t h = 1; h <= degree; ++h) {
    c[h] = {0.5 * rng.normal(), 0.5 * rng.normal()};
  }
  return PeriodicBVFunction::trig(c);
}

std::vector<TestReport> run_coupling(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const std::uint64_t seed = cfg.seed();
  const std::int64_t draws = cfg.get_int("draws", 100000);
  if (draws < 1) throw InvalidInput("draws must be >= 1");
  Rng rng(derive_seed(seed, 0, stream::kCouplingAux));

  QuantileView law = QuantileView::uniform();
  if (cfg.has("law_a")) {
    law = cfg.make_law("law_a");
  } else {
    std::vector<double> xs(5), ps(5);
    double total = 0.0;
    for (int i = 0; i < 5; ++i) {
      xs[static_cast<std::size_t>(i)] = rng.uniform01();
      ps[static_cast<std::size_t>(i)] = 0.1 + rng.uniform01();
      total += ps[static_cast<std::size_t>(i)];
    }
    for (double& p : ps) p /= total;
    law = QuantileView(AtomicLaw::from_points(xs, ps));
  }
  const double dkol = law.kolmogorov_distance();
  std::vector<double> us(static_cast<std::size_t>(draws));
  std::int64_t violations = 0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const double x = law.quantile(1.0 - rng.uniform01());
    const double u = couple_to_uniform(law, rng.uniform01(), x);
    if (std::abs(u - x) > dkol) ++violations;
    us[static_cast<std::size_t>(i)] = u;
  }
  const double crit = cfg.has("ks_threshold")
                          ? cfg.get_double("ks_threshold", 0.0)
                          : ks_critical_value(cfg.get_double("ks_level", 1e-3),
                                              static_cast<double>(draws));
  std::vector<TestReport> out;
  out.push_back(make_report("coupling_ks", ks_one_sample(us, uniform_cdf), crit,
                            0.0, Sidedness::upper, seed));
  out.push_back(make_report("coupling_bound_violations",
                            static_cast<double>(violations), 0.0, 0.0,
                            Sidedness::two_sided, seed));
  stamp(out, 0, t0);
  return out;
}

std::vector<TestReport> run_duality(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const std::uint64_t seed = cfg.seed();
  const std::int64_t n_laws = cfg.get_int("laws", 20);
  const auto max_atoms = static_cast<std::size_t>(cfg.get_int("max_atoms", 50));
  Rng rng(derive_seed(seed, 1, stream::kCouplingAux));
  std::vector<QuantileView> laws;
  for (std::int64_t i = 0; i < n_laws; ++i) {
    laws.emplace_back(random_atomic_law(rng, max_atoms));
  }
  const QuantileView unif = QuantileView::uniform();
  double worst = 0.0;
  std::int64_t order_violations = 0;
  auto ordered = [&](const QuantileView& a, const QuantileView& b) {
    const double w1 = wasserstein_p(a, b, 1.0);
    const double w2 = wasserstein_p(a, b, 2.0);
    const double wi = wasserstein_p(a, b, INFINITY);
    // 1e-12 relative slack for rounding when the three coincide.
    const double slack = 1e-12 * std::max(wi, 1e-300);
    return w1 <= w2 + slack && w2 <= wi + slack;
  };
  for (std::size_t i = 0; i < laws.size(); ++i) {
    worst = std::max(worst, std::abs(wasserstein_p(laws[i], unif, INFINITY) -
                                     laws[i].kolmogorov_distance()));
    if (!ordered(laws[i], unif)) ++order_violations;
    if (i + 1 < laws.size() && !ordered(laws[i], laws[i + 1])) {
      ++order_violations;
    }
  }
  std::vector<TestReport> out;
  out.push_back(make_report("duality_max_abs_diff", worst, 0.0, 1e-12,
                            Sidedness::upper, seed));
  out.push_back(make_report("wasserstein_order_violations",
                            static_cast<double>(order_violations), 0.0, 0.0,
                            Sidedness::two_sided, seed));
  stamp(out, 0, t0);
  return out;
}

std::vector<TestReport> run_koksma(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const std::uint64_t seed = cfg.seed();
  const std::int64_t pairs = cfg.get_int("pairs", 100);
  const auto max_atoms = static_cast<std::size_t>(cfg.get_int("max_atoms", 50));
  Rng rng(derive_seed(seed, 2, stream::kCouplingAux));
  std::int64_t violations = 0;
  for (std::int64_t i = 0; i < pairs; ++i) {
    const PeriodicBVFunction f = random_bv_function(rng);
    const QuantileView law(random_atomic_law(rng, max_atoms));
    const KoksmaGap g = koksma_gap(f, law);
    if (g.lhs > g.rhs + 1e-12) ++violations;
  }
  std::vector<TestReport> out;
  out.push_back(make_report("koksma_violations",
                            static_cast<double>(violations), 0.0, 0.0,
                            Sidedness::two_sided, seed));
  stamp(out, 0, t0);
  return out;
}

BlockOutcome run_block_coupling(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const StepDistribution dist = cfg.make_step();
  const PeriodicBVFunction f = cfg.make_function();
  const std::uint64_t seed = cfg.seed();
  const std::int64_t blocks = cfg.get_int("blocks", 10000);

  BlockOutcome out;
  BlockScheme scheme;
  if (cfg.has("block") || cfg.has("gap")) {
    scheme = BlockScheme::constant(cfg.get_int("block", 64),
                                   cfg.get_int("gap", 64), blocks);
  } else {
    if (cfg.has("delta")) {
      out.delta_fit = cfg.get_double("delta", 0.5);
    } else if (dist.is_lattice()) {
      const std::int64_t ks[] = {16, 32, 64, 128, 256, 512, 1024};
      out.delta_fit = psi_decay(dist, ks).delta_hat;
    } else {
      out.delta_fit = 0.95;  // psi vanishes identically
    }
    // The block sizes need 0 < delta < 1; models outside the standing
    // decay assumption get the nearest admissible value.
    out.delta_used = std::clamp(out.delta_fit, 0.1, 0.95);
    scheme = BlockScheme::power_law(out.delta_used, blocks);
  }
  BlockCouplingOptions opts;
  opts.f = &f;
  out.result = block_couple(dist, scheme, seed, opts);

  const auto& r = out.result;
  out.reports.push_back(make_report("block_delta_violations",
                                    static_cast<double>(r.violations), 0.0,
                                    0.0, Sidedness::two_sided, seed));
  if (r.first_components.size() >= 3) {
    const std::span<const double> later(r.first_components.data() + 1,
                                        r.first_components.size() - 1);
    out.reports.push_back(make_report(
        "block_uniformity_ks", ks_one_sample(later, uniform_cdf),
        cfg.get_double("ks_threshold", 0.02), 0.0, Sidedness::upper, seed));
    const std::span<const double> sums(r.block_sums.data() + 1,
                                       r.block_sums.size() - 1);
    const double corr =
        pearson(sums.first(sums.size() - 1), sums.subspan(1));
    out.reports.push_back(make_report("block_adjacent_corr", std::abs(corr),
                                      cfg.get_double("corr_threshold", 0.05),
                                      0.0, Sidedness::upper, seed));
  }
  stamp(out.reports, 0, t0);
  return out;
}

}  // namespace modwalk
