// modwalk: command-line front end to the library and the experiments.
//
//   modwalk <subcommand> [--config FILE] [--seed U64] [--out PATH]
//                        [--threads N] [--set key=value ...]
//
// Experiment subcommands write their pass/fail reports (CSV, or JSON when
// --out ends in .json or --format json) and exit 0 iff every report passes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modwalk/covariance.hpp"
#include "modwalk/error.hpp"
#include "modwalk/experiments.hpp"
#include "modwalk/gaussian_limit.hpp"
#include "modwalk/parallel.hpp"
#include "modwalk/report.hpp"
#include "modwalk/walk_sim.hpp"

using namespace modwalk;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int threads = 0;
  std::string format;
  std::vector<std::string> sets;
};

ExperimentConfig load_config(const Common& c) {
  ExperimentConfig cfg =
      c.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed_set) cfg.set("seed", std::to_string(c.seed));
  return cfg;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ReportFormat format_of(const Common& c) {
  if (c.format == "json") return ReportFormat::json;
  if (c.format == "csv") return ReportFormat::csv;
  if (!c.format.empty()) throw InvalidInput("--format must be csv or json");
  return ends_with(c.out, ".json") ? ReportFormat::json : ReportFormat::csv;
}

// Writes `text` to --out, or to stdout without it.
void write_out(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw InvalidInput("cannot write " + c.out);
  os << text;
}

int finish_reports(const Common& c, const std::vector<TestReport>& reports) {
  ReportOptions opts;
  opts.format = format_of(c);
  write_out(c, format_reports(reports, opts));
  if (!c.out.empty()) {
    for (const auto& r : reports) {
      std::fprintf(stderr, "%s %s observed=%.6g reference=%.6g tol=%.3g\n",
                   r.pass ? "PASS" : "FAIL", r.name.c_str(), r.observed,
                   r.reference, r.tolerance);
    }
  }
  return all_pass(reports) ? 0 : 1;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_alpha(const Common& c) {
  const ExperimentConfig cfg = load_config(c);
  const IrrationalAlpha a = cfg.make_alpha();
  const TypeEstimate t =
      estimate_type(a, cfg.get_u64("q_max", 1000000));
  std::ostringstream os;
  os << "n,q,distance,local_exponent\n";
  for (std::size_t i = 0; i < t.per_convergent.size(); ++i) {
    const auto& r = t.per_convergent[i];
    os << i + 1 << ',' << r.q << ',' << csv_num(r.distance) << ','
       << csv_num(r.local_exponent) << '\n';
  }
  os << "# gamma_hat=" << csv_num(t.gamma_hat)
     << " gamma_fit=" << csv_num(t.gamma_fit) << '\n';
  write_out(c, os.str());
  return 0;
}

int cmd_psi(const Common& c) {
  const ExperimentConfig cfg = load_config(c);
  const StepDistribution dist = cfg.make_step();
  const std::int64_t kmax = cfg.get_int("kmax", 1024);
  const double mass_tol = cfg.get_double("mass_tol", kDefaultMassTol);
  std::ostringstream os;
  os << "k,psi,lower,upper\n";
  auto row = [&](std::int64_t k, double v, double slack) {
    os << k << ',' << csv_num(v) << ',' << csv_num(std::max(v - slack, 0.0))
       << ',' << csv_num(v + slack) << '\n';
  };
  if (!dist.is_lattice()) {
    for (std::int64_t k = 1; k <= kmax; ++k) row(k, 0.0, 0.0);
  } else {
    const IrrationalAlpha& alpha = *dist.alpha();
    for_each_power(dist, kmax, mass_tol,
                   [&](std::int64_t k, const IntegerLaw& law) {
                     const AtomicLaw a = AtomicLaw::from_integer_law(law, alpha);
                     row(k, a.kolmogorov_distance(), a.mass_deficit());
                   });
  }
  write_out(c, os.str());
  return 0;
}

int cmd_variance_scan(const Common& c) {
  const auto rows = run_variance_scan(load_config(c));
  std::ostringstream os;
  os << "n,per_step,tail_estimate,H\n";
  for (const auto& r : rows) {
    os << r.n << ',' << csv_num(r.per_step) << ',' << csv_num(r.tail_estimate)
       << ',' << r.H << '\n';
  }
  write_out(c, os.str());
  return 0;
}

std::string gamma_csv(const CovarianceGrid& g) {
  std::ostringstream os;
  const auto grid = g.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << (i ? "," : "") << csv_num(grid[i]);
  }
  os << '\n';
  for (Eigen::Index i = 0; i < g.matrix().rows(); ++i) {
    for (Eigen::Index j = 0; j < g.matrix().cols(); ++j) {
      os << (j ? "," : "") << csv_num(g.matrix()(i, j));
    }
    os << '\n';
  }
  return os.str();
}

CovarianceGrid read_gamma_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  auto row = [](const std::string& line) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    return v;
  };
  std::string line;
  std::getline(in, line);
  std::vector<double> grid = row(line);
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw InvalidInput("gamma file is truncated");
    const auto r = row(line);
    if (static_cast<Eigen::Index>(r.size()) != n) {
      throw InvalidInput("gamma file rows must match the grid");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = r[static_cast<std::size_t>(j)];
  }
  return CovarianceGrid(std::move(grid), std::move(m));
}

CovarianceGrid gamma_from_config(const ExperimentConfig& cfg) {
  return gamma_grid(cfg.make_step(),
                    equispaced_grid(static_cast<std::size_t>(cfg.grid_points())),
                    cfg.get_double("tol", 1e-6));
}

int cmd_gamma(const Common& c) {
  write_out(c, gamma_csv(gamma_from_config(load_config(c))));
  return 0;
}

int cmd_sigma(const Common& c) {
  const ExperimentConfig cfg = load_config(c);
  const StepDistribution dist = cfg.make_step();
  const PeriodicBVFunction f = cfg.make_function("f");
  const PeriodicBVFunction g = cfg.make_function(cfg.has("g") ? "g" : "f");
  std::ostringstream os;
  os << "method,value,sigma,terms,truncation_bound,stat_error\n";
  const CovarianceResult s = c_spectral(dist, f, g, cfg.get_double("tol", 1e-6));
  os << "spectral," << csv_num(s.value) << ','
     << csv_num(std::sqrt(std::max(s.value, 0.0))) << ',' << s.terms_used
     << ',' << csv_num(s.truncation_bound) << ",0\n";
  if (cfg.has("k")) {
    SeriesOptions opts;
    opts.seed = cfg.seed();
    opts.mass_tol = cfg.get_double("mass_tol", kDefaultMassTol);
    opts.mc_paths = cfg.m();
    const std::string engine = cfg.get_string("engine", "exact");
    if (engine != "exact" && engine != "mc") {
      throw InvalidInput("engine must be exact or mc");
    }
    const CovarianceResult r =
        c_series(dist, f, g, cfg.get_int("k", 200),
                 engine == "mc" ? SeriesEngine::mc : SeriesEngine::exact, opts);
    os << "series_" << engine << ',' << csv_num(r.value) << ','
       << csv_num(std::sqrt(std::max(r.value, 0.0))) << ',' << r.terms_used
       << ',' << csv_num(r.truncation_bound) << ',' << csv_num(r.stat_error)
       << '\n';
  }
  write_out(c, os.str());
  return 0;
}

int cmd_simulate(const Common& c, bool points) {
  const ExperimentConfig cfg = load_config(c);
  cfg.validate();
  const StepDistribution dist = cfg.make_step();
  std::ostringstream os;
  if (points) {
    const WalkPath p = simulate_path(dist, cfg.n(), replicate_seed(cfg.seed(), 0));
    os << "k,point\n";
    for (std::size_t k = 0; k < p.points.size(); ++k) {
      os << k + 1 << ',' << csv_num(p.points[k]) << '\n';
    }
  } else {
    const auto sums = simulate_functional_sums(dist, cfg.make_function(),
                                               cfg.n(), cfg.m(), cfg.seed());
    os << "replicate,sum\n";
    for (std::size_t j = 0; j < sums.size(); ++j) {
      os << j << ',' << csv_num(sums[j]) << '\n';
    }
  }
  write_out(c, os.str());
  return 0;
}

int cmd_limit(const Common& c, const std::string& gamma_path) {
  const ExperimentConfig cfg = load_config(c);
  const CovarianceGrid g =
      gamma_path.empty() ? gamma_from_config(cfg) : read_gamma_csv(gamma_path);
  const std::string which = cfg.get_string("functional", "sup");
  const GaussianPathBatch b = sample_paths(
      g, cfg.m(), derive_seed(cfg.seed(), 0, stream::kGaussianPath));
  std::ostringstream os;
  os << "path," << which << '\n';
  for (std::size_t m = 0; m < b.paths.size(); ++m) {
    const auto& p = b.paths[m];
    double v;
    if (which == "sup") {
      v = functional_sup_increment(p);
    } else if (which == "star" || which == "linf") {
      v = functional_lp(p, INFINITY, b.grid);
    } else if (which == "l1") {
      v = functional_lp(p, 1.0, b.grid);
    } else if (which == "l2") {
      v = functional_lp(p, 2.0, b.grid);
    } else {
      throw InvalidInput("functional must be sup, star, l1 or l2");
    }
    os << m << ',' << csv_num(v) << '\n';
  }
  const LilConstants lc = lil_constants(g);
  os << "# lil_extreme=" << csv_num(lc.extreme) << " lil_star="
     << csv_num(lc.star) << " lil_l2=" << csv_num(lc.l2) << '\n';
  write_out(c, os.str());
  return 0;
}

int cmd_wasserstein(const Common& c) {
  const ExperimentConfig cfg = load_config(c);
  if (!cfg.has("law_a")) return finish_reports(c, run_duality(cfg));
  const QuantileView a = cfg.make_law("law_a");
  const QuantileView b = cfg.make_law("law_b");
  std::ostringstream os;
  os << "p,w\n";
  const std::string p = cfg.get_string("p", "all");
  for (double q : {1.0, 2.0, HUGE_VAL}) {
    const std::string name = std::isinf(q) ? "inf" : csv_num(q);
    if (p != "all" && p != name) continue;
    os << name << ',' << csv_num(wasserstein_p(a, b, q)) << '\n';
  }
  write_out(c, os.str());
  return 0;
}

int cmd_coupling_demo(const Common& c) {
  const ExperimentConfig cfg = load_config(c);
  std::vector<TestReport> all = run_coupling(cfg);
  for (auto& r : run_koksma(cfg)) all.push_back(std::move(r));
  for (auto& r : run_block_coupling(cfg).reports) all.push_back(std::move(r));
  return finish_reports(c, all);
}

int cmd_report(const Common& c, const std::vector<std::string>& files) {
  std::vector<TestReport> all;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw InvalidInput("cannot open " + f);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto fmt = ends_with(f, ".json") ? ReportFormat::json : ReportFormat::csv;
    for (auto& r : parse_reports(ss.str(), fmt)) all.push_back(std::move(r));
  }
  std::size_t passed = 0;
  for (const auto& r : all) {
    std::printf("%s %s observed=%.6g reference=%.6g tol=%.3g\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.observed,
                r.reference, r.tolerance);
    passed += r.pass;
  }
  std::printf("%zu/%zu passed\n", passed, all.size());
  if (!c.out.empty()) {
    ReportOptions opts;
    opts.format = format_of(c);
    write_out(c, format_reports(all, opts));
  }
  return all_pass(all) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on the torus: limit theorems and their oracles"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "key=value experiment file")
        ->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          common.seed = s;
          common.seed_set = true;
        },
        "master seed (overrides the config)");
    sub->add_option("--out", common.out, "output path (stdout if absent)");
    sub->add_option("--threads", common.threads, "worker threads, 0 = auto")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--format", common.format, "csv or json");
    sub->add_option("--set", common.sets, "override a config key (key=value)");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"alpha", "convergents, ||q_n alpha|| and the Diophantine type"},
      {"psi", "exact psi(k) for k = 1..kmax with its interval"},
      {"variance-scan", "spectral window variance / N over n_list"},
      {"gamma", "Gamma(s,t) on an equispaced grid as a dense CSV"},
      {"sigma", "C(f,g) by the spectral method (and the series with k=K)"},
      {"simulate", "replicate sums N^-1/2 sum f(S_k), or one path's points"},
      {"clt", "CLT experiment"},
      {"fclt", "functional CLT for the discrepancies"},
      {"lil", "law of the iterated logarithm bands"},
      {"coupling-demo", "quantile coupling, Koksma bound, block coupling"},
      {"wasserstein", "W_p between law_a and law_b, or the duality check"},
      {"limit", "functionals of Gaussian limit paths"},
      {"report", "summarize report files; exit 0 iff all pass"},
  };
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subs) {
    apps[s.name] = app.add_subcommand(s.name, s.help);
    add_common(apps[s.name]);
  }
  bool points = false;
  apps["simulate"]->add_flag("--points", points, "emit the raw points of one path");
  std::string gamma_path;
  apps["limit"]->add_option("--gamma", gamma_path, "Gamma CSV from `gamma`")
      ->check(CLI::ExistingFile);
  std::vector<std::string> files;
  apps["report"]->add_option("files", files, "report files (CSV or JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    set_num_threads(common.threads);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "alpha") return cmd_alpha(common);
    if (cmd == "psi") return cmd_psi(common);
    if (cmd == "variance-scan") return cmd_variance_scan(common);
    if (cmd == "gamma") return cmd_gamma(common);
    if (cmd == "sigma") return cmd_sigma(common);
    if (cmd == "simulate") return cmd_simulate(common, points);
    if (cmd == "clt") return finish_reports(common, run_clt(load_config(common)).reports);
    if (cmd == "fclt") return finish_reports(common, run_fclt(load_config(common)).reports);
    if (cmd == "lil") return finish_reports(common, run_lil(load_config(common)).reports);
    if (cmd == "coupling-demo") return cmd_coupling_demo(common);
    if (cmd == "wasserstein") return cmd_wasserstein(common);
    if (cmd == "limit") return cmd_limit(common, gamma_path);
    if (cmd == "report") return cmd_report(common, files);
  } catch (const Error& e) {
    std::fprintf(stderr, "modwalk: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "modwalk: unexpected error: %s\n", e.what());
    return 3;
  }
  return 2;
}
