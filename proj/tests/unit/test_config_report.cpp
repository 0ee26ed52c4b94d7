#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modwalk/config.hpp"
#include "modwalk/error.hpp"
#include "modwalk/report.hpp"

using namespace modwalk;

TEST_CASE("config parsing") {
  const auto cfg = ExperimentConfig::parse(
      "# model\n"
      "kind = lattice\n"
      "atoms = 1:0.5, -1:0.5   # simple walk\n"
      "alpha = golden\n"
      "n = 4096\n"
      "f = trig 1:0.5:0.25, 3:-0.1\n"
      "k_list = 1, 2, 4\n");
  CHECK(cfg.n() == 4096);
  CHECK(cfg.m() == 2000);
  CHECK(cfg.seed() == 1);
  CHECK(cfg.get_int_list("k_list", {}) == std::vector<std::int64_t>{1, 2, 4});
  const auto d = cfg.make_step();
  CHECK(d.atoms().size() == 2);
  CHECK(d.alpha()->value() == IrrationalAlpha::golden().value());
  const auto f = cfg.make_function();
  CHECK(f.fourier_coeff(1) == std::complex<double>(0.5, 0.25));
  CHECK(f.fourier_coeff(-3) == std::complex<double>(-0.1, 0.0));

  CHECK_THROWS_AS(ExperimentConfig::parse("bogus = 1\n"), InvalidInput);
  CHECK_THROWS_AS(ExperimentConfig::parse("n 5\n"), InvalidInput);
  CHECK_THROWS_AS(ExperimentConfig::parse("n = five\n").n(), InvalidInput);
  CHECK_THROWS_AS(ExperimentConfig::parse("n = 0\n").validate(), InvalidInput);
  CHECK_THROWS_AS(ExperimentConfig::parse("kind = circle\n").make_step(),
                  InvalidInput);
}

TEST_CASE("function and law notation") {
  const auto ind = parse_function("indicator 0.2 0.7");
  CHECK(ind.evaluate(0.3) == doctest::Approx(0.5));
  CHECK(parse_function("zero").is_zero());
  const auto pw = parse_function("piecewise 0:1, 0.5:-1");
  CHECK(pw.evaluate(0.25) == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_function("wave 3"), InvalidInput);

  CHECK(parse_law("uniform").is_uniform());
  const auto law = parse_law("atoms 0.25:0.75, 0.75:0.25");
  REQUIRE_FALSE(law.is_uniform());
  CHECK(law.atomic()->size() == 2);
  CHECK_THROWS_AS(parse_law("atoms 0.25:0.5"), InvalidInput);

  const auto cfg = ExperimentConfig::parse(
      "kind = heavy_tail\nbeta = 0.5\ncutoff = 100\nalpha = 1,2\n"
      "alpha_tail = ones\n");
  const auto d = cfg.make_step();
  CHECK(d.kind() == StepDistribution::Kind::heavy_tail_lattice);
  CHECK(d.alpha()->value() == doctest::Approx(1.0 / (1 + 1.0 / (2 + 0.6180339887))));
  CHECK(ExperimentConfig::parse("kind = uniform\n").make_step().kind() ==
        StepDistribution::Kind::continuous_uniform);
  CHECK(ExperimentConfig::parse("kind = dirac\natoms = 2\n").make_step().is_degenerate());
}

TEST_CASE("report evaluation") {
  CHECK(make_report("a", 1.0, 1.0, 0.0, Sidedness::two_sided, 1).pass);
  CHECK_FALSE(make_report("a", 1.1, 1.0, 0.05, Sidedness::two_sided, 1).pass);
  CHECK(make_report("a", 0.03, 0.044, 0.0, Sidedness::upper, 1).pass);
  CHECK_FALSE(make_report("a", 0.044, 0.044, 0.0, Sidedness::upper, 1).pass);
  CHECK(make_report("a", 2.0, 1.0, 0.0, Sidedness::lower, 1).pass);
  CHECK_FALSE(make_report("a", NAN, 1.0, 1.0, Sidedness::upper, 1).pass);
}

TEST_CASE("report formats") {
  std::vector<TestReport> rs{
      make_report("clt_ks", 0.0123456789012345, 0.0437, 0.0, Sidedness::upper, 7),
      make_report("bound", INFINITY, 0.0, 1e-12, Sidedness::two_sided, 7),
      make_report("third", -1.0 / 3, 1e-300, 0.5, Sidedness::lower, 1ULL << 63)};
  CHECK_THROWS_AS(format_reports({make_report("a,b", 0, 0, 0, Sidedness::upper, 1)}),
                  InvalidInput);
  const std::string empty_csv = format_reports({});
  CHECK(std::count(empty_csv.begin(), empty_csv.end(), '\n') == 1);
  CHECK(empty_csv.rfind("name,", 0) == 0);

  for (ReportFormat fmt : {ReportFormat::csv, ReportFormat::json}) {
    ReportOptions opts;
    opts.format = fmt;
    const std::string text = format_reports(rs, opts);
    CHECK(text == format_reports(rs, opts));
    const auto back = parse_reports(text, fmt);
    REQUIRE(back.size() == rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(back[i].name == rs[i].name);
      CHECK(back[i].observed == rs[i].observed);
      CHECK(back[i].reference == rs[i].reference);
      CHECK(back[i].tolerance == rs[i].tolerance);
      CHECK(back[i].sidedness == rs[i].sidedness);
      CHECK(back[i].pass == rs[i].pass);
      CHECK(back[i].seed == rs[i].seed);
    }
  }
  ReportOptions j;
  j.format = ReportFormat::json;
  const auto a = parse_reports(format_reports(rs), ReportFormat::csv);
  const auto b = parse_reports(format_reports(rs, j), ReportFormat::json);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(a[i].observed == b[i].observed);
  CHECK_FALSE(all_pass(rs));
  CHECK(all_pass({}));

  const auto path = std::filesystem::temp_directory_path() / "modwalk_report_test.csv";
  emit_report(rs, path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == format_reports(rs));
  std::filesystem::remove(path);
}
