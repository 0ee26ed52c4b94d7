#pragma once

// Pass/fail records of the experiments and their CSV / JSON form.

#include <cstdint>
#include <string>
#include <vector>

namespace modwalk {

enum class Sidedness {
  two_sided,  ///< pass iff |observed - reference| <= tolerance
  upper,      ///< pass iff observed < reference + tolerance
  lower,      ///< pass iff observed > reference - tolerance
};

struct TestReport {
  std::string name;
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Sidedness sidedness = Sidedness::two_sided;
  bool pass = false;
  double runtime_s = 0.0;
  std::uint64_t seed = 0;

  /// Sets pass from the other fields.
  void evaluate();
};

TestReport make_report(std::string name, double observed, double reference,
                       double tolerance, Sidedness side, std::uint64_t seed);

enum class ReportFormat { csv, json };

struct ReportOptions {
  ReportFormat format = ReportFormat::csv;
  /// Wall-clock time breaks bit-identical reruns, so it is opt-in.
  bool include_runtime = false;
};

std::string format_reports(const std::vector<TestReport>& reports,
                           const ReportOptions& opts = {});
void emit_report(const std::vector<TestReport>& reports,
                 const std::string& path, const ReportOptions& opts = {});
/// Inverse of format_reports for either format.
std::vector<TestReport> parse_reports(const std::string& text,
                                      ReportFormat format);

bool all_pass(const std::vector<TestReport>& reports);

const char* sidedness_name(Sidedness s);

}  // namespace modwalk
