#include "modwalk/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modwalk/error.hpp"

namespace modwalk {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return std::stod(s);
}

Sidedness parse_side(const std::string& s) {
  if (s == "two_sided") return Sidedness::two_sided;
  if (s == "upper") return Sidedness::upper;
  if (s == "lower") return Sidedness::lower;
  throw InvalidInput("unknown sidedness '" + s + "'");
}

// JSON has no inf/nan; such values travel as strings.
nlohmann::ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

double from_jnum(const nlohmann::ordered_json& j) {
  return j.is_string() ? parse_num(j.get<std::string>()) : j.get<double>();
}

}  // namespace

const char* sidedness_name(Sidedness s) {
  switch (s) {
    case Sidedness::two_sided:
      return "two_sided";
    case Sidedness::upper:
      return "upper";
    case Sidedness::lower:
      return "lower";
  }
  return "?";
}

void TestReport::evaluate() {
  switch (sidedness) {
    case Sidedness::two_sided:
      pass = std::abs(observed - reference) <= tolerance;
      break;
    case Sidedness::upper:
      pass = observed < reference + tolerance;
      break;
    case Sidedness::lower:
      pass = observed > reference - tolerance;
      break;
  }
}

TestReport make_report(std::string name, double observed, double reference,
                       double tolerance, Sidedness side, std::uint64_t seed) {
  TestReport r;
  r.name = std::move(name);
  r.observed = observed;
  r.reference = reference;
  r.tolerance = tolerance;
  r.sidedness = side;
  r.seed = seed;
  r.evaluate();
  return r;
}

std::string format_reports(const std::vector<TestReport>& reports,
                           const ReportOptions& opts) {
  if (opts.format == ReportFormat::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json o;
      o["name"] = r.name;
      o["observed"] = jnum(r.observed);
      o["reference"] = jnum(r.reference);
      o["tolerance"] = jnum(r.tolerance);
      o["sidedness"] = sidedness_name(r.sidedness);
      o["pass"] = r.pass;
      o["seed"] = r.seed;
      if (opts.include_runtime) o["runtime_s"] = jnum(r.runtime_s);
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "name,observed,reference,tolerance,sidedness,pass,seed";
  if (opts.include_runtime) os << ",runtime_s";
  os << "\n";
  for (const auto& r : reports) {
    if (r.name.find_first_of(",\"\n") != std::string::npos) {
      throw InvalidInput("report names may not contain commas or quotes");
    }
    os << r.name << ',' << num(r.observed) << ',' << num(r.reference) << ','
       << num(r.tolerance) << ',' << sidedness_name(r.sidedness) << ','
       << (r.pass ? "true" : "false") << ',' << r.seed;
    if (opts.include_runtime) os << ',' << num(r.runtime_s);
    os << "\n";
  }
  return os.str();
}

void emit_report(const std::vector<TestReport>& reports,
                 const std::string& path, const ReportOptions& opts) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write report to " + path);
  out << format_reports(reports, opts);
}

std::vector<TestReport> parse_reports(const std::string& text,
                                      ReportFormat format) {
  std::vector<TestReport> out;
  if (format == ReportFormat::json) {
    const auto arr = nlohmann::ordered_json::parse(text);
    for (const auto& o : arr) {
      TestReport r;
      r.name = o.at("name").get<std::string>();
      r.observed = from_jnum(o.at("observed"));
      r.reference = from_jnum(o.at("reference"));
      r.tolerance = from_jnum(o.at("tolerance"));
      r.sidedness = parse_side(o.at("sidedness").get<std::string>());
      r.pass = o.at("pass").get<bool>();
      r.seed = o.at("seed").get<std::uint64_t>();
      if (o.contains("runtime_s")) r.runtime_s = from_jnum(o.at("runtime_s"));
      out.push_back(std::move(r));
    }
    return out;
  }
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) return out;
  const bool runtime = line.find(",runtime_s") != std::string::npos;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != (runtime ? 8u : 7u)) {
      throw InvalidInput("malformed report row: " + line);
    }
    TestReport r;
    r.name = f[0];
    r.observed = parse_num(f[1]);
    r.reference = parse_num(f[2]);
    r.tolerance = parse_num(f[3]);
    r.sidedness = parse_side(f[4]);
    r.pass = f[5] == "true";
    r.seed = std::stoull(f[6]);
    if (runtime) r.runtime_s = parse_num(f[7]);
    out.push_back(std::move(r));
  }
  return out;
}

bool all_pass(const std::vector<TestReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace modwalk
