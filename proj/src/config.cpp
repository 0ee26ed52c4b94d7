#include "modwalk/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "modwalk/error.hpp"

namespace modwalk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("cannot read '" + s + "' as a number (" + what + ")");
  }
}

std::int64_t to_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // Accept integral values written as 1e6.
    const double d = to_double(s, what);
    if (d != std::floor(d) || std::abs(d) > 9.0e18) {
      throw InvalidInput("cannot read '" + s + "' as an integer (" + what + ")");
    }
    return static_cast<std::int64_t>(d);
  }
  return v;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::known_keys() {
  static const std::vector<std::string> keys = {
      // model
      "kind", "atoms", "beta", "cutoff", "alpha", "alpha_tail",
      "precision_bits", "f", "g", "law_a", "law_b",
      // sizes and seeds
      "n", "m", "seed", "grid", "tol", "k", "kmax", "k_list", "n_list", "h",
      "j_min", "j_max", "q_max", "p", "blocks", "block", "gap", "delta",
      "draws", "laws", "max_atoms", "pairs", "engine", "mass_tol",
      "functional", "walk_functionals",
      // pass thresholds
      "ks_level", "ks_threshold", "ks_widen", "band_lo", "band_hi",
      "d_band_lo", "d_band_hi", "slope_lo", "slope_hi", "corr_threshold"};
  return keys;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(lineno) +
                         ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw InvalidInput("unknown config key '" + key + "'");
  }
  values_[key] = value;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& def) const {
  const auto it = values_.find(key);
  return it == values_.end() ? def : it->second;
}

std::int64_t ExperimentConfig::get_int(const std::string& key,
                                       std::int64_t def) const {
  const auto it = values_.find(key);
  return it == values_.end() ? def : to_int(it->second, key);
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key,
                                        std::uint64_t def) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::uint64_t v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("cannot read '" + s + "' as an unsigned integer (" +
                       key + ")");
  }
  return v;
}

double ExperimentConfig::get_double(const std::string& key, double def) const {
  const auto it = values_.find(key);
  return it == values_.end() ? def : to_double(it->second, key);
}

std::vector<std::int64_t> ExperimentConfig::get_int_list(
    const std::string& key, std::vector<std::int64_t> def) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::vector<std::int64_t> out;
  for (const auto& s : split(it->second, ',')) out.push_back(to_int(s, key));
  return out;
}

IrrationalAlpha ExperimentConfig::make_alpha() const {
  const std::string a = get_string("alpha", "golden");
  const int bits = static_cast<int>(
      get_int("precision_bits", IrrationalAlpha::kDefaultPrecisionBits));
  if (a == "golden") return IrrationalAlpha::golden(bits);
  if (a == "sqrt2") return IrrationalAlpha::sqrt2_minus_1(bits);
  std::vector<std::uint64_t> q;
  for (const auto& s : split(a, ',')) {
    const std::int64_t v = to_int(s, "alpha");
    if (v < 1) throw InvalidInput("continued-fraction quotients must be >= 1");
    q.push_back(static_cast<std::uint64_t>(v));
  }
  const std::string tail = get_string("alpha_tail", "periodic");
  CfTail t;
  if (tail == "periodic") {
    t = CfTail::periodic;
  } else if (tail == "ones") {
    t = CfTail::ones;
  } else if (tail == "none") {
    t = CfTail::none;
  } else {
    throw InvalidInput("alpha_tail must be periodic, ones or none");
  }
  return IrrationalAlpha::from_cf(q, bits, t);
}

StepDistribution ExperimentConfig::make_step() const {
  const std::string kind = get_string("kind", "lattice");
  if (kind == "uniform") return StepDistribution::continuous_uniform();
  if (kind == "heavy_tail") {
    return StepDistribution::heavy_tail(get_double("beta", 1.5),
                                        get_int("cutoff", 100000),
                                        make_alpha());
  }
  if (kind == "dirac") {
    return StepDistribution::dirac(to_int(get_string("atoms", "1"), "atoms"),
                                   make_alpha());
  }
  if (kind != "lattice") {
    throw InvalidInput("kind must be lattice, heavy_tail, uniform or dirac");
  }
  std::vector<StepAtom> atoms;
  for (const auto& item : split(get_string("atoms", "1:0.5,-1:0.5"), ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw InvalidInput("lattice atoms are written value:prob");
    }
    atoms.push_back({to_int(trim(item.substr(0, colon)), "atoms"),
                     to_double(trim(item.substr(colon + 1)), "atoms")});
  }
  return StepDistribution::lattice(std::move(atoms), make_alpha());
}

PeriodicBVFunction ExperimentConfig::make_function(
    const std::string& key) const {
  return parse_function(get_string(key, "indicator 0 0.5"));
}

QuantileView ExperimentConfig::make_law(const std::string& key) const {
  return parse_law(get_string(key, "uniform"));
}

void ExperimentConfig::validate() const {
  if (n() < 1 || m() < 1) throw InvalidInput("n and m must be >= 1");
  (void)make_step();
  (void)make_function();
}

PeriodicBVFunction parse_function(const std::string& text) {
  std::istringstream is(text);
  std::string head;
  is >> head;
  std::string rest;
  std::getline(is, rest);
  rest = trim(rest);
  if (head == "zero") return PeriodicBVFunction{};
  if (head == "indicator") {
    std::istringstream r(rest);
    std::string a, b;
    r >> a >> b;
    return centered_indicator(to_double(a, "indicator"),
                              to_double(b, "indicator"));
  }
  if (head == "trig") {
    std::map<std::int64_t, std::complex<double>> c;
    for (const auto& item : split(rest, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() < 2 || parts.size() > 3) {
        throw InvalidInput("trig terms are written h:re or h:re:im");
      }
      const std::int64_t h = to_int(parts[0], "trig");
      const double re = to_double(parts[1], "trig");
      const double im = parts.size() == 3 ? to_double(parts[2], "trig") : 0.0;
      c[h] = {re, im};
    }
    return PeriodicBVFunction::trig(c);
  }
  if (head == "piecewise") {
    std::vector<double> breaks, values;
    for (const auto& item : split(rest, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) {
        throw InvalidInput("piecewise pieces are written break:value");
      }
      breaks.push_back(to_double(parts[0], "piecewise"));
      values.push_back(to_double(parts[1], "piecewise"));
    }
    return PeriodicBVFunction::centered_piecewise(std::move(breaks),
                                                  std::move(values));
  }
  throw InvalidInput("unknown function '" + text + "'");
}

QuantileView parse_law(const std::string& text) {
  const std::string s = trim(text);
  if (s == "uniform") return QuantileView::uniform();
  if (s.rfind("atoms", 0) != 0) {
    throw InvalidInput("law must be 'uniform' or 'atoms x:p,...'");
  }
  std::vector<double> xs, ps;
  for (const auto& item : split(s.substr(5), ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw InvalidInput("law atoms are written x:p");
    xs.push_back(to_double(parts[0], "law"));
    ps.push_back(to_double(parts[1], "law"));
  }
  return QuantileView(AtomicLaw::from_points(std::move(xs), std::move(ps)));
}

}  // namespace modwalk
