#pragma once

// Flat key=value experiment configuration.
//
//   # comment
//   kind = lattice            # lattice | heavy_tail | uniform | dirac
//   atoms = 1:0.5,-1:0.5      # value:prob (lattice), value (dirac)
//   beta = 1.5                # heavy_tail
//   cutoff = 1000000          # heavy_tail
//   alpha = 1                 # continued-fraction quotients, or golden | sqrt2
//   alpha_tail = periodic     # periodic | ones | none
//   precision_bits = 256
//   f = indicator 0 0.5       # indicator a b | trig h:re[:im],... |
//                             # piecewise b:v,... (centered) | zero
//   n = 16384
//   m = 2000
//   seed = 1
//   grid = 257

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modwalk/bv_function.hpp"
#include "modwalk/coupling.hpp"
#include "modwalk/diophantine.hpp"
#include "modwalk/step_model.hpp"

namespace modwalk {

class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  /// Throws InvalidInput on malformed lines or unknown keys.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& values() const noexcept {
    return values_;
  }

  std::string get_string(const std::string& key, const std::string& def) const;
  std::int64_t get_int(const std::string& key, std::int64_t def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  double get_double(const std::string& key, double def) const;
  std::vector<std::int64_t> get_int_list(const std::string& key,
                                         std::vector<std::int64_t> def) const;

  // Common fields with their defaults.
  std::int64_t n() const { return get_int("n", 16384); }
  std::int64_t m() const { return get_int("m", 2000); }
  std::uint64_t seed() const { return get_u64("seed", 1); }
  std::int64_t grid_points() const { return get_int("grid", 257); }

  IrrationalAlpha make_alpha() const;
  StepDistribution make_step() const;
  PeriodicBVFunction make_function(const std::string& key = "f") const;
  /// "uniform" or "atoms x:p,x:p,...".
  QuantileView make_law(const std::string& key) const;

  /// Checks that the step and function resolve and n, m >= 1.
  void validate() const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

PeriodicBVFunction parse_function(const std::string& text);
QuantileView parse_law(const std::string& text);

}  // namespace modwalk
