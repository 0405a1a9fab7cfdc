#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dendrite/measure.hpp"

namespace dendrite {

// Quadrature refinement presets.
struct TolerancePreset {
  std::string name;
  int max_depth = 12;
  double relative_gap = 1e-4;
  static TolerancePreset named(const std::string& name);  // strict, default, loose
};

struct RunConfig {
  Rational s0 = Rational(1, 2);
  WeightVector weights = WeightVector::equal();
  int max_level = 12;
  std::string tolerance = "default";
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  void validate() const;
  TolerancePreset preset() const { return TolerancePreset::named(tolerance); }
  // Rationals are stored as "p/q" strings so the file form is lossless.
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);  // missing keys keep defaults
  // DENDRITE_MAX_LEVEL, when set, replaces max_level.
  void apply_environment();
};

// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& text);

// Runs the command line; returns the process exit code
// (0 ok, 1 verify failure, 2 usage, 3 validation, 4 capacity).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dendrite
