#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "solcoll/core/grid.hpp"

namespace solcoll {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

// Ordered key -> value map read from a "key = value" file.
using KeyValueMap = std::map<std::string, ConfigEntry>;

// Syntax pass only: '#' starts a comment, blank lines are skipped, keys are
// [a-z0-9_]+, duplicate keys are rejected.
KeyValueMap parse_key_values(std::istream& in);
KeyValueMap parse_key_values_file(const std::string& path);

// Parameters of one scenario run. Every field can be set from a config file
// under the key listed in config_keys().
struct ScenarioConfig {
  std::string scenario = "custom";
  std::string pipeline = "fragmentation";  // fragmentation | collision | kinematics

  int n_sol = 1000;
  double u0 = -0.002;
  double d_ini = 32.0;
  double v_ini = 0.0;
  double phi = 0.0;
  std::vector<double> phases;  // relative phases swept by collision pipelines
  double t_final = 100.0;
  double dt = 0.1;
  Grid1D grid{-64.0, 64.0, 1024};
  std::string out_dir = "out";

  std::size_t snapshot_stride = 50;
  double twomode_dt = 0.02;
  std::string number_statistics = "fixed";  // fixed | poissonian
  std::string d_source = "gpe";             // gpe | ramp
  std::vector<double> q_times;
  std::size_t q_radial = 0;   // 0 picks a resolution from N_sol
  std::size_t q_angular = 0;
  double collision_window = 8.0;
  unsigned threads = 1;

  // Throws ConfigError describing the first violated invariant.
  void validate() const;

  // Full key = value rendering; parsing it back reproduces this object.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
};

const std::vector<std::string>& config_keys();

// Applies every entry to cfg. Unknown keys and malformed values throw
// ConfigError with the line number. The "scenario" key is applied as well.
void apply_overrides(ScenarioConfig& cfg, const KeyValueMap& kv);

// Reduces an angle to [0, 2pi).
double reduce_phase(double phi);

// Number formatting shared by configs, manifests and CSV output: 17
// significant digits so values round-trip exactly.
std::string format_double(double v);

std::string render_config(const ScenarioConfig& cfg);

}  // namespace solcoll
