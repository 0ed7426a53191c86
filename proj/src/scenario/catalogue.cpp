#include "solcoll/scenario/catalogue.hpp"

#include <sstream>

#include "solcoll/core/error.hpp"

namespace solcoll::scenario {

const std::vector<ScenarioEntry>& scenario_catalogue() {
  static const std::vector<ScenarioEntry> entries = {
      {"fragmentation-at-rest",
       "static pair at d = 32: lambda(t) against the closed form, Husimi Q at t = 0, 13, 50",
       {{"pipeline", "fragmentation"},
        {"n_sol", "1000"},
        {"u0", "-0.002"},
        {"d_ini", "32"},
        {"v_ini", "0"},
        {"phi", "0"},
        {"t_final", "100"},
        {"dt", "0.1"},
        {"number_statistics", "poissonian"},
        {"q_times", "0, 13, 50"},
        {"snapshot_stride", "50"}},
       {"u0", "number_statistics"}},
      {"collision-pre-frag",
       "forced collision at t_coll = 40 < t_frag, phi = 0 and pi",
       {{"pipeline", "collision"},
        {"n_sol", "1000"},
        {"u0", "-0.002"},
        {"d_ini", "32"},
        {"v_ini", "0.4"},
        {"phases", "0, pi"},
        {"t_final", "100"},
        {"dt", "0.002"},
        {"snapshot_stride", "250"},
        {"twomode_dt", "0.02"},
        {"number_statistics", "fixed"},
        {"d_source", "gpe"},
        {"collision_window", "15"}},
       {"u0", "d_ini", "v_ini", "t_final", "number_statistics", "collision_window"}},
      {"collision-post-frag",
       "forced collision at t_coll = 80 > t_frag, phi = 0 and pi",
       {{"pipeline", "collision"},
        {"n_sol", "1000"},
        {"u0", "-0.002"},
        {"d_ini", "32"},
        {"v_ini", "0.2"},
        {"phases", "0, pi"},
        {"t_final", "140"},
        {"dt", "0.002"},
        {"snapshot_stride", "250"},
        {"twomode_dt", "0.02"},
        {"number_statistics", "fixed"},
        {"d_source", "gpe"},
        {"collision_window", "30"}},
       {"u0", "d_ini", "v_ini", "t_final", "number_statistics", "collision_window"}},
      {"postcollision-kinematics",
       "post-fragmentation collision: rho_n before and after, v(n), mean kinetic gain",
       {{"pipeline", "kinematics"},
        {"n_sol", "1000"},
        {"u0", "-0.002"},
        {"d_ini", "32"},
        {"v_ini", "0.2"},
        {"phases", "0"},
        {"t_final", "140"},
        {"dt", "0.002"},
        {"snapshot_stride", "250"},
        {"twomode_dt", "0.02"},
        {"number_statistics", "fixed"},
        {"d_source", "gpe"},
        {"collision_window", "30"}},
       {"u0", "d_ini", "v_ini", "t_final", "number_statistics", "collision_window"}},
      {"custom", "built-in defaults; choose the pipeline with the 'pipeline' key", {}, {}},
  };
  return entries;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& e : scenario_catalogue()) out.push_back(e.name);
  return out;
}

const ScenarioEntry& find_scenario(const std::string& name) {
  for (const auto& e : scenario_catalogue())
    if (e.name == name) return e;
  std::ostringstream msg;
  msg << "unknown scenario '" << name << "'; valid scenarios:";
  for (const auto& n : scenario_names()) msg << ' ' << n;
  throw InvalidArgument(msg.str());
}

namespace {

KeyValueMap to_map(const std::vector<std::pair<std::string, std::string>>& params) {
  KeyValueMap kv;
  for (const auto& [k, v] : params) kv[k] = ConfigEntry{v, 0};
  return kv;
}

}  // namespace

ScenarioConfig scenario_defaults(const std::string& name) {
  const auto& entry = find_scenario(name);
  ScenarioConfig cfg;
  apply_overrides(cfg, to_map(entry.params));
  cfg.scenario = name;
  return cfg;
}

ResolvedConfig resolve(const KeyValueMap& kv) {
  std::string name = "custom";
  if (auto it = kv.find("scenario"); it != kv.end()) {
    name = it->second.value;
    try {
      find_scenario(name);
    } catch (const InvalidArgument& ex) {
      throw ConfigError(ex.what(), it->second.line);
    }
  }
  ResolvedConfig r;
  r.config = scenario_defaults(name);
  apply_overrides(r.config, kv);
  for (const auto& key : find_scenario(name).inferred)
    if (!kv.contains(key)) r.inferred.insert(key);
  return r;
}

ResolvedConfig load_config(const std::string& path) { return resolve(parse_key_values_file(path)); }

}  // namespace solcoll::scenario
