#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "solcoll/core/config.hpp"

namespace solcoll::scenario {

// A named bundle of parameters over one of the generic pipelines.
struct ScenarioEntry {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> params;
  // Keys whose values are choices made here rather than quantities stated
  // by the underlying physics setup.
  std::set<std::string> inferred;
};

const std::vector<ScenarioEntry>& scenario_catalogue();

std::vector<std::string> scenario_names();

// Throws InvalidArgument listing the valid names for an unknown scenario.
const ScenarioEntry& find_scenario(const std::string& name);

// Catalogue defaults for the named scenario ("custom" keeps the built-in
// ScenarioConfig defaults).
ScenarioConfig scenario_defaults(const std::string& name);

// Config file -> resolved config: the "scenario" key (default "custom")
// selects the base bundle, every other key overrides it. Also reports which
// keys kept an inferred catalogue value.
struct ResolvedConfig {
  ScenarioConfig config;
  std::set<std::string> inferred;
};

ResolvedConfig resolve(const KeyValueMap& kv);
ResolvedConfig load_config(const std::string& path);

}  // namespace solcoll::scenario
