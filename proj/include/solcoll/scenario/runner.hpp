#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "solcoll/core/config.hpp"

namespace solcoll::scenario {

struct EmittedFile {
  std::string path;  // relative to the output directory
  std::size_t rows = 0;
};

struct RunManifest {
  std::string scenario;
  std::string pipeline;
  std::string version;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::set<std::string> inferred;
  double duration_s = 0.0;
  std::vector<EmittedFile> files;
  std::vector<std::string> warnings;
  std::map<std::string, double> summary;  // headline numbers of the run
  std::map<std::string, std::string> labels;

  std::string to_json() const;
};

const char* library_version();

// Runs the pipeline selected by cfg.pipeline and writes every artifact plus
// manifest.json into cfg.out_dir. On failure all files written by this run
// are removed and the exception propagates.
RunManifest run_scenario(const ScenarioConfig& cfg, const std::set<std::string>& inferred = {});

}  // namespace solcoll::scenario
