#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "solcoll/io/csv.hpp"
#include "solcoll/scenario/runner.hpp"

namespace solcoll::scenario::detail {

// Tracks every file a run creates so a failed run can be rolled back.
class OutputSet {
 public:
  explicit OutputSet(const std::string& dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  std::string path(const std::string& name);  // registers name
  std::unique_ptr<io::CsvWriter> csv(const std::string& name, const std::vector<std::string>& header);
  void record(const std::string& name, std::size_t rows);
  void record(const io::CsvWriter& w);

  const std::vector<EmittedFile>& files() const noexcept { return files_; }
  void commit() noexcept { committed_ = true; }

 private:
  std::filesystem::path dir_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<std::string> registered_;
  std::vector<EmittedFile> files_;
};

struct PipelineContext {
  const ScenarioConfig& cfg;
  OutputSet& out;
  RunManifest& manifest;
};

void run_fragmentation(PipelineContext& ctx);
void run_collision(PipelineContext& ctx, bool kinematics);

// File-name tag for a relative phase: phi0, phipi or phi<value>.
std::string phase_tag(double phi);

}  // namespace solcoll::scenario::detail
