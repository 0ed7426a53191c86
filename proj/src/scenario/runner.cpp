#include "solcoll/scenario/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "output.hpp"
#include "solcoll/core/error.hpp"

#ifndef SOLCOLL_VERSION
#define SOLCOLL_VERSION "unknown"
#endif

namespace solcoll::scenario {

namespace fs = std::filesystem;

const char* library_version() { return SOLCOLL_VERSION; }

namespace detail {

OutputSet::OutputSet(const std::string& dir) : dir_(dir) {
  std::error_code ec;
  if (!fs::exists(dir_)) {
    fs::create_directories(dir_, ec);
    if (ec) throw InvalidArgument("cannot create output directory '" + dir + "': " + ec.message());
    created_dir_ = true;
  } else if (!fs::is_directory(dir_)) {
    throw InvalidArgument("output path '" + dir + "' is not a directory");
  }
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& name : registered_) fs::remove(dir_ / name, ec);
  if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
}

std::string OutputSet::path(const std::string& name) {
  registered_.push_back(name);
  return (dir_ / name).string();
}

std::unique_ptr<io::CsvWriter> OutputSet::csv(const std::string& name,
                                              const std::vector<std::string>& header) {
  return std::make_unique<io::CsvWriter>(path(name), header);
}

void OutputSet::record(const std::string& name, std::size_t rows) {
  files_.push_back({name, rows});
}

void OutputSet::record(const io::CsvWriter& w) {
  record(fs::path(w.path()).filename().string(), w.rows());
}

std::string phase_tag(double phi) {
  if (phi == 0.0) return "phi0";
  if (std::abs(phi - std::numbers::pi) < 1e-12) return "phipi";
  std::ostringstream s;
  s.precision(6);
  s << "phi" << phi;
  return s.str();
}

}  // namespace detail

std::string RunManifest::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = scenario;
  j["pipeline"] = pipeline;
  j["version"] = version;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : parameters)
    params[k] = ordered_json{{"value", v}, {"inferred", inferred.contains(k)}};
  j["parameters"] = params;
  j["duration_s"] = duration_s;
  ordered_json files_j = ordered_json::array();
  for (const auto& f : files) files_j.push_back({{"path", f.path}, {"rows", f.rows}});
  j["files"] = files_j;
  ordered_json sum = ordered_json::object();
  for (const auto& [k, v] : summary) {
    if (std::isfinite(v)) sum[k] = v;
    else sum[k] = nullptr;
  }
  j["summary"] = sum;
  j["labels"] = labels;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

RunManifest run_scenario(const ScenarioConfig& cfg, const std::set<std::string>& inferred) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.scenario = cfg.scenario;
  m.pipeline = cfg.pipeline;
  m.version = library_version();
  m.parameters = cfg.to_key_values();
  m.inferred = inferred;

  detail::OutputSet out(cfg.out_dir);
  detail::PipelineContext ctx{cfg, out, m};
  {
    std::ofstream f(out.path("config.resolved"));
    f << render_config(cfg);
    if (!f) throw InvalidArgument("cannot write config.resolved in " + cfg.out_dir);
    out.record("config.resolved", m.parameters.size());
  }
  if (cfg.pipeline == "fragmentation") detail::run_fragmentation(ctx);
  else if (cfg.pipeline == "collision") detail::run_collision(ctx, false);
  else if (cfg.pipeline == "kinematics") detail::run_collision(ctx, true);
  else throw InvalidArgument("unknown pipeline '" + cfg.pipeline + "'");

  m.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.files = out.files();
  m.files.push_back({"manifest.json", 0});
  {
    std::ofstream f(out.path("manifest.json"));
    f << m.to_json();
    if (!f) throw InvalidArgument("cannot write manifest.json in " + cfg.out_dir);
  }
  out.commit();
  return m;
}

}  // namespace solcoll::scenario
