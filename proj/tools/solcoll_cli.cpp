#include <CLI11.hpp>
#include <iostream>

#include "solcoll/core/error.hpp"
#include "solcoll/scenario/catalogue.hpp"
#include "solcoll/scenario/runner.hpp"

using namespace solcoll;

namespace {

scenario::ResolvedConfig load(const std::string& path, const std::string& out, unsigned threads,
                              std::size_t stride) {
  auto r = scenario::load_config(path);
  if (!out.empty()) r.config.out_dir = out;
  if (threads) r.config.threads = threads;
  if (stride) r.config.snapshot_stride = stride;
  r.config.validate();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bright-soliton collision and fragmentation runner"};
  app.require_subcommand(1);
  std::string out;
  unsigned threads = 0;
  std::size_t stride = 0;
  app.add_option("--out", out, "output directory (overrides out_dir)");
  app.add_option("--threads", threads, "worker threads for Q grids and number sectors")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--snapshot-stride", stride, "steps between stored snapshots")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the scenario described by a config file");
  run->add_option("config", config_path, "key = value config file")->required();
  auto* list = app.add_subcommand("list-scenarios", "print the scenario catalogue");
  auto* validate = app.add_subcommand("validate", "check a config file without running it");
  validate->add_option("config", config_path, "key = value config file")->required();
  // Global flags are accepted after the verb as well.
  for (auto* sub : {run, validate}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& e : scenario::scenario_catalogue()) {
        std::cout << e.name << "\n    " << e.description << "\n";
        for (const auto& [k, v] : e.params)
          std::cout << "    " << k << " = " << v << (e.inferred.contains(k) ? "   (inferred)" : "") << "\n";
      }
      return 0;
    }
    const auto r = load(config_path, out, threads, stride);
    if (*validate) {
      std::cout << "ok: scenario " << r.config.scenario << ", pipeline " << r.config.pipeline << "\n"
                << render_config(r.config);
      return 0;
    }
    const auto m = scenario::run_scenario(r.config, r.inferred);
    std::cout << "scenario " << m.scenario << " finished in " << m.duration_s << " s, "
              << m.files.size() << " files in " << r.config.out_dir << "\n";
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
