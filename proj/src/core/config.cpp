#include "solcoll/core/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "solcoll/core/error.hpp"

namespace solcoll {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

double parse_double(const ConfigEntry& e, const std::string& key) {
  const std::string& s = e.value;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("'" + key + "' expects a finite number, got '" + s + "'", e.line);
  return v;
}

// Accepts plain numbers and multiples of pi: "pi", "-pi", "0.5pi", "0.5*pi".
double parse_angle_token(const std::string& token, const ConfigEntry& e, const std::string& key) {
  std::string s = trim(token);
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_double(ConfigEntry{s, e.line}, key);
  if (p + 2 != s.size()) throw ConfigError("'" + key + "': malformed angle '" + s + "'", e.line);
  std::string coeff = trim(s.substr(0, p));
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  coeff = trim(coeff);
  double c = 1.0;
  if (coeff == "-") c = -1.0;
  else if (!coeff.empty() && coeff != "+") c = parse_double(ConfigEntry{coeff, e.line}, key);
  return c * std::numbers::pi;
}

long long parse_int(const ConfigEntry& e, const std::string& key) {
  const std::string& s = e.value;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("'" + key + "' expects an integer, got '" + s + "'", e.line);
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

KeyValueMap parse_key_values(std::istream& in) {
  KeyValueMap kv;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'", line);
    if (kv.contains(key)) throw ConfigError("duplicate key '" + key + "'", line);
    kv.emplace(std::move(key), ConfigEntry{std::move(value), line});
  }
  return kv;
}

KeyValueMap parse_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_key_values(in);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scenario",   "pipeline",          "n_sol",      "u0",
      "d_ini",      "v_ini",             "phi",        "phases",
      "t_final",    "dt",                "x_min",      "x_max",
      "n_points",   "out_dir",           "snapshot_stride", "twomode_dt",
      "number_statistics", "d_source",   "q_times",    "q_radial",
      "q_angular",  "collision_window",  "threads"};
  return keys;
}

double reduce_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  if (r < 0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void apply_overrides(ScenarioConfig& cfg, const KeyValueMap& kv) {
  double x_min = cfg.grid.x_min();
  double x_max = cfg.grid.x_max();
  long long n_points = static_cast<long long>(cfg.grid.size());
  int grid_line = 0;

  for (const auto& [key, e] : kv) {
    if (key == "scenario") cfg.scenario = e.value;
    else if (key == "pipeline") cfg.pipeline = e.value;
    else if (key == "n_sol") {
      const auto n = parse_int(e, key);
      if (n < 2 || n > 1'000'000) throw ConfigError("n_sol out of range", e.line);
      cfg.n_sol = static_cast<int>(n);
    } else if (key == "u0") cfg.u0 = parse_double(e, key);
    else if (key == "d_ini") cfg.d_ini = parse_double(e, key);
    else if (key == "v_ini") cfg.v_ini = parse_double(e, key);
    else if (key == "phi") cfg.phi = reduce_phase(parse_angle_token(e.value, e, key));
    else if (key == "phases") {
      cfg.phases.clear();
      for (const auto& tok : split_list(e.value))
        cfg.phases.push_back(reduce_phase(parse_angle_token(tok, e, key)));
    } else if (key == "t_final") cfg.t_final = parse_double(e, key);
    else if (key == "dt") cfg.dt = parse_double(e, key);
    else if (key == "x_min") { x_min = parse_double(e, key); grid_line = e.line; }
    else if (key == "x_max") { x_max = parse_double(e, key); grid_line = e.line; }
    else if (key == "n_points") { n_points = parse_int(e, key); grid_line = e.line; }
    else if (key == "out_dir") cfg.out_dir = e.value;
    else if (key == "snapshot_stride") {
      const auto s = parse_int(e, key);
      if (s < 1) throw ConfigError("snapshot_stride must be >= 1", e.line);
      cfg.snapshot_stride = static_cast<std::size_t>(s);
    } else if (key == "twomode_dt") cfg.twomode_dt = parse_double(e, key);
    else if (key == "number_statistics") cfg.number_statistics = e.value;
    else if (key == "d_source") cfg.d_source = e.value;
    else if (key == "q_times") {
      cfg.q_times.clear();
      for (const auto& tok : split_list(e.value))
        cfg.q_times.push_back(parse_double(ConfigEntry{tok, e.line}, key));
    } else if (key == "q_radial") {
      const auto n = parse_int(e, key);
      if (n != 0 && n < 4) throw ConfigError("q_radial must be 0 (auto) or >= 4", e.line);
      cfg.q_radial = static_cast<std::size_t>(n);
    } else if (key == "q_angular") {
      const auto n = parse_int(e, key);
      if (n != 0 && n < 8) throw ConfigError("q_angular must be 0 (auto) or >= 8", e.line);
      cfg.q_angular = static_cast<std::size_t>(n);
    } else if (key == "collision_window") cfg.collision_window = parse_double(e, key);
    else if (key == "threads") {
      const auto n = parse_int(e, key);
      if (n < 1 || n > 1024) throw ConfigError("threads must be in [1, 1024]", e.line);
      cfg.threads = static_cast<unsigned>(n);
    } else {
      throw ConfigError("unknown key '" + key + "'", e.line);
    }
  }

  if (n_points < 0) throw ConfigError("n_points must be positive", grid_line);
  try {
    cfg.grid = Grid1D(x_min, x_max, static_cast<std::size_t>(n_points));
  } catch (const InvalidArgument& ex) {
    throw ConfigError(ex.what(), grid_line);
  }
}

void ScenarioConfig::validate() const {
  if (u0 >= 0) throw ConfigError("u0 must be negative (bright solitons need attraction)");
  if (n_sol < 2) throw ConfigError("n_sol must be >= 2");
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (!(t_final >= 0)) throw ConfigError("t_final must be non-negative");
  if (d_ini < 0) throw ConfigError("d_ini must be non-negative");
  if (!(twomode_dt > 0)) throw ConfigError("twomode_dt must be positive");
  if (!(collision_window > 0)) throw ConfigError("collision_window must be positive");
  if (!(phi >= 0 && phi < 2.0 * std::numbers::pi)) throw ConfigError("phi must lie in [0, 2pi)");
  if (pipeline != "fragmentation" && pipeline != "collision" && pipeline != "kinematics")
    throw ConfigError("pipeline must be fragmentation, collision or kinematics");
  if (number_statistics != "fixed" && number_statistics != "poissonian")
    throw ConfigError("number_statistics must be 'fixed' or 'poissonian'");
  if (d_source != "gpe" && d_source != "ramp") throw ConfigError("d_source must be 'gpe' or 'ramp'");
  for (double t : q_times)
    if (t < 0) throw ConfigError("q_times must be non-negative");
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
  try {
    grid.require_width_for(d_ini);
  } catch (const InvalidArgument& ex) {
    throw ConfigError(ex.what());
  }
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::to_key_values() const {
  return {
      {"scenario", scenario},
      {"pipeline", pipeline},
      {"n_sol", std::to_string(n_sol)},
      {"u0", format_double(u0)},
      {"d_ini", format_double(d_ini)},
      {"v_ini", format_double(v_ini)},
      {"phi", format_double(phi)},
      {"phases", join_doubles(phases)},
      {"t_final", format_double(t_final)},
      {"dt", format_double(dt)},
      {"x_min", format_double(grid.x_min())},
      {"x_max", format_double(grid.x_max())},
      {"n_points", std::to_string(grid.size())},
      {"out_dir", out_dir},
      {"snapshot_stride", std::to_string(snapshot_stride)},
      {"twomode_dt", format_double(twomode_dt)},
      {"number_statistics", number_statistics},
      {"d_source", d_source},
      {"q_times", join_doubles(q_times)},
      {"q_radial", std::to_string(q_radial)},
      {"q_angular", std::to_string(q_angular)},
      {"collision_window", format_double(collision_window)},
      {"threads", std::to_string(threads)},
  };
}

std::string render_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.to_key_values()) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace solcoll
