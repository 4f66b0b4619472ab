#include "bdisk/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bdisk/errors.hpp"

namespace bdisk {
namespace {

using nlohmann::json;

StepMode parse_mode(const std::string& s) {
  if (s == "walk") return StepMode::walk;
  if (s == "gaussian") return StepMode::gaussian;
  throw InvalidParameter("mode must be \"walk\" or \"gaussian\"");
}

void apply_json(RunConfig& cfg, const json& j) {
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "n")
        cfg.n = value.get<std::size_t>();
      else if (key == "perimeter")
        cfg.perimeter = value.get<double>();
      else if (key == "area")
        cfg.area = value.get<double>();
      else if (key == "random_area")
        cfg.random_area = value.get<bool>();
      else if (key == "mode")
        cfg.mode = parse_mode(value.get<std::string>());
      else if (key == "replicas")
        cfg.replicas = value.get<std::size_t>();
      else if (key == "workers")
        cfg.workers = value.get<std::size_t>();
      else if (key == "boundary_cells")
        cfg.boundary_cells = value.get<std::size_t>();
      else if (key == "delta_octaves")
        cfg.delta_octaves = value.get<std::size_t>();
      else if (key == "output_dir")
        cfg.output_dir = value.get<std::string>();
      else if (key == "run_name")
        cfg.run_name = value.get<std::string>();
      else if (key == "tuning")
        for (const auto& [tk, tv] : value.items()) cfg.tuning[tk] = tv.get<double>();
      else
        throw InvalidParameter("unknown config key: " + key);
    } catch (const json::exception&) {
      throw InvalidParameter("config key has the wrong type: " + key);
    }
  }
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidParameter("cannot open config file: " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void RunConfig::apply_set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidParameter("--set expects key=value, got: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  if (key.rfind("tuning.", 0) == 0) {
    try {
      tuning[key.substr(7)] = std::stod(raw);
    } catch (const std::exception&) {
      throw InvalidParameter("tuning value is not a number: " + assignment);
    }
    return;
  }
  json j;
  // strings that do not parse as JSON scalars are taken verbatim
  try {
    j[key] = json::parse(raw);
  } catch (const json::exception&) {
    j[key] = raw;
  }
  apply_json(*this, j);
}

std::string RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["n"] = n;
  j["perimeter"] = perimeter;
  j["area"] = area;
  j["random_area"] = random_area;
  j["mode"] = mode == StepMode::walk ? "walk" : "gaussian";
  j["replicas"] = replicas;
  j["workers"] = workers;
  j["boundary_cells"] = boundary_cells;
  j["delta_octaves"] = delta_octaves;
  j["output_dir"] = output_dir;
  j["run_name"] = run_name;
  j["tuning"] = json::object();
  for (const auto& [k, v] : tuning) j["tuning"][k] = v;
  return j.dump(2);
}

double RunConfig::tuning_or(const std::string& key, double fallback) const {
  const auto it = tuning.find(key);
  return it == tuning.end() ? fallback : it->second;
}

std::string RunConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("BDISK_OUTPUT_DIR"); env && *env) return env;
  return "runs";
}

}  // namespace bdisk
