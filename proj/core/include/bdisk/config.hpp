#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "bdisk/path.hpp"

namespace bdisk {

// Resolved run configuration. Every run writes its resolved form next to
// its outputs, and every artifact is reproducible from that file alone.
// Defaults are centralized here; see the README table.
struct RunConfig {
  std::uint64_t seed = 20260814;
  std::size_t n = std::size_t{1} << 14;
  double perimeter = 1.0;
  double area = 1.0;
  bool random_area = false;
  StepMode mode = StepMode::walk;
  std::size_t replicas = 20;
  std::size_t workers = 1;
  std::size_t boundary_cells = 0;   // 0 = resolution default
  std::size_t delta_octaves = 6;    // dyadic sweep size before trimming
  std::string output_dir;           // empty = $BDISK_OUTPUT_DIR, else "runs"
  std::string run_name = "run";
  // Named numeric knobs (report pass bands, sweep edges); reports read
  // them through tuning_or with their documented defaults.
  std::map<std::string, double> tuning;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& file);
  // key=value with the keys of the JSON form; numbers parsed leniently
  void apply_set(const std::string& assignment);
  std::string to_json() const;
  double tuning_or(const std::string& key, double fallback) const;
  std::string resolved_output_dir() const;
};

}  // namespace bdisk
