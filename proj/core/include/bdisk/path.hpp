#pragma once

#include <cstdint>
#include <vector>

namespace bdisk {

// Discretization of increments.
//   gaussian: independent N(0, dt) increments.
//   walk:     +-sqrt(dt) steps. Required by the stack label sampler; values
//             are emitted as start + k * sqrt(dt) with integer k recomputed
//             per index, so equal lattice points compare bitwise equal.
enum class StepMode : std::uint8_t { gaussian = 0, walk = 1 };

enum class PathKind : std::uint8_t {
  bm = 0,
  bridge = 1,
  first_passage_bridge = 2,
  stopped_bm = 3,
};

// Everything needed to regenerate a sample: outputs are pure functions of
// (seed, stream, mode) and the shape parameters.
struct SeedRecord {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  StepMode mode = StepMode::walk;
};

struct PathSample {
  std::vector<double> values;  // values[i] at time i * dt
  double dt = 0.0;
  PathKind kind = PathKind::bm;
  SeedRecord seed_record;

  double duration() const { return static_cast<double>(values.size() - 1) * dt; }
};

}  // namespace bdisk
