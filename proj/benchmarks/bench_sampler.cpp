#include <benchmark/benchmark.h>

#include <cstdint>

#include "bdisk/disk.hpp"
#include "bdisk/encoding.hpp"
#include "bdisk/labels.hpp"
#include "bdisk/sampler.hpp"

namespace {

void BM_FirstPassageBridge(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_first_passage_bridge(
        1.0, 1.0, n, bdisk::SeedRecord{7, stream++, bdisk::StepMode::walk}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FirstPassageBridge)->Range(1 << 10, 1 << 16)->Complexity();

void BM_SnakeLabels(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const bdisk::ForestCode code(sample_first_passage_bridge(
      1.0, 1.0, n, bdisk::SeedRecord{7, 1, bdisk::StepMode::walk}));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_labels_snake(code, bdisk::SeedRecord{8, stream++, bdisk::StepMode::walk}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SnakeLabels)->Range(1 << 10, 1 << 16)->Complexity();

void BM_BuildDisk(benchmark::State& state) {
  bdisk::DiskSpec spec;
  spec.n = static_cast<std::size_t>(state.range(0));
  spec.seed = 7;
  std::uint32_t replica = 0;
  for (auto _ : state) {
    spec.replica = replica++;
    benchmark::DoNotOptimize(bdisk::build_disk(spec));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildDisk)->Range(1 << 10, 1 << 14)->Complexity();

}  // namespace
