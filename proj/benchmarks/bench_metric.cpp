#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>

#include "bdisk/disk.hpp"
#include "bdisk/metric.hpp"

namespace {

std::shared_ptr<const bdisk::DiskInstance> bench_disk(std::size_t n) {
  bdisk::DiskSpec spec;
  spec.n = n;
  spec.seed = 7;
  return std::make_shared<bdisk::DiskInstance>(bdisk::build_disk(spec));
}

void BM_DistanceField(benchmark::State& state) {
  auto disk = bench_disk(static_cast<std::size_t>(state.range(0)));
  const bdisk::FiniteGeodesicSpace space = bdisk::FiniteGeodesicSpace::from_disk(disk);
  std::uint32_t source = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.distances(source));
    source = (source + 17) % space.vertex_count();
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistanceField)->Range(1 << 9, 1 << 13)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_LabelBound(benchmark::State& state) {
  auto disk = bench_disk(static_cast<std::size_t>(state.range(0)));
  const std::uint32_t n = static_cast<std::uint32_t>(disk->grid_size());
  std::uint32_t s = 1, t = n / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(disk->d_z(s, t));
    s = (s + 13) % n;
    t = (t + 29) % n;
  }
}
BENCHMARK(BM_LabelBound)->Range(1 << 10, 1 << 14);

void BM_BallArea(benchmark::State& state) {
  auto disk = bench_disk(1 << 12);
  const bdisk::FiniteGeodesicSpace space = bdisk::FiniteGeodesicSpace::from_disk(disk);
  const bdisk::DistanceField field = space.distances(0u);
  double delta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdisk::ball_area(space, field, delta));
    delta = delta < 2.0 ? delta * 1.01 : 0.05;
  }
}
BENCHMARK(BM_BallArea);

}  // namespace
