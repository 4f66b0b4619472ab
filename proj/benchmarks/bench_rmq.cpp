#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "bdisk/rmq.hpp"
#include "bdisk/rng.hpp"

namespace {

std::vector<double> random_values(std::size_t n) {
  bdisk::Rng rng(1, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

void BM_RangeMinBuild(benchmark::State& state) {
  const auto v = random_values(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    bdisk::RangeMin rm(v);
    benchmark::DoNotOptimize(rm);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RangeMinBuild)->Range(1 << 10, 1 << 18)->Complexity();

void BM_RangeMinQuery(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const bdisk::RangeMin rm(random_values(n));
  bdisk::Rng rng(2, 2);
  for (auto _ : state) {
    std::uint32_t a = static_cast<std::uint32_t>(rng.uniform_below(n));
    std::uint32_t b = static_cast<std::uint32_t>(rng.uniform_below(n));
    if (a > b) std::swap(a, b);
    benchmark::DoNotOptimize(rm.query(a, b));
  }
}
BENCHMARK(BM_RangeMinQuery)->Range(1 << 10, 1 << 18);

}  // namespace
