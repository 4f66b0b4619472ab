#include <cstdint>
#include <vector>

#include "bdisk/rmq.hpp"
#include "bdisk/rng.hpp"
#include "doctest.h"

using namespace bdisk;

namespace {

RangeMin::Result brute(const std::vector<double>& v, std::uint32_t lo, std::uint32_t hi) {
  RangeMin::Result r{v[lo], lo};
  for (std::uint32_t i = lo + 1; i <= hi; ++i)
    if (v[i] < r.value) r = {v[i], i};
  return r;
}

}  // namespace

TEST_CASE("range minimum matches a scan, leftmost tie wins") {
  Rng rng(404, 0);
  for (std::size_t n : {1u, 2u, 3u, 5u, 17u, 64u, 120u}) {
    std::vector<double> v(n);
    // heavy ties: values from a small set
    for (auto& x : v) x = static_cast<double>(rng.uniform_below(6));
    const RangeMin rm(v);
    CHECK(rm.size() == n);
    for (int q = 0; q < 400; ++q) {
      std::uint32_t a = static_cast<std::uint32_t>(rng.uniform_below(n));
      std::uint32_t b = static_cast<std::uint32_t>(rng.uniform_below(n));
      if (a > b) std::swap(a, b);
      const auto got = rm.query(a, b);
      const auto want = brute(v, a, b);
      CHECK(got.value == want.value);
      CHECK(got.argmin == want.argmin);
    }
  }
}

TEST_CASE("range minimum exhaustive on a small array") {
  const std::vector<double> v{3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 1};
  const RangeMin rm(v);
  for (std::uint32_t a = 0; a < v.size(); ++a)
    for (std::uint32_t b = a; b < v.size(); ++b) {
      const auto got = rm.query(a, b);
      const auto want = brute(v, a, b);
      CHECK(got.value == want.value);
      CHECK(got.argmin == want.argmin);
    }
  CHECK(rm.min_value(0, 11) == 1.0);
  CHECK(rm.query(0, 11).argmin == 1);  // leftmost of the three ones
  CHECK(rm.values() == v);
}
