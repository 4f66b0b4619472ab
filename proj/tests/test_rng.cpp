#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "bdisk/rng.hpp"
#include "doctest.h"

using namespace bdisk;

TEST_CASE("rng repeats exactly for a fixed (seed, stream)") {
  Rng a(7, 3);
  Rng b(7, 3);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng streams and seeds are independent keys") {
  Rng a(7, 3);
  Rng b(7, 4);
  Rng c(8, 3);
  const std::uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
  CHECK(va != vb);
  CHECK(va != vc);
  CHECK(vb != vc);
}

TEST_CASE("uniform stays strictly inside (0,1)") {
  Rng r(1, 1);
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_below respects the bound and reaches every residue") {
  Rng r(2, 9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 4000; ++i) {
    const std::uint64_t v = r.uniform_below(8);
    CHECK(v < 8);
    seen.insert(v);
  }
  CHECK(seen.size() == 8);
  CHECK(r.uniform_below(1) == 0);
}

TEST_CASE("normal moments match N(0,1) within sampling error") {
  Rng r(3, 5);
  const int n = 40000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  const double v = s2 / n - m * m;
  CHECK(std::fabs(m) < 0.025);     // 5 sigma of the mean estimator
  CHECK(std::fabs(v - 1.0) < 0.04);
}

TEST_CASE("bit is unbiased and buffered deterministically") {
  Rng a(11, 0);
  Rng b(11, 0);
  int ones = 0;
  for (int i = 0; i < 64000; ++i) {
    const bool bit = a.bit();
    CHECK(bit == b.bit());
    ones += bit ? 1 : 0;
  }
  const double frac = ones / 64000.0;
  CHECK(frac > 0.48);
  CHECK(frac < 0.52);
}

TEST_CASE("stream_id packs stage tag and replica") {
  CHECK(stream_id(0, 0) == 0);
  CHECK(stream_id(2, 3) == ((std::uint64_t{2} << 32) | 3));
  CHECK(stream_id(1, 0xffffffffu) == ((std::uint64_t{1} << 32) | 0xffffffffu));
  CHECK(stream_id(2, 0) != stream_id(0, 2));
}
