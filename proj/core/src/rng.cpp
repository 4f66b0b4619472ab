#include "bdisk/rng.hpp"

#include <cmath>

#include "bdisk/errors.hpp"

namespace bdisk {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// Stafford mix13 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    // Two mix rounds keep nearby (seed, stream) pairs decorrelated.
    : key_(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + mix64(stream * kGamma + 1))) {}

std::uint64_t Rng::next_u64() { return mix64(key_ + (++ctr_) * kGamma); }

double Rng::uniform() {
  // 53 mantissa bits, shifted into (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidParameter("uniform_below: bound must be positive");
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      cached_normal_ = v * f;
      has_cached_normal_ = true;
      return u * f;
    }
  }
}

bool Rng::bit() {
  if (bits_left_ == 0) {
    bit_buf_ = next_u64();
    bits_left_ = 64;
  }
  const bool b = bit_buf_ & 1;
  bit_buf_ >>= 1;
  --bits_left_;
  return b;
}

}  // namespace bdisk
