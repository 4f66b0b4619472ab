#pragma once

#include <cstdint>
#include <cstddef>

namespace bdisk {

// Counter-based generator, splittable by (seed, stream). Output is a pure
// function of (seed, stream, draw index), so replicas can be assigned
// disjoint streams and produce identical results regardless of worker
// count or execution order. No global state anywhere.
//
// Core permutation is the 64-bit finalizer used by splitmix64 applied to
// key + counter * golden gamma.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on (0,1); never returns 0 or 1.
  double uniform();

  // Uniform integer in [0, bound), bound > 0. Rejection step keeps it exact.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Standard normal via the polar method. Pairs are cached, so draws come
  // in a fixed order per instance.
  double normal();

  // One unbiased bit, served 64 per next_u64 call.
  bool bit();

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
  std::uint64_t bit_buf_ = 0;
  int bits_left_ = 0;
};

// Derives a child stream id so that independent stages of one run draw from
// non-overlapping streams: stream = stage_tag * 2^32 + replica.
constexpr std::uint64_t stream_id(std::uint32_t stage_tag, std::uint32_t replica) {
  return (static_cast<std::uint64_t>(stage_tag) << 32) | replica;
}

}  // namespace bdisk
