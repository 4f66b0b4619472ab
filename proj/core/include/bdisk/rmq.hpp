#pragma once

#include <cstdint>
#include <vector>

namespace bdisk {

// Sparse table over a fixed array: O(n log n) build, O(1) range-minimum
// queries returning both the value and the leftmost index attaining it.
// Ties always resolve to the smallest index; every consumer of argmin
// relies on that convention.
class RangeMin {
 public:
  RangeMin() = default;
  explicit RangeMin(std::vector<double> values);

  struct Result {
    double value;
    std::uint32_t argmin;
  };

  // Inclusive window [lo, hi], lo <= hi.
  Result query(std::uint32_t lo, std::uint32_t hi) const;
  double min_value(std::uint32_t lo, std::uint32_t hi) const { return query(lo, hi).value; }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  // level k stores the argmin of windows of length 2^k.
  std::vector<std::vector<std::uint32_t>> table_;
};

}  // namespace bdisk
