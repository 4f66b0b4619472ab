#include "bdisk/rmq.hpp"

#include <algorithm>
#include <bit>

#include "bdisk/errors.hpp"

namespace bdisk {

RangeMin::RangeMin(std::vector<double> values) : values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n == 0) throw InvalidParameter("RangeMin: empty array");
  const int levels = std::bit_width(n);
  table_.resize(levels);
  table_[0].resize(n);
  for (std::size_t i = 0; i < n; ++i) table_[0][i] = static_cast<std::uint32_t>(i);
  for (int k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    table_[k].resize(n - span + 1);
    for (std::size_t i = 0; i + span <= n; ++i) {
      const std::uint32_t a = table_[k - 1][i];
      const std::uint32_t b = table_[k - 1][i + span / 2];
      // <= keeps the leftmost index on ties
      table_[k][i] = (values_[a] <= values_[b]) ? a : b;
    }
  }
}

RangeMin::Result RangeMin::query(std::uint32_t lo, std::uint32_t hi) const {
  if (lo > hi || hi >= values_.size()) throw InvalidParameter("RangeMin: bad window");
  const std::size_t len = static_cast<std::size_t>(hi) - lo + 1;
  const int k = std::bit_width(len) - 1;
  const std::uint32_t a = table_[k][lo];
  const std::uint32_t b = table_[k][hi + 1 - (std::size_t{1} << k)];
  // The two halves overlap; on a tie the smaller index wins.
  if (values_[a] < values_[b]) return {values_[a], a};
  if (values_[b] < values_[a]) return {values_[b], b};
  return {values_[a], std::min(a, b)};
}

}  // namespace bdisk
