#include "bdisk/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bdisk/errors.hpp"

namespace bdisk {

ForestCode::ForestCode(PathSample contour, std::size_t boundary_cells)
    : contour_(std::move(contour)), rmq_(contour_.values) {
  const std::size_t n = contour_.values.size();
  if (n < 2) throw InvalidParameter("ForestCode: contour needs at least two values");
  const std::vector<double>& x = contour_.values;

  running_inf_.resize(n);
  running_inf_[0] = x[0];
  for (std::size_t i = 1; i < n; ++i) running_inf_[i] = std::min(running_inf_[i - 1], x[i]);

  // Zero-distance classes via a monotone stack: i and j share a class iff
  // x_i = x_j = min x over [i, j]. Values strictly above the current one can
  // never pair with a later index, so they pop.
  class_of_.resize(n);
  std::vector<std::pair<double, std::uint32_t>> stack;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i];
    while (!stack.empty() && stack.back().first > v) stack.pop_back();
    if (!stack.empty() && stack.back().first == v) {
      class_of_[i] = stack.back().second;
    } else {
      class_of_[i] = class_count_;
      stack.emplace_back(v, class_count_);
      ++class_count_;
    }
  }
  class_offsets_.assign(class_count_ + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ++class_offsets_[class_of_[i] + 1];
  std::partial_sum(class_offsets_.begin(), class_offsets_.end(), class_offsets_.begin());
  class_members_flat_.resize(n);
  std::vector<std::uint32_t> cursor(class_offsets_.begin(), class_offsets_.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    class_members_flat_[cursor[class_of_[i]]++] = static_cast<std::uint32_t>(i);

  // Excursions sit between consecutive first-passage indices.
  std::uint32_t last_fp = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] <= running_inf_[i - 1]) {
      if (i - last_fp > 1)
        excursions_.push_back({last_fp, static_cast<std::uint32_t>(i)});
      last_fp = static_cast<std::uint32_t>(i);
    }
  }

  fp_shaped_ = x[0] > 0.0 && x[n - 1] == 0.0;
  for (std::size_t i = 1; fp_shaped_ && i + 1 < n; ++i)
    if (!(x[i] > 0.0)) fp_shaped_ = false;
  if (!fp_shaped_) return;

  const double ell = x[0];
  std::size_t cells = boundary_cells;
  if (cells == 0) {
    cells = static_cast<std::size_t>(std::ceil(ell / std::sqrt(contour_.dt) - 1e-9));
    cells = std::max<std::size_t>(cells, 1);
  }
  const std::size_t m = cells + 1;

  // Levels are computed the same way the walk sampler writes values, so the
  // lattice comparisons below are exact in walk mode.
  std::vector<double> level(m);
  if (contour_.seed_record.mode == StepMode::walk) {
    const double step = std::sqrt(contour_.dt);
    const auto top = static_cast<std::int64_t>(std::llround(ell / step));
    for (std::size_t k = 0; k < m; ++k) {
      const double r = static_cast<double>(k) * ell / static_cast<double>(cells);
      const auto lattice = static_cast<std::int64_t>(std::llround((ell - r) / step));
      level[k] = static_cast<double>(std::clamp<std::int64_t>(lattice, 0, top)) * step;
    }
  } else {
    for (std::size_t k = 0; k < m; ++k)
      level[k] = ell - static_cast<double>(k) * ell / static_cast<double>(cells);
  }
  level[0] = ell;
  level[m - 1] = 0.0;

  hit_index_.resize(m);
  deepest_level_.resize(n);
  std::uint32_t cur = 0;
  hit_index_[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (cur + 1 < m && x[i] <= level[cur + 1]) {
      ++cur;
      hit_index_[cur] = static_cast<std::uint32_t>(i);
    }
    deepest_level_[i] = cur;
  }
  if (cur != m - 1) throw InvalidStructure("contour never reached the last boundary level");
}

double ForestCode::d_x(std::uint32_t s, std::uint32_t t) const {
  if (s > t) std::swap(s, t);
  return contour_.values[s] + contour_.values[t] - 2.0 * rmq_.min_value(s, t);
}

std::span<const std::uint32_t> ForestCode::class_members(std::uint32_t c) const {
  if (c >= class_count_) throw InvalidParameter("class id out of range");
  return {class_members_flat_.data() + class_offsets_[c],
          class_members_flat_.data() + class_offsets_[c + 1]};
}

void ForestCode::require_boundary() const {
  if (!fp_shaped_)
    throw InvalidStructure("contour is not first-passage shaped; no boundary structure");
}

double ForestCode::perimeter() const {
  require_boundary();
  return contour_.values[0];
}

std::size_t ForestCode::boundary_points() const {
  require_boundary();
  return hit_index_.size();
}

double ForestCode::boundary_coordinate(std::uint32_t k) const {
  require_boundary();
  if (k >= hit_index_.size()) throw InvalidParameter("boundary grid index out of range");
  return contour_.values[0] * static_cast<double>(k) /
         static_cast<double>(hit_index_.size() - 1);
}

std::uint32_t ForestCode::hit_index(std::uint32_t k) const {
  require_boundary();
  if (k >= hit_index_.size()) throw InvalidParameter("boundary grid index out of range");
  return hit_index_[k];
}

std::uint32_t ForestCode::deepest_level(std::uint32_t i) const {
  require_boundary();
  if (i >= deepest_level_.size()) throw InvalidParameter("grid index out of range");
  return deepest_level_[i];
}

}  // namespace bdisk
