#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bdisk/path.hpp"
#include "bdisk/rmq.hpp"

namespace bdisk {

// Tree-distance reading of a contour x:
//
//   d_x(s, t) = x_s + x_t - 2 * min x over [s, t]
//
// Indices at distance zero are grouped into classes (the points of the
// encoded forest). The first-passage structure of x, when present, carries
// the boundary: T[k] is the first grid crossing below level x_0 - r_k on a
// uniform r-grid, and deepest_level inverts it.
class ForestCode {
 public:
  // boundary_cells = 0 picks the default resolution, one cell per walk
  // step of the start level. Contours that are not first-passage shaped
  // (start > 0, interior > 0, exact 0 at the end) still get classes and
  // excursions, but boundary accessors throw InvalidStructure.
  explicit ForestCode(PathSample contour, std::size_t boundary_cells = 0);

  const PathSample& contour() const { return contour_; }
  std::size_t size() const { return contour_.values.size(); }
  double value(std::uint32_t i) const { return contour_.values[i]; }
  const RangeMin& contour_min() const { return rmq_; }

  double d_x(std::uint32_t s, std::uint32_t t) const;

  double running_inf(std::uint32_t i) const { return running_inf_[i]; }

  std::uint32_t class_count() const { return class_count_; }
  std::uint32_t class_of(std::uint32_t i) const { return class_of_[i]; }
  const std::vector<std::uint32_t>& class_ids() const { return class_of_; }
  std::span<const std::uint32_t> class_members(std::uint32_t c) const;

  // Maximal intervals strictly above the running infimum; begin and end
  // are the bracketing first-passage indices.
  struct Excursion {
    std::uint32_t begin;
    std::uint32_t end;
    double duration(double dt) const { return static_cast<double>(end - begin) * dt; }
  };
  const std::vector<Excursion>& excursions() const { return excursions_; }

  bool first_passage_shaped() const { return fp_shaped_; }
  double perimeter() const;
  // Number of r-grid points (cells + 1).
  std::size_t boundary_points() const;
  double boundary_coordinate(std::uint32_t k) const;  // r_k
  std::uint32_t hit_index(std::uint32_t k) const;     // grid index of T at r_k
  // Largest k with hit_index(k) <= i.
  std::uint32_t deepest_level(std::uint32_t i) const;

 private:
  void require_boundary() const;

  PathSample contour_;
  RangeMin rmq_;
  std::vector<double> running_inf_;
  std::vector<std::uint32_t> class_of_;
  std::vector<std::uint32_t> class_members_flat_;
  std::vector<std::uint32_t> class_offsets_;
  std::uint32_t class_count_ = 0;
  std::vector<Excursion> excursions_;
  bool fp_shaped_ = false;
  std::vector<std::uint32_t> hit_index_;
  std::vector<std::uint32_t> deepest_level_;
};

}  // namespace bdisk
