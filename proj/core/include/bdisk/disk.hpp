#pragma once

#include <cstdint>
#include <memory>

#include "bdisk/encoding.hpp"
#include "bdisk/labels.hpp"
#include "bdisk/path.hpp"
#include "bdisk/sampler.hpp"

namespace bdisk {

class Rng;

struct DiskSpec {
  double perimeter = 1.0;
  double area = 1.0;        // ignored when random_area
  bool random_area = false;
  std::size_t n = std::size_t{1} << 14;  // target grid values
  StepMode mode = StepMode::walk;
  std::uint64_t seed = 0;
  std::uint32_t replica = 0;       // varies the streams, not the seed
  std::size_t boundary_cells = 0;  // 0 = one cell per walk level
  std::uint64_t max_steps = kDefaultMaxSteps;
};

// A sampled disk: contour structure, labels, and the derived metric data.
// Vertices are the zero-distance classes of the contour. Area weight dt is
// assigned to every grid index except 0 (cell convention (t_{i-1}, t_i]),
// so weights sum exactly to the realized area. The boundary cycle lists the
// class of the first hit of each boundary level, ordered by arc coordinate.
class DiskInstance {
 public:
  DiskInstance(ForestCode code, LabelField labels, DiskSpec spec);

  const ForestCode& code() const { return code_; }
  const LabelField& labels() const { return labels_; }
  const DiskSpec& spec() const { return spec_; }
  const std::vector<double>& z() const { return labels_.z; }

  std::size_t grid_size() const { return code_.size(); }
  double dt() const { return code_.contour().dt; }
  double perimeter() const { return code_.perimeter(); }
  double area() const { return code_.contour().duration(); }

  std::uint32_t vertex_count() const { return code_.class_count(); }
  std::uint32_t vertex_of(std::uint32_t grid_index) const { return code_.class_of(grid_index); }
  std::span<const std::uint32_t> vertex_members(std::uint32_t v) const {
    return code_.class_members(v);
  }
  double area_weight(std::uint32_t v) const { return area_weight_[v]; }
  const std::vector<double>& area_weights() const { return area_weight_; }

  std::size_t boundary_points() const { return code_.boundary_points(); }
  std::uint32_t boundary_vertex(std::uint32_t k) const {
    return code_.class_of(code_.hit_index(k));
  }
  double boundary_coordinate(std::uint32_t k) const { return code_.boundary_coordinate(k); }
  double boundary_cell_width() const {
    return perimeter() / static_cast<double>(boundary_points() - 1);
  }
  // Nearest boundary grid point to arc coordinate r in [0, perimeter].
  std::uint32_t boundary_point_at(double r) const;

  // Minimum of z over the counterclockwise (index-increasing, wrapping)
  // arc from s to t, endpoints included.
  double arc_min(std::uint32_t s, std::uint32_t t) const;

  // z repeated twice, for linear sweeps over wrapped arcs.
  const std::vector<double>& z_doubled() const { return z_circle_.values(); }

  // Label distance bound: z_s + z_t - 2 max(arc_min(s,t), arc_min(t,s)).
  // Nonnegative and symmetric but not a pseudometric.
  double d_z(std::uint32_t s, std::uint32_t t) const;

  // Grid index distributed by area weight.
  std::uint32_t uniform_grid_index(Rng& rng) const;

 private:
  ForestCode code_;
  LabelField labels_;
  DiskSpec spec_;
  RangeMin z_circle_;  // over z repeated twice, for wrapped arc queries
  std::vector<double> area_weight_;
};

// Samples the full pipeline: contour, tree labels, boundary bridge (always
// gaussian, scale sqrt(3)). Walk mode uses the stack label sampler at any
// size; gaussian mode uses the dense sampler and is capped accordingly.
DiskInstance build_disk(const DiskSpec& spec);

// Stream tags used by build_disk; exposed so reports can document their
// seed manifests.
inline constexpr std::uint32_t kStreamContour = 1;
inline constexpr std::uint32_t kStreamLabels = 2;
inline constexpr std::uint32_t kStreamBridge = 3;

}  // namespace bdisk
