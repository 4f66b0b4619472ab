#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdisk/metric.hpp"

namespace bdisk {

// Counterclockwise boundary arc [r1, r2] of one piece, in arc-length
// coordinates from the boundary root. No wrapping: 0 <= r1 <= r2 <= perimeter;
// r1 == r2 identifies a single boundary point.
struct ArcRef {
  std::uint32_t piece = 0;
  double r1 = 0.0;
  double r2 = 0.0;
};

struct Identification {
  ArcRef a;
  ArcRef b;
  bool reversed = true;  // opposite orientations glue boundary circles head-to-tail
};

struct GluingSchema {
  std::vector<std::string> piece_files;  // informational; resolution is by index
  std::vector<Identification> identifications;
};

GluingSchema parse_gluing_schema(const std::string& json_text);
std::string gluing_schema_to_json(const GluingSchema& schema);

// Result of gluing: the quotient space, plus the seam as ordered marks with
// cumulative coordinates (one mark per paired boundary grid point, seams of
// successive identifications concatenated). Unglued boundary arcs remain in
// space.boundary() with per-piece cumulative coordinates.
struct GluedSpace {
  FiniteGeodesicSpace space;
  std::vector<BoundaryMark> interface;
  std::vector<double> seam_breaks;  // cumulative coordinate where each identification starts

  const UnionPieces& model() const { return *space.union_model(); }
  // (piece, class) members of a vertex
  std::span<const std::pair<std::uint32_t, std::uint32_t>> members(std::uint32_t v) const {
    return model().members[v];
  }
  // piece of the lowest-numbered member; seam vertices have one per side
  std::uint32_t piece_of(std::uint32_t v) const { return model().members[v].front().first; }
};

// Disjoint union of the pieces with boundary grid points of matched arcs
// merged pairwise by cumulative arc coordinate (nearest grid point; arcs
// must agree in length within one boundary cell). Distances in the result
// are the quotient pseudometric of the union.
GluedSpace quotient_space(std::vector<std::shared_ptr<const DiskInstance>> pieces,
                          const GluingSchema& schema);

// Boundary-to-boundary gluing of two disks along one arc each.
GluedSpace glue_disks(std::shared_ptr<const DiskInstance> d1,
                      std::shared_ptr<const DiskInstance> d2,
                      std::pair<double, double> arc1, std::pair<double, double> arc2,
                      bool reversed = true);

// One disk, two disjoint boundary arcs glued to each other.
GluedSpace self_glue(std::shared_ptr<const DiskInstance> disk, std::pair<double, double> arc1,
                     std::pair<double, double> arc2, bool reversed = true);

// Flat sanity case: the square [0,1] x [-1,1] as two Euclidean grid halves
// joined along y = 0, with a segment of length 1/2 glued onto the seam by
// t -> (2t, 0). Interface points that were |x - y| apart end up |x - y| / 2
// apart, while the internal metrics of the halves are unchanged.
struct FlatCounterexample {
  FiniteGeodesicSpace with_segment;
  FiniteGeodesicSpace without_segment;
  std::vector<std::uint32_t> seam;  // vertex of (x, 0) for x = k / m
  std::size_t m;

  std::uint32_t seam_vertex(double x) const;
};
FlatCounterexample flat_counterexample(std::size_t m);

// Number of delta^2-long seam segments visited by a vertex chain. Segments
// partition the seam coordinate range from its start; the last partial
// segment is kept. delta^2 below one boundary cell is an error.
std::size_t crossing_count(const GluedSpace& glued, std::span<const std::uint32_t> chain,
                           double delta);

// Number of delta^2-long seam segments containing a vertex within distance
// delta^(1+v) of the center.
std::size_t ball_segment_count(const GluedSpace& glued, std::uint32_t center, double delta,
                               double v);
std::size_t ball_segment_count(const GluedSpace& glued, const DistanceField& from_center,
                               double delta, double v);

}  // namespace bdisk
