#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bdisk/disk.hpp"

namespace bdisk {

inline constexpr std::uint32_t kNoVertex = 0xffffffffu;

struct BoundaryMark {
  std::uint32_t vertex;
  double coordinate;  // cumulative arc length from the cycle start
};

struct DistanceOptions {
  std::uint32_t target = kNoVertex;  // stop once settled
  bool predecessors = false;
};

struct DistanceField {
  std::vector<double> dist;           // +infinity marks unreachable
  std::vector<std::uint32_t> pred;    // kNoVertex at sources / when disabled
};

// Disjoint union of disk pieces with vertices merged by an identification.
// Chains may hop between any two grid indices at label-distance cost and
// move within a merged vertex for free, which is exactly the quotient
// construction; shortest paths are computed by a dense Dijkstra whose
// relaxation sweeps each piece once per popped member index.
struct UnionPieces {
  std::vector<std::shared_ptr<const DiskInstance>> pieces;
  // global vertex -> (piece, class) members
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> members;
  // piece -> class -> global vertex
  std::vector<std::vector<std::uint32_t>> global_of;

  static UnionPieces single(std::shared_ptr<const DiskInstance> disk);
  std::size_t vertex_count() const { return members.size(); }
};

// Plain weighted graph for grid models and toy cases.
struct ExplicitGraph {
  struct Edge {
    std::uint32_t to;
    double weight;
  };
  std::vector<std::vector<Edge>> adjacency;

  explicit ExplicitGraph(std::size_t n = 0) : adjacency(n) {}
  void add_edge(std::uint32_t a, std::uint32_t b, double w);
  std::size_t vertex_count() const { return adjacency.size(); }
};

// A finite vertex set with a shortest-path pseudometric, per-vertex area
// weight, and an ordered boundary. Optionally restricted to a subset, in
// which case paths may not leave it and everything else sits at +infinity.
class FiniteGeodesicSpace {
 public:
  static FiniteGeodesicSpace from_disk(std::shared_ptr<const DiskInstance> disk);
  static FiniteGeodesicSpace from_union(UnionPieces model, std::vector<double> area_weight,
                                        std::vector<BoundaryMark> boundary,
                                        std::string provenance);
  static FiniteGeodesicSpace from_graph(ExplicitGraph graph, std::vector<double> area_weight,
                                        std::vector<BoundaryMark> boundary,
                                        std::string provenance);

  std::size_t vertex_count() const { return area_weight_.size(); }
  double area_weight(std::uint32_t v) const { return area_weight_[v]; }
  const std::vector<double>& area_weights() const { return area_weight_; }
  double total_area() const;
  const std::vector<BoundaryMark>& boundary() const { return boundary_; }
  const std::string& provenance() const { return provenance_; }

  bool restricted() const { return !subset_.empty(); }
  const std::vector<char>& subset() const { return subset_; }

  DistanceField distances(std::span<const std::uint32_t> sources,
                          const DistanceOptions& options = {}) const;
  DistanceField distances(std::uint32_t source, const DistanceOptions& options = {}) const;
  double distance(std::uint32_t s, std::uint32_t t) const;

  // Same vertex set, paths confined to `keep` (1 = kept).
  FiniteGeodesicSpace internal(std::vector<char> keep) const;

  const UnionPieces* union_model() const { return union_model_.get(); }
  const ExplicitGraph* graph_model() const { return graph_model_.get(); }

 private:
  std::shared_ptr<const UnionPieces> union_model_;
  std::shared_ptr<const ExplicitGraph> graph_model_;
  std::vector<double> area_weight_;
  std::vector<BoundaryMark> boundary_;
  std::vector<char> subset_;
  std::string provenance_;
};

// Vertex chain from s to t realizing the distance; empty when unreachable.
// Distance ties resolve to the smallest predecessor id.
std::vector<std::uint32_t> geodesic(const FiniteGeodesicSpace& space, std::uint32_t s,
                                    std::uint32_t t);

// Total area weight of the open ball of radius delta.
double ball_area(const FiniteGeodesicSpace& space, std::uint32_t center, double delta);
double ball_area(const FiniteGeodesicSpace& space, const DistanceField& field, double delta);

// Per-source shortest-path distances on a single disk.
DistanceField quotient_distances(std::shared_ptr<const DiskInstance> disk, std::uint32_t source,
                                 const DistanceOptions& options = {});

// Sparsified variant: only successor edges (each grid index linked to the
// nearest circularly smaller label on either side, where the label distance
// is attained exactly). Distances are an upper bound on the quotient metric;
// equivalence is unproven, so nothing downstream depends on this space.
FiniteGeodesicSpace sparsified_space(std::shared_ptr<const DiskInstance> disk);

}  // namespace bdisk
