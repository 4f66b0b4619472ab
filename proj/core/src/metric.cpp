#include "bdisk/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "bdisk/errors.hpp"

namespace bdisk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

UnionPieces UnionPieces::single(std::shared_ptr<const DiskInstance> disk) {
  UnionPieces up;
  const std::uint32_t k = disk->vertex_count();
  up.members.resize(k);
  up.global_of.emplace_back(k);
  for (std::uint32_t c = 0; c < k; ++c) {
    up.members[c].emplace_back(0u, c);
    up.global_of[0][c] = c;
  }
  up.pieces.push_back(std::move(disk));
  return up;
}

void ExplicitGraph::add_edge(std::uint32_t a, std::uint32_t b, double w) {
  if (a >= adjacency.size() || b >= adjacency.size())
    throw InvalidParameter("edge endpoint out of range");
  if (w < 0.0) throw InvalidParameter("edge weight must be nonnegative");
  adjacency[a].push_back({b, w});
  adjacency[b].push_back({a, w});
}

namespace {

void seed_sources(std::span<const std::uint32_t> sources, const std::vector<char>& subset,
                  std::vector<double>& dist) {
  if (sources.empty()) throw InvalidParameter("distances: no sources");
  for (auto s : sources) {
    if (s >= dist.size()) throw InvalidParameter("source vertex out of range");
    if (!subset.empty() && !subset[s]) continue;  // source off the subset stays infinite
    dist[s] = 0.0;
  }
}

// Dense Dijkstra over a union of pieces. Edge weights are produced on the
// fly: popping a vertex sweeps each member's piece once, so a full run
// costs O(sum_pieces n_p^2) label reads plus the O(V^2) argmin scans.
DistanceField dijkstra_union(const UnionPieces& up, std::span<const std::uint32_t> sources,
                             const DistanceOptions& options, const std::vector<char>& subset) {
  const std::size_t nv = up.vertex_count();
  DistanceField out;
  out.dist.assign(nv, kInf);
  if (options.predecessors) out.pred.assign(nv, kNoVertex);
  seed_sources(sources, subset, out.dist);

  std::vector<char> done(nv, 0);
  // per-piece scratch for the wrapped suffix minima
  std::vector<std::vector<double>> suffix(up.pieces.size());
  for (std::size_t p = 0; p < up.pieces.size(); ++p)
    suffix[p].resize(up.pieces[p]->grid_size() + 1);

  for (;;) {
    std::uint32_t u = kNoVertex;
    double du = kInf;
    for (std::uint32_t v = 0; v < nv; ++v)
      if (!done[v] && out.dist[v] < du) {
        du = out.dist[v];
        u = v;
      }
    if (u == kNoVertex) break;
    done[u] = 1;
    if (u == options.target) break;

    for (const auto& [p, cls] : up.members[u]) {
      const DiskInstance& disk = *up.pieces[p];
      const auto n = static_cast<std::uint32_t>(disk.grid_size());
      const double* z2 = disk.z_doubled().data();
      const std::uint32_t* cls_of = disk.code().class_ids().data();
      const std::uint32_t* glob = up.global_of[p].data();
      double* suf = suffix[p].data();

      for (const std::uint32_t i : disk.vertex_members(cls)) {
        const double zi = z2[i];
        // suf[r] = min z over the wrapped arc from i+r forward to i
        suf[n] = zi;
        for (std::uint32_t r = n; r-- > 1;) suf[r] = std::min(z2[i + r], suf[r + 1]);
        double run = zi;
        for (std::uint32_t r = 1; r < n; ++r) {
          const double zj = z2[i + r];
          run = std::min(run, zj);
          const double m = run > suf[r] ? run : suf[r];
          const double cand = du + (zi + zj - 2.0 * m);
          const std::uint32_t jj = i + r < n ? i + r : i + r - n;
          const std::uint32_t v = glob[cls_of[jj]];
          if (done[v]) continue;
          if (!subset.empty() && !subset[v]) continue;
          if (cand < out.dist[v]) {
            out.dist[v] = cand;
            if (options.predecessors) out.pred[v] = u;
          } else if (options.predecessors && cand == out.dist[v] && u < out.pred[v]) {
            out.pred[v] = u;
          }
        }
      }
    }
  }
  return out;
}

DistanceField dijkstra_graph(const ExplicitGraph& g, std::span<const std::uint32_t> sources,
                             const DistanceOptions& options, const std::vector<char>& subset) {
  const std::size_t nv = g.vertex_count();
  DistanceField out;
  out.dist.assign(nv, kInf);
  if (options.predecessors) out.pred.assign(nv, kNoVertex);
  seed_sources(sources, subset, out.dist);

  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (auto s : sources)
    if (out.dist[s] == 0.0) heap.push({0.0, s});
  std::vector<char> done(nv, 0);

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == options.target) break;
    for (const auto& e : g.adjacency[u]) {
      if (done[e.to]) continue;
      if (!subset.empty() && !subset[e.to]) continue;
      const double cand = d + e.weight;
      if (cand < out.dist[e.to]) {
        out.dist[e.to] = cand;
        if (options.predecessors) out.pred[e.to] = u;
        heap.push({cand, e.to});
      } else if (options.predecessors && cand == out.dist[e.to] && u < out.pred[e.to]) {
        out.pred[e.to] = u;
      }
    }
  }
  return out;
}

}  // namespace

FiniteGeodesicSpace FiniteGeodesicSpace::from_disk(std::shared_ptr<const DiskInstance> disk) {
  FiniteGeodesicSpace out;
  out.area_weight_ = disk->area_weights();
  const std::size_t m = disk->boundary_points();
  out.boundary_.reserve(m);
  for (std::uint32_t k = 0; k < m; ++k)
    out.boundary_.push_back({disk->boundary_vertex(k), disk->boundary_coordinate(k)});
  out.provenance_ = "disk";
  out.union_model_ = std::make_shared<UnionPieces>(UnionPieces::single(std::move(disk)));
  return out;
}

FiniteGeodesicSpace FiniteGeodesicSpace::from_union(UnionPieces model,
                                                    std::vector<double> area_weight,
                                                    std::vector<BoundaryMark> boundary,
                                                    std::string provenance) {
  if (model.vertex_count() != area_weight.size())
    throw InvalidParameter("area weights do not match the vertex count");
  FiniteGeodesicSpace out;
  out.union_model_ = std::make_shared<UnionPieces>(std::move(model));
  out.area_weight_ = std::move(area_weight);
  out.boundary_ = std::move(boundary);
  out.provenance_ = std::move(provenance);
  return out;
}

FiniteGeodesicSpace FiniteGeodesicSpace::from_graph(ExplicitGraph graph,
                                                    std::vector<double> area_weight,
                                                    std::vector<BoundaryMark> boundary,
                                                    std::string provenance) {
  if (graph.vertex_count() != area_weight.size())
    throw InvalidParameter("area weights do not match the vertex count");
  FiniteGeodesicSpace out;
  out.graph_model_ = std::make_shared<ExplicitGraph>(std::move(graph));
  out.area_weight_ = std::move(area_weight);
  out.boundary_ = std::move(boundary);
  out.provenance_ = std::move(provenance);
  return out;
}

double FiniteGeodesicSpace::total_area() const {
  return std::accumulate(area_weight_.begin(), area_weight_.end(), 0.0);
}

DistanceField FiniteGeodesicSpace::distances(std::span<const std::uint32_t> sources,
                                             const DistanceOptions& options) const {
  if (union_model_) return dijkstra_union(*union_model_, sources, options, subset_);
  return dijkstra_graph(*graph_model_, sources, options, subset_);
}

DistanceField FiniteGeodesicSpace::distances(std::uint32_t source,
                                             const DistanceOptions& options) const {
  const std::uint32_t src[1] = {source};
  return distances(std::span<const std::uint32_t>(src, 1), options);
}

double FiniteGeodesicSpace::distance(std::uint32_t s, std::uint32_t t) const {
  if (t >= vertex_count()) throw InvalidParameter("target vertex out of range");
  DistanceOptions opt;
  opt.target = t;
  return distances(s, opt).dist[t];
}

FiniteGeodesicSpace FiniteGeodesicSpace::internal(std::vector<char> keep) const {
  if (keep.size() != vertex_count())
    throw InvalidParameter("subset mask does not match the vertex count");
  FiniteGeodesicSpace out = *this;
  if (!subset_.empty()) {
    // restrict twice = intersect
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = keep[i] && subset_[i];
  }
  out.subset_ = std::move(keep);
  out.provenance_ += "/internal";
  return out;
}

std::vector<std::uint32_t> geodesic(const FiniteGeodesicSpace& space, std::uint32_t s,
                                    std::uint32_t t) {
  if (s >= space.vertex_count() || t >= space.vertex_count())
    throw InvalidParameter("geodesic endpoint out of range");
  DistanceOptions opt;
  opt.target = t;
  opt.predecessors = true;
  const DistanceField field = space.distances(s, opt);
  if (field.dist[t] == kInf) return {};
  std::vector<std::uint32_t> chain{t};
  std::uint32_t cur = t;
  while (cur != s) {
    cur = field.pred[cur];
    if (cur == kNoVertex) throw NumericalFailure("broken predecessor chain");
    chain.push_back(cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

double ball_area(const FiniteGeodesicSpace& space, const DistanceField& field, double delta) {
  if (!(delta > 0.0)) throw InvalidParameter("ball radius must be positive");
  double acc = 0.0;
  for (std::size_t v = 0; v < field.dist.size(); ++v)
    if (field.dist[v] < delta) acc += space.area_weight(static_cast<std::uint32_t>(v));
  return acc;
}

double ball_area(const FiniteGeodesicSpace& space, std::uint32_t center, double delta) {
  return ball_area(space, space.distances(center), delta);
}

DistanceField quotient_distances(std::shared_ptr<const DiskInstance> disk, std::uint32_t source,
                                 const DistanceOptions& options) {
  return FiniteGeodesicSpace::from_disk(std::move(disk)).distances(source, options);
}

FiniteGeodesicSpace sparsified_space(std::shared_ptr<const DiskInstance> disk) {
  const std::size_t n = disk->grid_size();
  const std::vector<double>& z2 = disk->z_doubled();
  ExplicitGraph graph(disk->vertex_count());

  // Next circularly smaller label on each side, monotone stack over the
  // doubled array. The label distance to that index is attained exactly,
  // so every edge weight is a genuine two-point distance.
  std::vector<std::uint32_t> stack;
  for (std::size_t i = 2 * n; i-- > 0;) {
    while (!stack.empty() && z2[stack.back()] >= z2[i]) stack.pop_back();
    if (!stack.empty() && i < n) {
      const std::size_t j = stack.back() % n;
      graph.add_edge(disk->vertex_of(static_cast<std::uint32_t>(i)),
                     disk->vertex_of(static_cast<std::uint32_t>(j)), z2[i] - z2[stack.back()]);
    }
    stack.push_back(static_cast<std::uint32_t>(i));
  }
  stack.clear();
  for (std::size_t i = 0; i < 2 * n; ++i) {
    while (!stack.empty() && z2[stack.back()] >= z2[i]) stack.pop_back();
    if (!stack.empty() && i >= n) {
      const std::size_t j = stack.back() % n;
      graph.add_edge(disk->vertex_of(static_cast<std::uint32_t>(i - n)),
                     disk->vertex_of(static_cast<std::uint32_t>(j)), z2[i] - z2[stack.back()]);
    }
    stack.push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<BoundaryMark> marks;
  marks.reserve(disk->boundary_points());
  for (std::uint32_t k = 0; k < disk->boundary_points(); ++k)
    marks.push_back({disk->boundary_vertex(k), disk->boundary_coordinate(k)});
  return FiniteGeodesicSpace::from_graph(std::move(graph), disk->area_weights(),
                                         std::move(marks), "disk/sparse");
}

}  // namespace bdisk
