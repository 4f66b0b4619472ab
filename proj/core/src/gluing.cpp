#include "bdisk/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include <json.hpp>

#include "bdisk/errors.hpp"

namespace bdisk {
namespace {

using nlohmann::json;

// union-find with path halving
std::uint32_t uf_find(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void uf_union(std::vector<std::uint32_t>& parent, std::uint32_t a, std::uint32_t b) {
  a = uf_find(parent, a);
  b = uf_find(parent, b);
  if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

struct ArcMarks {
  std::uint32_t k_lo;
  std::uint32_t k_hi;
  double cell;
  double length() const { return static_cast<double>(k_hi - k_lo) * cell; }
  std::size_t count() const { return k_hi - k_lo + 1; }
};

ArcMarks resolve_arc(const DiskInstance& disk, const ArcRef& arc) {
  const double ell = disk.perimeter();
  const double cell = disk.boundary_cell_width();
  if (!(arc.r1 >= -1e-9) || !(arc.r2 <= ell + 1e-9) || !(arc.r1 <= arc.r2))
    throw InvalidSchema("arc outside the boundary or reversed");
  const auto cells = static_cast<double>(disk.boundary_points() - 1);
  const auto k_lo = static_cast<std::uint32_t>(
      std::llround(std::clamp(arc.r1 / ell, 0.0, 1.0) * cells));
  const auto k_hi = static_cast<std::uint32_t>(
      std::llround(std::clamp(arc.r2 / ell, 0.0, 1.0) * cells));
  // r1 == r2 is a point identification; k_hi == k_lo then
  return {k_lo, std::max(k_hi, k_lo), cell};
}

}  // namespace

GluedSpace quotient_space(std::vector<std::shared_ptr<const DiskInstance>> pieces,
                          const GluingSchema& schema) {
  if (pieces.empty()) throw InvalidSchema("no pieces");
  const std::size_t np = pieces.size();

  std::vector<std::uint32_t> offset(np + 1, 0);
  for (std::size_t p = 0; p < np; ++p)
    offset[p + 1] = offset[p] + pieces[p]->vertex_count();
  const std::uint32_t raw_total = offset[np];

  std::vector<std::uint32_t> parent(raw_total);
  for (std::uint32_t i = 0; i < raw_total; ++i) parent[i] = i;
  std::vector<char> on_seam(raw_total, 0);

  struct PendingMark {
    std::uint32_t raw;
    double coordinate;
  };
  std::vector<PendingMark> pending;
  std::vector<double> seam_breaks;
  double seam_offset = 0.0;

  for (const auto& ident : schema.identifications) {
    if (ident.a.piece >= np || ident.b.piece >= np)
      throw InvalidSchema("identification references an unknown piece");
    const DiskInstance& da = *pieces[ident.a.piece];
    const DiskInstance& db = *pieces[ident.b.piece];
    const ArcMarks ma = resolve_arc(da, ident.a);
    const ArcMarks mb = resolve_arc(db, ident.b);
    if (ident.a.piece == ident.b.piece) {
      // self-gluing arcs must not overlap
      const double lo = std::max(ident.a.r1, ident.b.r1);
      const double hi = std::min(ident.a.r2, ident.b.r2);
      if (lo + 1e-12 < hi) throw InvalidSchema("self-gluing arcs overlap");
    }
    if (std::fabs(ma.length() - mb.length()) > std::max(ma.cell, mb.cell) * (1.0 + 1e-9))
      throw InvalidSchema("arc lengths differ by more than one boundary cell");

    // Walk the finer side and merge each of its marks with the nearest mark
    // of the coarser side at the matched cumulative coordinate.
    const bool a_fine = ma.count() >= mb.count();
    const ArcMarks& fine = a_fine ? ma : mb;
    const ArcMarks& coarse = a_fine ? mb : ma;
    const DiskInstance& dfine = a_fine ? da : db;
    const DiskInstance& dcoarse = a_fine ? db : da;
    const std::uint32_t off_fine = offset[a_fine ? ident.a.piece : ident.b.piece];
    const std::uint32_t off_coarse = offset[a_fine ? ident.b.piece : ident.a.piece];

    seam_breaks.push_back(seam_offset);
    for (std::uint32_t k = fine.k_lo; k <= fine.k_hi; ++k) {
      const double o = static_cast<double>(k - fine.k_lo) * fine.cell;
      const double frac = std::clamp(o / std::max(fine.length(), 1e-300), 0.0, 1.0);
      const double pos = ident.reversed
                             ? static_cast<double>(coarse.k_hi) - frac * static_cast<double>(coarse.k_hi - coarse.k_lo)
                             : static_cast<double>(coarse.k_lo) + frac * static_cast<double>(coarse.k_hi - coarse.k_lo);
      const auto kc = static_cast<std::uint32_t>(std::llround(pos));
      const std::uint32_t ra = off_fine + dfine.boundary_vertex(k);
      const std::uint32_t rb = off_coarse + dcoarse.boundary_vertex(kc);
      uf_union(parent, ra, rb);
      on_seam[ra] = on_seam[rb] = 1;
      pending.push_back({ra, seam_offset + o});
    }
    seam_offset += fine.length();
  }

  // Dense ids in order of smallest raw member.
  std::vector<std::uint32_t> dense(raw_total, kNoVertex);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < raw_total; ++i) {
    const std::uint32_t r = uf_find(parent, i);
    if (dense[r] == kNoVertex) dense[r] = next++;
  }

  UnionPieces up;
  up.pieces = pieces;
  up.members.resize(next);
  up.global_of.resize(np);
  std::vector<double> area(next, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    const std::uint32_t k = pieces[p]->vertex_count();
    up.global_of[p].resize(k);
    for (std::uint32_t c = 0; c < k; ++c) {
      const std::uint32_t g = dense[uf_find(parent, offset[p] + c)];
      up.global_of[p][c] = g;
      up.members[g].emplace_back(static_cast<std::uint32_t>(p), c);
      area[g] += pieces[p]->area_weight(c);
    }
  }

  // Boundary marks that were not glued keep their piece-local coordinates,
  // offset by the perimeters of earlier pieces.
  std::vector<BoundaryMark> leftover;
  double perim_offset = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    const std::size_t mpts = pieces[p]->boundary_points();
    for (std::uint32_t k = 0; k < mpts; ++k) {
      const std::uint32_t raw = offset[p] + pieces[p]->boundary_vertex(k);
      if (on_seam[uf_find(parent, raw)]) continue;
      leftover.push_back({dense[uf_find(parent, raw)],
                          perim_offset + pieces[p]->boundary_coordinate(k)});
    }
    perim_offset += pieces[p]->perimeter();
  }

  GluedSpace out;
  out.space = FiniteGeodesicSpace::from_union(std::move(up), std::move(area),
                                              std::move(leftover), "glued");
  out.interface.reserve(pending.size());
  for (const auto& pm : pending)
    out.interface.push_back({dense[uf_find(parent, pm.raw)], pm.coordinate});
  out.seam_breaks = std::move(seam_breaks);
  return out;
}

GluedSpace glue_disks(std::shared_ptr<const DiskInstance> d1,
                      std::shared_ptr<const DiskInstance> d2,
                      std::pair<double, double> arc1, std::pair<double, double> arc2,
                      bool reversed) {
  GluingSchema schema;
  schema.identifications.push_back(
      {{0u, arc1.first, arc1.second}, {1u, arc2.first, arc2.second}, reversed});
  return quotient_space({std::move(d1), std::move(d2)}, schema);
}

GluedSpace self_glue(std::shared_ptr<const DiskInstance> disk, std::pair<double, double> arc1,
                     std::pair<double, double> arc2, bool reversed) {
  GluingSchema schema;
  schema.identifications.push_back(
      {{0u, arc1.first, arc1.second}, {0u, arc2.first, arc2.second}, reversed});
  return quotient_space({std::move(disk)}, schema);
}

std::uint32_t FlatCounterexample::seam_vertex(double x) const {
  if (x < 0.0 || x > 1.0) throw InvalidParameter("seam coordinate outside [0,1]");
  return seam[static_cast<std::size_t>(std::llround(x * static_cast<double>(m)))];
}

FlatCounterexample flat_counterexample(std::size_t m) {
  if (m < 4) throw InvalidParameter("flat counterexample needs m >= 4");
  const auto side = static_cast<std::uint32_t>(m + 1);
  const std::uint32_t grid = side * side;
  const std::uint32_t lower0 = 0, upper0 = grid, seg0 = 2 * grid;
  const std::uint32_t total = 2 * grid + side;
  const double h = 1.0 / static_cast<double>(m);

  auto build = [&](bool with_segment) {
    ExplicitGraph g(total);
    for (std::uint32_t base : {lower0, upper0}) {
      for (std::uint32_t iy = 0; iy < side; ++iy) {
        for (std::uint32_t ix = 0; ix < side; ++ix) {
          const std::uint32_t v = base + iy * side + ix;
          if (ix + 1 < side) g.add_edge(v, v + 1, h);
          if (iy + 1 < side) g.add_edge(v, v + side, h);
        }
      }
    }
    for (std::uint32_t k = 0; k + 1 < side; ++k) g.add_edge(seg0 + k, seg0 + k + 1, 0.5 * h);
    // the square: top row of the lower half is the bottom row of the upper
    for (std::uint32_t ix = 0; ix < side; ++ix)
      g.add_edge(lower0 + m * side + ix, upper0 + ix, 0.0);
    if (with_segment) {
      // t -> (2t, 0): segment point k/(2m) onto seam column k
      for (std::uint32_t k = 0; k < side; ++k)
        g.add_edge(seg0 + k, lower0 + m * side + k, 0.0);
    }
    std::vector<double> area(total, h * h);
    for (std::uint32_t k = 0; k < side; ++k) area[seg0 + k] = 0.5 * h;
    std::vector<BoundaryMark> marks;
    marks.reserve(side);
    for (std::uint32_t ix = 0; ix < side; ++ix)
      marks.push_back(
          {static_cast<std::uint32_t>(lower0 + m * side + ix), static_cast<double>(ix) * h});
    return FiniteGeodesicSpace::from_graph(std::move(g), std::move(area), std::move(marks),
                                           with_segment ? "flat+segment" : "flat");
  };

  FlatCounterexample out;
  out.with_segment = build(true);
  out.without_segment = build(false);
  out.m = m;
  out.seam.resize(side);
  for (std::uint32_t ix = 0; ix < side; ++ix) out.seam[ix] = lower0 + m * side + ix;
  return out;
}

namespace {

std::size_t seam_segments_hit(const GluedSpace& glued, double delta,
                              const std::function<bool(std::uint32_t)>& hits) {
  if (!(delta > 0.0)) throw InvalidParameter("delta must be positive");
  if (glued.interface.empty()) throw InvalidParameter("glued space has no seam");
  double max_cell = 0.0;
  for (std::size_t i = 1; i < glued.interface.size(); ++i) {
    const double inc = glued.interface[i].coordinate - glued.interface[i - 1].coordinate;
    if (inc > 0.0) max_cell = std::max(max_cell, inc);
  }
  const double seg = delta * delta;
  if (seg < max_cell)
    throw InvalidParameter("delta^2 below the seam resolution");
  std::unordered_set<std::size_t> seen;
  for (const auto& mark : glued.interface) {
    if (!hits(mark.vertex)) continue;
    seen.insert(static_cast<std::size_t>(mark.coordinate / seg));
  }
  return seen.size();
}

}  // namespace

std::size_t crossing_count(const GluedSpace& glued, std::span<const std::uint32_t> chain,
                           double delta) {
  std::unordered_set<std::uint32_t> on_chain(chain.begin(), chain.end());
  return seam_segments_hit(glued, delta,
                           [&](std::uint32_t v) { return on_chain.count(v) > 0; });
}

std::size_t ball_segment_count(const GluedSpace& glued, const DistanceField& from_center,
                               double delta, double v) {
  const double radius = std::pow(delta, 1.0 + v);
  return seam_segments_hit(glued, delta, [&](std::uint32_t vert) {
    return from_center.dist[vert] < radius;
  });
}

std::size_t ball_segment_count(const GluedSpace& glued, std::uint32_t center, double delta,
                               double v) {
  return ball_segment_count(glued, glued.space.distances(center), delta, v);
}

GluingSchema parse_gluing_schema(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidSchema(std::string("schema is not valid JSON: ") + e.what());
  }
  GluingSchema out;
  try {
    if (j.contains("pieces"))
      for (const auto& p : j.at("pieces"))
        out.piece_files.push_back(p.value("file", ""));
    for (const auto& ident : j.at("identifications")) {
      Identification id;
      const auto read_arc = [](const json& side) {
        ArcRef arc;
        arc.piece = side.at("piece").get<std::uint32_t>();
        const auto& range = side.at("arc");
        if (!range.is_array() || range.size() != 2)
          throw InvalidSchema("arc must be [r1, r2]");
        arc.r1 = range[0].get<double>();
        arc.r2 = range[1].get<double>();
        return arc;
      };
      id.a = read_arc(ident.at("a"));
      id.b = read_arc(ident.at("b"));
      const std::string orient = ident.value("orientation", "reversed");
      if (orient == "reversed")
        id.reversed = true;
      else if (orient == "same")
        id.reversed = false;
      else
        throw InvalidSchema("orientation must be \"reversed\" or \"same\"");
      out.identifications.push_back(id);
    }
  } catch (const json::exception& e) {
    throw InvalidSchema(std::string("schema fields missing or mistyped: ") + e.what());
  }
  if (out.identifications.empty()) throw InvalidSchema("no identifications");
  return out;
}

std::string gluing_schema_to_json(const GluingSchema& schema) {
  json j;
  j["pieces"] = json::array();
  for (const auto& f : schema.piece_files) j["pieces"].push_back({{"file", f}});
  j["identifications"] = json::array();
  for (const auto& id : schema.identifications) {
    j["identifications"].push_back(
        {{"a", {{"piece", id.a.piece}, {"arc", {id.a.r1, id.a.r2}}}},
         {"b", {{"piece", id.b.piece}, {"arc", {id.b.r1, id.b.r2}}}},
         {"orientation", id.reversed ? "reversed" : "same"}});
  }
  return j.dump(2);
}

}  // namespace bdisk
