#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "bdisk/disk.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/gluing.hpp"
#include "bdisk/metric.hpp"
#include "json.hpp"
#include "doctest.h"

using namespace bdisk;

namespace {

std::shared_ptr<const DiskInstance> make_disk(std::size_t n, std::uint32_t replica) {
  DiskSpec spec;
  spec.perimeter = 1.0;
  spec.area = 1.0;
  spec.n = n;
  spec.mode = StepMode::walk;
  spec.seed = 161803;
  spec.replica = replica;
  return std::make_shared<DiskInstance>(build_disk(spec));
}

// Brute-force quotient of the union: complete label-distance hops inside
// each piece, free moves inside classes and across glued identifications
// (taken from the model's member lists).
std::vector<std::vector<double>> union_floyd_warshall(const GluedSpace& glued) {
  const UnionPieces& model = glued.model();
  std::vector<std::size_t> offset(model.pieces.size(), 0);
  std::size_t total = 0;
  for (std::size_t p = 0; p < model.pieces.size(); ++p) {
    offset[p] = total;
    total += model.pieces[p]->grid_size();
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(total, std::vector<double>(total, inf));
  const auto global_at = [&](std::size_t p, std::uint32_t i) {
    return model.global_of[p][model.pieces[p]->vertex_of(i)];
  };
  for (std::size_t p = 0; p < model.pieces.size(); ++p) {
    const DiskInstance& disk = *model.pieces[p];
    for (std::uint32_t i = 0; i < disk.grid_size(); ++i)
      for (std::uint32_t j = 0; j < disk.grid_size(); ++j)
        d[offset[p] + i][offset[p] + j] =
            disk.vertex_of(i) == disk.vertex_of(j) ? 0.0 : disk.d_z(i, j);
  }
  for (std::size_t p = 0; p < model.pieces.size(); ++p)
    for (std::size_t q = 0; q < model.pieces.size(); ++q)
      for (std::uint32_t i = 0; i < model.pieces[p]->grid_size(); ++i)
        for (std::uint32_t j = 0; j < model.pieces[q]->grid_size(); ++j)
          if (global_at(p, i) == global_at(q, j))
            d[offset[p] + i][offset[q] + j] = 0.0;
  const std::size_t n = total;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i][k];
      if (std::isinf(dik)) continue;
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], dik + d[k][j]);
    }
  return d;
}

std::size_t grid_rep(const GluedSpace& glued, std::uint32_t v,
                     const std::vector<std::size_t>& offset) {
  const auto [piece, cls] = glued.members(v).front();
  return offset[piece] + glued.model().pieces[piece]->vertex_members(cls).front();
}

}  // namespace

TEST_CASE("full-boundary gluing matches the brute-force union quotient") {
  auto d1 = make_disk(48, 0);
  auto d2 = make_disk(48, 1);
  const GluedSpace glued =
      glue_disks(d1, d2, {0.0, d1->perimeter()}, {0.0, d2->perimeter()}, true);
  const auto fw = union_floyd_warshall(glued);
  std::vector<std::size_t> offset{0, d1->grid_size()};
  const std::uint32_t V = static_cast<std::uint32_t>(glued.space.vertex_count());
  for (std::uint32_t s = 0; s < V; s += 5) {
    const DistanceField field = glued.space.distances(s);
    const std::size_t si = grid_rep(glued, s, offset);
    for (std::uint32_t t = 0; t < V; ++t)
      CHECK(field.dist[t] == doctest::Approx(fw[si][grid_rep(glued, t, offset)]).epsilon(1e-9));
  }
}

TEST_CASE("seam marks carry both sides in coordinate order") {
  auto d1 = make_disk(48, 2);
  auto d2 = make_disk(48, 3);
  const GluedSpace glued =
      glue_disks(d1, d2, {0.0, d1->perimeter()}, {0.0, d2->perimeter()}, true);
  REQUIRE(glued.interface.size() >= 2);
  REQUIRE(glued.seam_breaks.size() == 1);
  CHECK(glued.seam_breaks[0] == 0.0);
  double prev = -1.0;
  for (const auto& mark : glued.interface) {
    CHECK(mark.coordinate >= prev);
    prev = mark.coordinate;
    bool p0 = false, p1 = false;
    for (const auto& [piece, cls] : glued.members(mark.vertex)) {
      p0 |= piece == 0;
      p1 |= piece == 1;
    }
    CHECK(p0);
    CHECK(p1);
    CHECK(glued.piece_of(mark.vertex) == 0);
  }
  // total mass is conserved by the merge
  CHECK(glued.space.total_area() == doctest::Approx(d1->area() + d2->area()).epsilon(1e-9));
}

TEST_CASE("single-point gluing has a closed-form quotient") {
  auto d1 = make_disk(128, 4);
  auto d2 = make_disk(128, 5);
  const double r1 = 0.3 * d1->perimeter();
  const double r2 = 0.6 * d2->perimeter();
  const GluedSpace glued = glue_disks(d1, d2, {r1, r1}, {r2, r2}, true);
  REQUIRE(glued.interface.size() == 1);
  const std::uint32_t pin = glued.interface[0].vertex;
  const auto members = glued.members(pin);
  REQUIRE(members.size() >= 2);
  std::uint32_t c1 = kNoVertex, c2 = kNoVertex;
  for (const auto& [piece, cls] : members) (piece == 0 ? c1 : c2) = cls;
  REQUIRE(c1 != kNoVertex);
  REQUIRE(c2 != kNoVertex);

  const FiniteGeodesicSpace s1 = FiniteGeodesicSpace::from_disk(d1);
  const FiniteGeodesicSpace s2 = FiniteGeodesicSpace::from_disk(d2);
  const DistanceField from_p = s1.distances(c1);
  const DistanceField from_q = s2.distances(c2);
  const auto& model = glued.model();

  for (std::uint32_t cx = 0; cx < d1->vertex_count(); cx += 17) {
    const DistanceField field = glued.space.distances(model.global_of[0][cx]);
    const DistanceField intra = s1.distances(cx);
    // within the pinned piece the pin adds no shortcut
    for (std::uint32_t cy = 0; cy < d1->vertex_count(); cy += 13)
      CHECK(field.dist[model.global_of[0][cy]] ==
            doctest::Approx(intra.dist[cy]).epsilon(1e-9));
    // across pieces every chain funnels through the pin
    for (std::uint32_t cy = 0; cy < d2->vertex_count(); cy += 13)
      CHECK(field.dist[model.global_of[1][cy]] ==
            doctest::Approx(intra.dist[c1] + from_q.dist[cy]).epsilon(1e-9));
  }
  (void)from_p;
}

TEST_CASE("gluing rejects malformed descriptions") {
  auto d1 = make_disk(48, 6);
  auto d2 = make_disk(48, 7);
  const double p1 = d1->perimeter(), p2 = d2->perimeter();
  CHECK_THROWS_AS(glue_disks(d1, d2, {0.0, 0.5 * p1}, {0.0, 0.25 * p2}, true), InvalidSchema);
  CHECK_THROWS_AS(glue_disks(d1, d2, {0.5 * p1, 0.1 * p1}, {0.0, 0.4 * p2}, true),
                  InvalidSchema);
  CHECK_THROWS_AS(glue_disks(d1, d2, {0.0, p1 + 1.0}, {0.0, p2}, true), InvalidSchema);
  CHECK_THROWS_AS(self_glue(d1, {0.0, 0.3 * p1}, {0.2 * p1, 0.5 * p1}, true), InvalidSchema);
  CHECK_THROWS_AS(quotient_space({}, GluingSchema{}), InvalidSchema);

  GluingSchema schema;
  schema.identifications.push_back({ArcRef{0, 0.0, 0.1}, ArcRef{3, 0.0, 0.1}, true});
  CHECK_THROWS_AS(quotient_space({d1}, schema), InvalidSchema);
}

TEST_CASE("schema json round-trips and rejects junk") {
  GluingSchema schema;
  schema.piece_files = {"a.bdisk", "b.bdisk"};
  schema.identifications.push_back({ArcRef{0, 0.0, 0.5}, ArcRef{1, 0.25, 0.75}, true});
  schema.identifications.push_back({ArcRef{0, 0.6, 0.6}, ArcRef{1, 0.9, 0.9}, false});
  const std::string text = gluing_schema_to_json(schema);
  const GluingSchema back = parse_gluing_schema(text);
  REQUIRE(back.identifications.size() == 2);
  CHECK(back.piece_files == schema.piece_files);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.identifications[i].a.piece == schema.identifications[i].a.piece);
    CHECK(back.identifications[i].a.r1 == schema.identifications[i].a.r1);
    CHECK(back.identifications[i].a.r2 == schema.identifications[i].a.r2);
    CHECK(back.identifications[i].b.piece == schema.identifications[i].b.piece);
    CHECK(back.identifications[i].reversed == schema.identifications[i].reversed);
  }

  CHECK_THROWS_AS(parse_gluing_schema("not json"), InvalidSchema);
  CHECK_THROWS_AS(parse_gluing_schema("{}"), InvalidSchema);

  nlohmann::json j = nlohmann::json::parse(text);
  j["identifications"][0]["orientation"] = "sideways";
  CHECK_THROWS_AS(parse_gluing_schema(j.dump()), InvalidSchema);
  j = nlohmann::json::parse(text);
  j["identifications"][0]["a"]["arc"] = {0.0, 0.1, 0.2};
  CHECK_THROWS_AS(parse_gluing_schema(j.dump()), InvalidSchema);
}

TEST_CASE("self-gluing preserves mass and produces a seam") {
  auto disk = make_disk(256, 8);
  const double per = disk->perimeter();
  const GluedSpace glued = self_glue(disk, {0.0, 0.25 * per}, {0.5 * per, 0.75 * per}, true);
  CHECK(glued.space.total_area() == doctest::Approx(disk->area()).epsilon(1e-9));
  CHECK(glued.interface.size() >= 2);
  CHECK(glued.space.vertex_count() < FiniteGeodesicSpace::from_disk(disk).vertex_count());
}

TEST_CASE("flat counterexample halves seam distances") {
  const FlatCounterexample flat = flat_counterexample(32);
  const std::uint32_t a = flat.seam_vertex(0.25);
  const std::uint32_t b = flat.seam_vertex(0.75);
  const double with = flat.with_segment.distance(a, b);
  const double without = flat.without_segment.distance(a, b);
  CHECK(std::fabs(without - 0.5) <= 2.5 / 32.0);
  CHECK(std::fabs(with - 0.25) <= 2.5 / 32.0);
  const double ratio = with / without;
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);
  CHECK_THROWS_AS(flat_counterexample(3), InvalidParameter);
  CHECK_THROWS_AS(flat.seam_vertex(1.5), InvalidParameter);
}

TEST_CASE("seam segment counting on chains and balls") {
  auto d1 = make_disk(64, 9);
  auto d2 = make_disk(64, 10);
  const GluedSpace glued =
      glue_disks(d1, d2, {0.0, d1->perimeter()}, {0.0, d2->perimeter()}, true);
  const double seam_len = glued.interface.back().coordinate;
  REQUIRE(seam_len > 0.0);

  // deepest vertex of each side, measured from one seam mark
  const DistanceField from_seam = glued.space.distances(glued.interface.front().vertex);
  std::uint32_t a = kNoVertex, b = kNoVertex;
  double da = -1.0, db = -1.0;
  for (std::uint32_t v = 0; v < glued.space.vertex_count(); ++v) {
    if (glued.members(v).size() > 1) continue;  // skip seam vertices
    const double d = from_seam.dist[v];
    if (glued.piece_of(v) == 0 && d > da) da = d, a = v;
    if (glued.piece_of(v) == 1 && d > db) db = d, b = v;
  }
  REQUIRE(a != kNoVertex);
  REQUIRE(b != kNoVertex);

  const auto chain = geodesic(glued.space, a, b);
  const double delta = std::sqrt(seam_len / 4.0);
  const std::size_t crossings = crossing_count(glued, chain, delta);
  CHECK(crossings >= 1);
  CHECK(crossings <= 4);
  const std::vector<std::uint32_t> lone{a};
  CHECK(crossing_count(glued, lone, delta) == 0);

  const double cell = seam_len / static_cast<double>(glued.interface.size() - 1);
  CHECK_THROWS_AS(crossing_count(glued, chain, std::sqrt(0.5 * cell)), InvalidParameter);
  CHECK_THROWS_AS(crossing_count(glued, chain, -1.0), InvalidParameter);

  const std::uint32_t mid = glued.interface[glued.interface.size() / 2].vertex;
  const std::size_t segs = ball_segment_count(glued, mid, delta, 0.2);
  CHECK(segs >= 1);
  CHECK(segs <= static_cast<std::size_t>(std::ceil(seam_len / (delta * delta))) + 1);
  const DistanceField from_mid = glued.space.distances(mid);
  CHECK(ball_segment_count(glued, from_mid, delta, 0.2) == segs);
}
