#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "bdisk/disk.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/metric.hpp"
#include "bdisk/rng.hpp"
#include "doctest.h"

using namespace bdisk;

namespace {

std::shared_ptr<const DiskInstance> make_disk(std::size_t n, std::uint32_t replica,
                                              std::uint64_t seed = 271828) {
  DiskSpec spec;
  spec.perimeter = 1.0;
  spec.area = 1.0;
  spec.n = n;
  spec.mode = StepMode::walk;
  spec.seed = seed;
  spec.replica = replica;
  return std::make_shared<DiskInstance>(build_disk(spec));
}

// quotient metric by brute force: complete hop graph on grid indices with
// label-distance weights, zero within classes, then Floyd-Warshall
std::vector<std::vector<double>> floyd_warshall(const DiskInstance& disk) {
  const std::uint32_t n = static_cast<std::uint32_t>(disk.grid_size());
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      d[i][j] = disk.vertex_of(i) == disk.vertex_of(j) ? 0.0 : disk.d_z(i, j);
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i) {
      const double dik = d[i][k];
      for (std::uint32_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], dik + d[k][j]);
    }
  return d;
}

double class_hop_cost(const DiskInstance& disk, std::uint32_t u, std::uint32_t v) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t i : disk.vertex_members(u))
    for (std::uint32_t j : disk.vertex_members(v)) best = std::min(best, disk.d_z(i, j));
  return best;
}

}  // namespace

TEST_CASE("quotient distances match Floyd-Warshall on small disks") {
  for (std::uint32_t rep = 0; rep < 4; ++rep) {
    auto disk = make_disk(64, rep);
    const auto fw = floyd_warshall(*disk);
    const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
    for (std::uint32_t s = 0; s < space.vertex_count(); s += 3) {
      const DistanceField field = space.distances(s);
      const std::uint32_t si = disk->vertex_members(s).front();
      for (std::uint32_t t = 0; t < space.vertex_count(); ++t) {
        const std::uint32_t ti = disk->vertex_members(t).front();
        CHECK(field.dist[t] == doctest::Approx(fw[si][ti]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("distance to the minimal label collapses to the label difference") {
  // chains through nested arc minima telescope, so d(v, argmin z) is exactly
  // z_v - min z; this pins the metric against an independent closed form
  auto disk = make_disk(4096, 0);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  std::uint32_t root = 0;
  const auto z_of = [&](std::uint32_t v) { return disk->z()[disk->vertex_members(v).front()]; };
  for (std::uint32_t v = 1; v < space.vertex_count(); ++v)
    if (z_of(v) < z_of(root)) root = v;
  const DistanceField field = space.distances(root);
  double worst = 0.0;
  for (std::uint32_t v = 0; v < space.vertex_count(); ++v)
    worst = std::max(worst, std::fabs(field.dist[v] - (z_of(v) - z_of(root))));
  CHECK(worst < 1e-9);
}

TEST_CASE("quotient distances form a pseudometric") {
  auto disk = make_disk(256, 1);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const std::uint32_t V = static_cast<std::uint32_t>(space.vertex_count());
  std::vector<std::uint32_t> srcs;
  for (std::uint32_t k = 0; k < 8; ++k) srcs.push_back((k * V) / 8);
  std::vector<DistanceField> fields;
  for (std::uint32_t s : srcs) fields.push_back(space.distances(s));
  for (std::size_t a = 0; a < srcs.size(); ++a) {
    CHECK(fields[a].dist[srcs[a]] == 0.0);
    for (std::size_t b = 0; b < srcs.size(); ++b) {
      CHECK(fields[a].dist[srcs[b]] == doctest::Approx(fields[b].dist[srcs[a]]).epsilon(1e-9));
      for (std::size_t c = 0; c < srcs.size(); ++c)
        CHECK(fields[a].dist[srcs[c]] <=
              fields[a].dist[srcs[b]] + fields[b].dist[srcs[c]] + 1e-9);
    }
  }
}

TEST_CASE("quotient distances never exceed the one-hop label bound") {
  auto disk = make_disk(256, 2);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const std::uint32_t s = 5;
  const DistanceField field = space.distances(s);
  const std::uint32_t si = disk->vertex_members(s).front();
  Rng rng(31, 0);
  for (int q = 0; q < 300; ++q) {
    const std::uint32_t j =
        static_cast<std::uint32_t>(rng.uniform_below(disk->grid_size()));
    CHECK(field.dist[disk->vertex_of(j)] <= disk->d_z(si, j) + 1e-9);
  }
}

TEST_CASE("geodesics realize the distance hop by hop") {
  auto disk = make_disk(256, 3);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const std::uint32_t V = static_cast<std::uint32_t>(space.vertex_count());
  Rng rng(32, 0);
  for (int q = 0; q < 5; ++q) {
    const std::uint32_t s = static_cast<std::uint32_t>(rng.uniform_below(V));
    const std::uint32_t t = static_cast<std::uint32_t>(rng.uniform_below(V));
    const auto chain = geodesic(space, s, t);
    REQUIRE(!chain.empty());
    CHECK(chain.front() == s);
    CHECK(chain.back() == t);
    double total = 0.0;
    for (std::size_t k = 1; k < chain.size(); ++k)
      total += class_hop_cost(*disk, chain[k - 1], chain[k]);
    CHECK(total == doctest::Approx(space.distance(s, t)).epsilon(1e-9));
  }
  const auto self_chain = geodesic(space, 7, 7);
  CHECK(self_chain == std::vector<std::uint32_t>{7});
}

TEST_CASE("ball area sums the weights below the radius") {
  auto disk = make_disk(256, 4);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const std::uint32_t c = 11;
  const DistanceField field = space.distances(c);
  for (double delta : {0.05, 0.2, 0.6}) {
    double want = 0.0;
    for (std::uint32_t v = 0; v < space.vertex_count(); ++v)
      if (field.dist[v] < delta) want += space.area_weight(v);
    CHECK(ball_area(space, c, delta) == doctest::Approx(want).epsilon(1e-12));
    CHECK(ball_area(space, field, delta) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(ball_area(space, c, 1e9) == doctest::Approx(space.total_area()).epsilon(1e-12));
  CHECK_THROWS_AS(ball_area(space, c, 0.0), InvalidParameter);
  CHECK_THROWS_AS(ball_area(space, c, -1.0), InvalidParameter);
}

TEST_CASE("restricted spaces confine chains to the kept subset") {
  auto disk = make_disk(128, 5);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const std::uint32_t V = static_cast<std::uint32_t>(space.vertex_count());
  CHECK_FALSE(space.restricted());

  const FiniteGeodesicSpace all = space.internal(std::vector<char>(V, 1));
  CHECK(all.restricted());
  CHECK(all.distance(0, V / 2) == doctest::Approx(space.distance(0, V / 2)).epsilon(1e-12));

  // only the endpoints kept: the sole chain is the direct hop
  const std::uint32_t s = 3, t = V - 2;
  std::vector<char> keep(V, 0);
  keep[s] = keep[t] = 1;
  const FiniteGeodesicSpace pair = space.internal(keep);
  CHECK(pair.distance(s, t) == doctest::Approx(class_hop_cost(*disk, s, t)).epsilon(1e-12));
  const DistanceField field = pair.distances(s);
  CHECK(std::isinf(field.dist[(s + 1) % V == t ? (s + 2) % V : (s + 1) % V]));

  CHECK(pair.distance(s, t) >= space.distance(s, t) - 1e-12);
  CHECK_THROWS_AS(space.internal(std::vector<char>(V + 1, 1)), InvalidParameter);
}

TEST_CASE("explicit graphs give exact shortest paths") {
  ExplicitGraph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 2.0);
  g.add_edge(0, 2, 10.0);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_graph(
      g, std::vector<double>{1, 1, 1, 1}, {}, "toy");
  CHECK(space.distance(0, 2) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(space.distance(2, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::isinf(space.distance(0, 3)));  // vertex 3 is isolated
  CHECK(geodesic(space, 0, 2) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(geodesic(space, 0, 3).empty());
  CHECK(space.total_area() == doctest::Approx(4.0).epsilon(1e-12));

  ExplicitGraph bad(2);
  CHECK_THROWS_AS(bad.add_edge(0, 5, 1.0), InvalidParameter);
  CHECK_THROWS_AS(bad.add_edge(0, 1, -0.5), InvalidParameter);
}

TEST_CASE("targeted searches agree with full fields") {
  auto disk = make_disk(256, 6);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const std::uint32_t s = 2, t = static_cast<std::uint32_t>(space.vertex_count()) - 3;
  const DistanceField full = space.distances(s);
  DistanceOptions opt;
  opt.target = t;
  const DistanceField early = space.distances(s, opt);
  CHECK(early.dist[t] == doctest::Approx(full.dist[t]).epsilon(1e-12));
  CHECK(space.distance(s, t) == doctest::Approx(full.dist[t]).epsilon(1e-12));
  CHECK_THROWS_AS(space.distances(std::uint32_t{0xfffffff0u}), InvalidParameter);
}

TEST_CASE("per-disk helper matches the space built from the same disk") {
  auto disk = make_disk(128, 7);
  const FiniteGeodesicSpace space = FiniteGeodesicSpace::from_disk(disk);
  const DistanceField a = quotient_distances(disk, 4);
  const DistanceField b = space.distances(4);
  REQUIRE(a.dist.size() == b.dist.size());
  for (std::size_t v = 0; v < a.dist.size(); ++v)
    CHECK(a.dist[v] == doctest::Approx(b.dist[v]).epsilon(1e-12));
}

TEST_CASE("sparsified distances upper-bound the quotient metric") {
  auto disk = make_disk(1024, 8);
  const FiniteGeodesicSpace dense = FiniteGeodesicSpace::from_disk(disk);
  const FiniteGeodesicSpace sparse = sparsified_space(disk);
  REQUIRE(sparse.vertex_count() == dense.vertex_count());
  const std::uint32_t V = static_cast<std::uint32_t>(dense.vertex_count());
  for (std::uint32_t k = 0; k < 6; ++k) {
    const std::uint32_t s = (k * V) / 6;
    const DistanceField fd = dense.distances(s);
    const DistanceField fs = sparse.distances(s);
    for (std::uint32_t v = 0; v < V; ++v) CHECK(fs.dist[v] >= fd.dist[v] - 1e-9);
    CHECK(fs.dist[s] == 0.0);
  }
}
