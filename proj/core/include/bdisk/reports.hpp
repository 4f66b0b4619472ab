#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bdisk/fitting.hpp"

namespace bdisk {

struct ReportItem {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool checked = false;  // carries a pass band
  bool pass = true;
};

// One named experiment: a seed manifest (parameters), measured items with
// optional pass bands, and the raw (scale, value) pairs behind any fit.
// Reports are pure functions of their parameter structs; rerunning with the
// same parameters reproduces every number bit for bit.
struct Report {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ReportItem> items;
  std::vector<std::array<double, 2>> raw;

  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, double value);
  void param(const std::string& key, std::uint64_t value);
  ReportItem& add(const std::string& item, double value);
  ReportItem& add_band(const std::string& item, double value, double lo, double hi);
  bool pass() const;

  std::string to_json() const;
  std::string to_text() const;  // aligned table
  std::string raw_csv() const;  // columns scale,value
};

// Means of the running-infimum drop over short windows, and the scaling of
// the count of long excursions away from the running infimum.
struct ExcursionCountParams {
  std::uint64_t seed = 20260814;
  std::size_t mean_replicas = 100000;
  double mean_dt = 1.6e-5;
  std::size_t count_replicas = 10000;
  std::size_t count_grid = std::size_t{1} << 12;
  double mean_rel_tol = 0.02;
  double slope_lo = -0.6;
  double slope_hi = -0.4;
};
Report excursion_count_report(const ExcursionCountParams& p = {});

// Count of excursions longer than duration_floor while the running infimum
// sweeps a unit window; compared against the constant-intensity law
// mean = 2 pi^{-1/2} window / sqrt(duration_floor).
struct ExcursionPoissonParams {
  std::uint64_t seed = 20260814;
  std::size_t replicas = 100000;
  double window = 1.0;
  double duration_floor = 1.0;
  double dt = 1e-4;
  double rel_tol = 0.05;
  double dispersion_lo = 0.9;
  double dispersion_hi = 1.1;
};
Report excursion_poisson_report(const ExcursionPoissonParams& p = {});

// Tail of sup |z0| over unit-duration excursions: slope of log(-log P)
// against log A, plus the -log P / A^{4/3} ratios.
struct SnakeTailParams {
  std::uint64_t seed = 20260814;
  std::size_t excursions = 1000000;
  std::size_t grid = 1024;
  double a_lo = 1.5;
  double a_hi = 2.5;
  std::size_t a_points = 5;
  double slope_lo = 1.0;
  double slope_hi = 1.7;
  double ratio_lo = 0.1;  // wide band on the prefactor estimate; the
  double ratio_hi = 3.0;  // binding pass item is the slope
};
Report snake_tail_report(const SnakeTailParams& p = {});

// Shared disk ensemble: interior ball volumes, boundary distance modulus,
// and arc-neighborhood areas, each as a pooled log-log fit with one
// intercept per disk (the laws carry instance constants).
struct DiskGeometryParams {
  std::uint64_t seed = 20260814;
  std::size_t replicas = 20;
  std::size_t n = std::size_t{1} << 14;
  double perimeter = 1.0;
  double area = 1.0;
  std::size_t workers = 1;
  // interior ball growth around the minimal-label vertex: chains collapse
  // there to exact label differences (asserted per replica), so the ball
  // is free of shortest-path truncation error; the sweep keeps the ball
  // off the boundary and above the resolvable cell count
  std::size_t ball_points = 10;
  double ball_delta_lo = 0.10;
  double ball_delta_hi = 1.45;
  double ball_min_cells = 16.0;
  double ball_boundary_frac = 0.9;  // delta <= frac * depth(center)
  double collapse_tol = 1e-6;
  double ball_slope_lo = 3.5;
  double ball_slope_hi = 4.5;
  // boundary modulus: per-scale medians of endpoint distances over dyadic
  // arcs starting at holder_min_cells boundary cells, both directions from
  // each root (medians, because pinch points give individual pairs an
  // unbounded downward spread; zero distances are excluded)
  std::size_t holder_sources = 16;
  std::size_t holder_scales = 3;
  double holder_min_cells = 8.0;  // smallest arc, in boundary cells
  double holder_arc_cap = 0.25;   // largest arc, as perimeter fraction
  std::size_t holder_min_samples = 8;
  double holder_slope_lo = 0.4;
  double holder_slope_hi = 0.6;
  // arc neighborhoods
  double arc_fraction = 0.125;
  std::size_t arc_delta_points = 6;
  double arc_mass_lo = 0.05;
  double arc_mass_hi = 0.40;
  double arc_delta_slope_lo = 1.6;
  double arc_delta_slope_hi = 2.4;
  std::size_t arc_nu_points = 3;  // arcs l/4, l/8, l/16
  double arc_nu_mass = 0.008;     // neighborhood mass of the smallest arc
  double arc_nu_slope_lo = 0.8;
  double arc_nu_slope_hi = 1.2;
};
struct DiskGeometryReports {
  Report ball_volume;
  Report boundary_modulus;
  Report arc_neighborhood;
};
DiskGeometryReports disk_geometry_reports(const DiskGeometryParams& p = {});

// Glued pairs: near-seam and control ball volumes, geodesic seam-crossing
// scaling, and the seam-segment count percentile bound.
struct GluedParams {
  std::uint64_t seed = 20260814;
  std::size_t replicas = 10;  // glued pairs
  std::size_t n = std::size_t{1} << 13;
  double perimeter = 1.0;
  double area = 1.0;
  std::size_t workers = 1;
  std::size_t geodesic_pairs = 8;
  std::size_t seam_centers = 4;
  std::size_t ball_points = 6;
  double ball_min_cells = 16.0;
  double ball_mass_lo = 0.01;
  double ball_mass_hi = 0.15;
  double ball_slope_lo = 3.3;
  double ball_slope_hi = 4.7;
  std::size_t delta_points = 5;
  double delta_max = 0.5;
  double crossing_exponent_cap = 1.0;
  double segment_v = 0.3;
  double segment_slack = 0.5;
};
struct GluedReports {
  Report locality;
  Report crossings;
};
GluedReports glued_reports(const GluedParams& p = {});

// Self-gluing: the two boundary halves identified; diameter of seam
// subarcs against their boundary length.
struct SelfGlueParams {
  std::uint64_t seed = 20260814;
  std::size_t replicas = 8;
  std::size_t n = std::size_t{1} << 12;
  std::size_t scales = 4;
  double slope_lo = 0.25;
  double slope_hi = 0.75;
};
Report self_glue_report(const SelfGlueParams& p = {});

// Exact flat-square check: gluing a half-length segment onto the seam
// halves interface distances while leaving the halves' internal metrics
// untouched.
struct FlatParams {
  std::size_t m = 256;
  double min_separation = 0.25;
  double ratio_lo = 0.45;
  double ratio_hi = 0.55;
};
Report flat_ratio_report(const FlatParams& p = {});

// Distribution of the distance between two fixed boundary coordinates under
// grid refinement.
struct GridConsistencyParams {
  std::uint64_t seed = 20260814;
  std::size_t replicas = 200;
  std::size_t n_coarse = std::size_t{1} << 12;
  std::size_t n_fine = std::size_t{1} << 14;
  double r1 = 0.25;
  double r2 = 0.75;
  std::size_t workers = 1;
  double ks_p_min = 0.01;
};
Report grid_consistency_report(const GridConsistencyParams& p = {});

// Fraction of geodesics between uniform interior points that touch the
// boundary, across grid sizes; expected to shrink as the grid refines.
struct BoundaryAvoidanceParams {
  std::uint64_t seed = 20260814;
  std::size_t replicas = 40;
  std::vector<std::size_t> sizes = {std::size_t{1} << 10, std::size_t{1} << 12,
                                    std::size_t{1} << 14};
  std::size_t workers = 1;
};
Report boundary_avoidance_report(const BoundaryAvoidanceParams& p = {});

}  // namespace bdisk
