#include "bdisk/acceptance.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "bdisk/disk.hpp"
#include "bdisk/labels.hpp"
#include "bdisk/metric.hpp"
#include "bdisk/reports.hpp"
#include "bdisk/rng.hpp"
#include "bdisk/sampler.hpp"

namespace bdisk {

namespace {

// acceptance-only stream tags (reports use 100..179, disks 1..3)
constexpr std::uint32_t kTagOracleContour = 200;
constexpr std::uint32_t kTagOracleLabels = 201;
constexpr std::uint32_t kTagOracleBridge = 202;
constexpr std::uint32_t kTagCovContour = 210;
constexpr std::uint32_t kTagCovSnake = 211;
constexpr std::uint32_t kTagCovCholesky = 212;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Labels rounded to the 2^-20 lattice. Contour values in walk mode are
// dyadic as well, so every chain sum fits a double exactly and shortest
// path algorithms agree bitwise no matter how they associate additions.
double quantize(double v) { return std::ldexp(std::round(std::ldexp(v, 20)), -20); }

std::shared_ptr<const DiskInstance> quantized_instance(std::uint64_t seed,
                                                       std::uint32_t replica) {
  DiskSpec spec;
  spec.perimeter = 1.0;
  spec.area = 60.0 / 64.0;  // dt = 1/64, sqrt(dt) = 1/8, 8 boundary cells
  spec.n = 61;
  spec.mode = StepMode::walk;
  spec.seed = seed;
  spec.replica = replica;
  PathSample contour = sample_first_passage_bridge(
      spec.perimeter, spec.area, spec.n,
      {seed, stream_id(kTagOracleContour, replica), StepMode::walk});
  ForestCode code(std::move(contour));
  std::vector<double> z0 =
      sample_labels_snake(code, {seed, stream_id(kTagOracleLabels, replica), StepMode::walk});
  for (double& v : z0) v = quantize(v);
  const std::size_t points = code.boundary_points();
  PathSample bridge = sample_bridge(
      points, code.perimeter() / static_cast<double>(points - 1), std::sqrt(3.0),
      {seed, stream_id(kTagOracleBridge, replica), StepMode::gaussian});
  for (double& v : bridge.values) v = quantize(v);
  LabelField labels = assemble_labels(code, std::move(z0), bridge);
  return std::make_shared<DiskInstance>(std::move(code), std::move(labels), spec);
}

// All-pairs shortest paths on the complete grid-index graph with label
// distances as weights and free moves inside zero-distance classes.
std::vector<double> floyd_warshall(const DiskInstance& disk) {
  const std::size_t n = disk.grid_size();
  std::vector<double> d(n * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      d[i * n + j] =
          disk.vertex_of(i) == disk.vertex_of(j) ? 0.0 : disk.d_z(i, j);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      for (std::size_t j = 0; j < n; ++j)
        if (dik + d[k * n + j] < d[i * n + j]) d[i * n + j] = dik + d[k * n + j];
    }
  return d;
}

const ReportItem* find_item(const Report& rep, const std::string& name) {
  for (const auto& it : rep.items)
    if (it.name == name) return &it;
  return nullptr;
}

// Pass iff every named item exists and passes; appends name=value pairs.
bool items_pass(const Report& rep, std::initializer_list<const char*> names,
                std::string& detail) {
  bool ok = true;
  for (const char* name : names) {
    const ReportItem* it = find_item(rep, name);
    if (!it) {
      detail += std::string(" ") + name + "=missing";
      ok = false;
      continue;
    }
    detail += std::string(" ") + name + "=" + num(it->value);
    if (!it->pass) ok = false;
  }
  return ok;
}

}  // namespace

std::string format_criterion(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof(head), "criterion %02d  %-28s  %s ", r.index, r.name.c_str(),
                r.pass ? "pass" : "FAIL");
  return head + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
  std::vector<CriterionResult> out;
  auto clock = [] { return std::chrono::steady_clock::now(); };
  auto start = clock();
  auto emit = [&](int idx, const char* name, bool pass, std::string detail) {
    const double secs = std::chrono::duration<double>(clock() - start).count();
    detail += " (" + num(secs) + "s)";
    out.push_back({idx, name, pass, std::move(detail)});
    if (o.log) *o.log << format_criterion(out.back()) << std::endl;
    start = clock();
  };

  // 1 + 2: exact shortest-path oracle and metric axioms on one ensemble
  {
    constexpr std::size_t kInstances = 50;
    std::size_t exact = 0;
    bool dx_ok = true, d0_ok = true;
    double worst_violation = 0.0;  // of the d_z triangle, expected positive
    for (std::uint32_t r = 0; r < kInstances; ++r) {
      auto disk = quantized_instance(o.seed, r);
      const std::size_t n = disk->grid_size();
      const std::vector<double> fw = floyd_warshall(*disk);

      const std::uint32_t classes = disk->vertex_count();
      std::vector<double> d0(static_cast<std::size_t>(classes) * classes);
      bool instance_exact = true;
      for (std::uint32_t c = 0; c < classes; ++c) {
        const DistanceField field = quotient_distances(disk, c);
        for (std::uint32_t e = 0; e < classes; ++e) d0[c * classes + e] = field.dist[e];
      }
      for (std::uint32_t i = 0; i < n && instance_exact; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
          if (fw[i * n + j] != d0[disk->vertex_of(i) * classes + disk->vertex_of(j)]) {
            instance_exact = false;
            break;
          }
      if (instance_exact) ++exact;

      // contour distance axioms, exhaustive (walk values are exact dyadics)
      const ForestCode& code = disk->code();
      for (std::uint32_t s = 0; s < n && dx_ok; ++s) {
        if (code.d_x(s, s) != 0.0) dx_ok = false;
        for (std::uint32_t t = s; t < n && dx_ok; ++t) {
          if (code.d_x(s, t) != code.d_x(t, s)) dx_ok = false;
          for (std::uint32_t u = 0; u < n; ++u)
            if (code.d_x(s, u) > code.d_x(s, t) + code.d_x(t, u)) {
              dx_ok = false;
              break;
            }
        }
      }
      // quotient distance axioms on the class matrix
      for (std::uint32_t a = 0; a < classes && d0_ok; ++a) {
        if (d0[a * classes + a] != 0.0) d0_ok = false;
        for (std::uint32_t b = 0; b < classes && d0_ok; ++b) {
          if (d0[a * classes + b] != d0[b * classes + a]) d0_ok = false;
          for (std::uint32_t c = 0; c < classes; ++c)
            if (d0[a * classes + b] > d0[a * classes + c] + d0[c * classes + b]) {
              d0_ok = false;
              break;
            }
        }
      }
      // the raw label distance must fail the triangle inequality somewhere
      for (std::uint32_t s = 0; s < n; ++s)
        for (std::uint32_t t = 0; t < n; ++t)
          for (std::uint32_t u = 0; u < n; ++u) {
            const double excess = disk->d_z(s, u) - disk->d_z(s, t) - disk->d_z(t, u);
            if (excess > worst_violation) worst_violation = excess;
          }
    }
    emit(1, "quotient-oracle-equality", exact == kInstances,
         std::to_string(exact) + "/" + std::to_string(kInstances) + " instances bitwise equal");
    emit(2, "pseudometric-properties", dx_ok && d0_ok && worst_violation > 0.0,
         std::string("contour/quotient axioms ") + (dx_ok && d0_ok ? "hold" : "VIOLATED") +
             ", label-distance triangle excess " + num(worst_violation));
  }

  // 3 + 4: one excursion report feeds both
  {
    ExcursionCountParams p;
    p.seed = o.seed;
    const Report rep = excursion_count_report(p);
    std::string d3, d4;
    const bool ok3 = items_pass(rep, {"mean_rho0.25", "mean_rho1"}, d3);
    emit(3, "infimum-drop-mean", ok3, d3);
    const bool ok4 = items_pass(rep, {"count_slope"}, d4);
    emit(4, "excursion-count-scaling", ok4, d4);
  }

  {
    ExcursionPoissonParams p;
    p.seed = o.seed;
    const Report rep = excursion_poisson_report(p);
    std::string d;
    const bool ok = items_pass(
        rep, {"mean_long_excursions", "var_long_excursions", "dispersion_index"}, d);
    emit(5, "long-excursion-poisson", ok, d);
  }

  // 6: the two label samplers agree on the conditional covariance
  {
    constexpr std::size_t kReplicas = 10000;
    PathSample contour = sample_first_passage_bridge(
        1.0, 1.0, 512, {o.seed, stream_id(kTagCovContour, 0), StepMode::walk});
    ForestCode code(std::move(contour));
    const auto n = static_cast<Eigen::Index>(code.size());
    Eigen::MatrixXd cov_snake = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd cov_chol = Eigen::MatrixXd::Zero(n, n);
    for (std::uint32_t r = 0; r < kReplicas; ++r) {
      const std::vector<double> zs =
          sample_labels_snake(code, {o.seed, stream_id(kTagCovSnake, r), StepMode::walk});
      const std::vector<double> zc = sample_labels_cholesky(
          code, {o.seed, stream_id(kTagCovCholesky, r), StepMode::gaussian});
      cov_snake.selfadjointView<Eigen::Lower>().rankUpdate(
          Eigen::Map<const Eigen::VectorXd>(zs.data(), n), 1.0);
      cov_chol.selfadjointView<Eigen::Lower>().rankUpdate(
          Eigen::Map<const Eigen::VectorXd>(zc.data(), n), 1.0);
    }
    double max_entry = 0.0, max_diff = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double a = cov_snake(i, j) / kReplicas;
        const double b = cov_chol(i, j) / kReplicas;
        max_entry = std::max(max_entry, std::fabs(b));
        max_diff = std::max(max_diff, std::fabs(a - b));
      }
    const bool ok = max_diff <= 0.05 * max_entry;
    emit(6, "label-covariance-agreement", ok,
         "max |diff| " + num(max_diff) + " vs 5% of max entry " + num(max_entry));
  }

  {
    SnakeTailParams p;
    p.seed = o.seed;
    const Report rep = snake_tail_report(p);
    std::string d;
    const bool ok = items_pass(rep, {"tail_slope"}, d);
    emit(7, "label-sup-tail", ok, d);
  }

  // 8 + 9 + 10: one disk ensemble feeds three exponent fits
  {
    DiskGeometryParams p;
    p.seed = o.seed;
    p.workers = o.workers;
    const DiskGeometryReports reps = disk_geometry_reports(p);
    std::string d8, d9, d10;
    const bool ok8 =
        items_pass(reps.ball_volume, {"root_collapse_err", "ball_groups", "ball_slope"}, d8);
    emit(8, "ball-volume-exponent", ok8, d8);
    const bool ok9 =
        items_pass(reps.boundary_modulus, {"modulus_scales", "modulus_slope"}, d9);
    emit(9, "boundary-distance-modulus", ok9, d9);
    const bool ok10 = items_pass(
        reps.arc_neighborhood,
        {"arc_delta_groups", "arc_delta_slope", "arc_length_groups", "arc_length_slope"}, d10);
    emit(10, "arc-neighborhood-exponents", ok10, d10);
  }

  {
    FlatParams p;
    const Report rep = flat_ratio_report(p);
    std::string d;
    const bool ok = items_pass(rep,
                               {"interface_ratio_min", "interface_ratio_max",
                                "internal_metric_diff"},
                               d);
    emit(11, "flat-interface-ratio", ok, d);
  }

  // 12 + 13: one glued ensemble
  {
    GluedParams p;
    p.seed = o.seed;
    p.workers = o.workers;
    const GluedReports reps = glued_reports(p);
    std::string d12, d13;
    const bool ok12 =
        items_pass(reps.locality, {"near_seam_ball_groups", "near_seam_ball_slope"}, d12);
    emit(12, "glued-near-seam-volume", ok12, d12);
    const bool ok13 = items_pass(reps.crossings, {"crossing_exponent_plus_se"}, d13);
    emit(13, "seam-crossing-scaling", ok13, d13);
  }

  {
    GridConsistencyParams p;
    p.seed = o.seed;
    p.workers = o.workers;
    const Report rep = grid_consistency_report(p);
    std::string d;
    const bool ok = items_pass(rep, {"ks_p_value", "median_rel_shift"}, d);
    emit(14, "grid-self-consistency", ok, d);  // median_rel_shift is informational
  }

  return out;
}

}  // namespace bdisk
