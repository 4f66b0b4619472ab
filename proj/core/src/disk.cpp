#include "bdisk/disk.hpp"

#include <algorithm>
#include <cmath>

#include "bdisk/errors.hpp"
#include "bdisk/rng.hpp"

namespace bdisk {
namespace {

std::vector<double> doubled(const std::vector<double>& z) {
  std::vector<double> out;
  out.reserve(z.size() * 2);
  out.insert(out.end(), z.begin(), z.end());
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

}  // namespace

DiskInstance::DiskInstance(ForestCode code, LabelField labels, DiskSpec spec)
    : code_(std::move(code)),
      labels_(std::move(labels)),
      spec_(spec),
      z_circle_(doubled(labels_.z)) {
  if (labels_.z.size() != code_.size())
    throw InvalidStructure("label field does not match the contour grid");
  code_.perimeter();  // demands first-passage shape
  area_weight_.assign(code_.class_count(), 0.0);
  const double dt = code_.contour().dt;
  for (std::uint32_t i = 1; i < code_.size(); ++i) area_weight_[code_.class_of(i)] += dt;
}

std::uint32_t DiskInstance::boundary_point_at(double r) const {
  const double ell = perimeter();
  if (r < 0.0 || r > ell * (1.0 + 1e-9))
    throw InvalidParameter("arc coordinate outside [0, perimeter]");
  const auto cells = static_cast<double>(boundary_points() - 1);
  const auto k = static_cast<std::uint32_t>(std::llround(std::clamp(r / ell, 0.0, 1.0) * cells));
  return k;
}

double DiskInstance::arc_min(std::uint32_t s, std::uint32_t t) const {
  const auto n = static_cast<std::uint32_t>(code_.size());
  if (s >= n || t >= n) throw InvalidParameter("grid index out of range");
  return t >= s ? z_circle_.min_value(s, t) : z_circle_.min_value(s, t + n);
}

double DiskInstance::d_z(std::uint32_t s, std::uint32_t t) const {
  const double m = std::max(arc_min(s, t), arc_min(t, s));
  return labels_.z[s] + labels_.z[t] - 2.0 * m;
}

std::uint32_t DiskInstance::uniform_grid_index(Rng& rng) const {
  // Indices 1..n-1 carry equal mass dt.
  return 1 + static_cast<std::uint32_t>(rng.uniform_below(code_.size() - 1));
}

DiskInstance build_disk(const DiskSpec& spec) {
  if (!(spec.perimeter > 0.0)) throw InvalidParameter("perimeter must be positive");
  if (!spec.random_area && !(spec.area > 0.0)) throw InvalidParameter("area must be positive");
  if (spec.n < 2) throw InvalidParameter("need at least two grid values");

  PathSample contour;
  if (spec.random_area) {
    // n sets the resolution: one boundary cell per walk level, with about
    // n grid values when the duration comes out near perimeter^2.
    double dt;
    if (spec.mode == StepMode::walk) {
      const auto levels = std::max<std::int64_t>(
          1, std::llround(std::sqrt(static_cast<double>(spec.n - 1))));
      const double step = spec.perimeter / static_cast<double>(levels);
      dt = step * step;
    } else {
      dt = spec.perimeter * spec.perimeter / static_cast<double>(spec.n - 1);
    }
    contour = sample_stopped_bm(spec.perimeter, dt,
                                {spec.seed, stream_id(kStreamContour, spec.replica), spec.mode},
                                spec.max_steps);
  } else {
    contour = sample_first_passage_bridge(
        spec.perimeter, spec.area, spec.n,
        {spec.seed, stream_id(kStreamContour, spec.replica), spec.mode});
  }

  ForestCode code(std::move(contour), spec.boundary_cells);

  std::vector<double> z0;
  const SeedRecord label_seed{spec.seed, stream_id(kStreamLabels, spec.replica), spec.mode};
  if (spec.mode == StepMode::walk) {
    z0 = sample_labels_snake(code, label_seed);
  } else {
    if (code.size() > kCholeskyMaxN)
      throw InvalidParameter("gaussian pipeline is capped by the dense label sampler");
    z0 = sample_labels_cholesky(code, label_seed);
  }

  const std::size_t m = code.boundary_points();
  const double ell = code.perimeter();
  PathSample bridge = sample_bridge(
      m, ell / static_cast<double>(m - 1), std::sqrt(3.0),
      {spec.seed, stream_id(kStreamBridge, spec.replica), StepMode::gaussian});

  LabelField labels = assemble_labels(code, std::move(z0), bridge);
  return DiskInstance(std::move(code), std::move(labels), spec);
}

}  // namespace bdisk
