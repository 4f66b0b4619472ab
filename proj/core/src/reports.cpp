#include "bdisk/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "bdisk/disk.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/gluing.hpp"
#include "bdisk/metric.hpp"
#include "bdisk/parallel.hpp"
#include "bdisk/rng.hpp"
#include "bdisk/stats.hpp"

namespace bdisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// report-level stream tags; disk construction owns tags 1..3
constexpr std::uint32_t kTagInfMean = 110;  // +delta index
constexpr std::uint32_t kTagInfCount = 120;
constexpr std::uint32_t kTagPoisson = 130;
constexpr std::uint32_t kTagSnake = 140;
constexpr std::uint32_t kTagGlueControl = 150;
constexpr std::uint32_t kTagGlueSource = 151;
constexpr std::uint32_t kTagGlueTarget = 152;
constexpr std::uint32_t kTagAvoidance = 170;  // +size index

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void Report::param(const std::string& key, const std::string& value) {
  parameters.emplace_back(key, value);
}
void Report::param(const std::string& key, double value) { parameters.emplace_back(key, fmt(value)); }
void Report::param(const std::string& key, std::uint64_t value) {
  parameters.emplace_back(key, std::to_string(value));
}

ReportItem& Report::add(const std::string& item, double value) {
  items.push_back({item, value, 0.0, 0.0, false, true});
  return items.back();
}

ReportItem& Report::add_band(const std::string& item, double value, double lo, double hi) {
  const bool ok = std::isfinite(value) && value >= lo && value <= hi;
  items.push_back({item, value, lo, hi, true, ok});
  return items.back();
}

bool Report::pass() const {
  bool any = false;
  for (const auto& it : items)
    if (it.checked) {
      any = true;
      if (!it.pass) return false;
    }
  return any;  // a report with no checked items never passes silently
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["pass"] = pass();
  j["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : parameters) j["parameters"][k] = v;
  j["items"] = nlohmann::json::array();
  j["values"] = nlohmann::json::object();  // flat name -> value view
  for (const auto& it : items) {
    nlohmann::json ji;
    ji["name"] = it.name;
    ji["value"] = std::isfinite(it.value) ? nlohmann::json(it.value) : nlohmann::json(nullptr);
    if (it.checked) {
      ji["lo"] = it.lo;
      ji["hi"] = it.hi;
      ji["pass"] = it.pass;
    }
    j["items"].push_back(ji);
    j["values"][it.name] = ji["value"];
  }
  if (!raw.empty()) {
    j["raw"] = nlohmann::json::array();
    for (const auto& pr : raw) j["raw"].push_back({pr[0], pr[1]});
  }
  return j.dump(2);
}

std::string Report::to_text() const {
  std::size_t w = 4;
  for (const auto& it : items) w = std::max(w, it.name.size());
  std::ostringstream out;
  out << "report " << name << (pass() ? "  [pass]" : "  [FAIL]") << '\n';
  for (const auto& [k, v] : parameters) out << "  # " << k << " = " << v << '\n';
  for (const auto& it : items) {
    out << "  " << it.name << std::string(w - it.name.size() + 2, ' ') << fmt(it.value);
    if (it.checked)
      out << "  in [" << fmt(it.lo) << ", " << fmt(it.hi) << "]  "
          << (it.pass ? "pass" : "FAIL");
    out << '\n';
  }
  return out.str();
}

std::string Report::raw_csv() const {
  std::ostringstream out;
  out << "scale,value\n";
  out.precision(17);
  for (const auto& pr : raw) out << pr[0] << ',' << pr[1] << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

Report excursion_count_report(const ExcursionCountParams& p) {
  Report rep;
  rep.name = "excursion-count";
  rep.param("seed", std::uint64_t{p.seed});
  rep.param("mean_replicas", std::uint64_t{p.mean_replicas});
  rep.param("mean_dt", p.mean_dt);
  rep.param("count_replicas", std::uint64_t{p.count_replicas});
  rep.param("count_grid", std::uint64_t{p.count_grid});

  // mean of the infimum drop over [0, delta]
  const double deltas_mean[2] = {0.25, 1.0};
  const double sqrt_dt = std::sqrt(p.mean_dt);
  for (int di = 0; di < 2; ++di) {
    const double delta = deltas_mean[di];
    const auto steps = static_cast<std::uint64_t>(std::llround(delta / p.mean_dt));
    double total = 0.0;
    for (std::size_t r = 0; r < p.mean_replicas; ++r) {
      Rng rng(p.seed, stream_id(kTagInfMean + static_cast<std::uint32_t>(di),
                                static_cast<std::uint32_t>(r)));
      std::int64_t cur = 0, mn = 0;
      for (std::uint64_t s = 0; s < steps; ++s) {
        cur += rng.bit() ? 1 : -1;
        mn = std::min(mn, cur);
      }
      total += static_cast<double>(-mn);
    }
    const double mean_drop = sqrt_dt * total / static_cast<double>(p.mean_replicas);
    const double target = std::sqrt(2.0 / M_PI) * std::sqrt(delta);
    rep.add_band("mean_rho" + fmt(delta), mean_drop, target * (1.0 - p.mean_rel_tol),
                 target * (1.0 + p.mean_rel_tol));
  }

  // count of excursions of duration >= delta in a unit window
  constexpr std::size_t kCountScales = 5;
  std::uint64_t thresholds[kCountScales];
  double deltas[kCountScales];
  for (std::size_t j = 0; j < kCountScales; ++j) {
    deltas[j] = std::ldexp(1.0, -static_cast<int>(3 + j));  // 1/8 .. 1/128
    thresholds[j] = p.count_grid >> (3 + j);
  }
  std::vector<double> sums(kCountScales, 0.0);
  for (std::size_t r = 0; r < p.count_replicas; ++r) {
    Rng rng(p.seed, stream_id(kTagInfCount, static_cast<std::uint32_t>(r)));
    std::int64_t cur = 0, mn = 0;
    std::uint64_t last_fp = 0;
    std::uint64_t counts[kCountScales] = {0, 0, 0, 0, 0};
    for (std::uint64_t i = 1; i <= p.count_grid; ++i) {
      cur += rng.bit() ? 1 : -1;
      if (cur < mn) {
        mn = cur;
        const std::uint64_t gap = i - last_fp;
        for (std::size_t j = 0; j < kCountScales; ++j)
          if (gap >= thresholds[j]) ++counts[j];
        last_fp = i;
      }
    }
    const std::uint64_t tail = p.count_grid - last_fp;  // censored final excursion
    for (std::size_t j = 0; j < kCountScales; ++j) {
      if (tail >= thresholds[j]) ++counts[j];
      sums[j] += static_cast<double>(counts[j]);
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < kCountScales; ++j) {
    const double m = sums[j] / static_cast<double>(p.count_replicas);
    xs.push_back(deltas[j]);
    ys.push_back(m);
    rep.raw.push_back({deltas[j], m});
  }
  const ExponentFit fit = fit_exponent(xs, ys);
  rep.add_band("count_slope", fit.slope, p.slope_lo, p.slope_hi);
  rep.add("count_slope_se", fit.slope_se);
  rep.add("count_r_squared", fit.r_squared);
  return rep;
}

Report excursion_poisson_report(const ExcursionPoissonParams& p) {
  Report rep;
  rep.name = "excursion-poisson";
  rep.param("seed", std::uint64_t{p.seed});
  rep.param("replicas", std::uint64_t{p.replicas});
  rep.param("window", p.window);
  rep.param("duration_floor", p.duration_floor);
  rep.param("dt", p.dt);

  const double sqrt_dt = std::sqrt(p.dt);
  const auto levels = static_cast<std::int64_t>(std::llround(p.window / sqrt_dt));
  const auto threshold = static_cast<std::uint64_t>(std::llround(p.duration_floor / p.dt));

  std::vector<double> counts(p.replicas);
  for (std::size_t r = 0; r < p.replicas; ++r) {
    Rng rng(p.seed, stream_id(kTagPoisson, static_cast<std::uint32_t>(r)));
    std::int64_t cur = 0, mn = 0;
    std::uint64_t t = 0, floor_time = 0;
    std::uint32_t count = 0;
    while (mn > -levels) {
      ++t;
      cur += rng.bit() ? 1 : -1;
      if (cur <= mn) {
        mn = std::min(mn, cur);
        floor_time = t;
      } else if (t - floor_time >= threshold) {
        // the excursion already exceeds the duration floor: count it and
        // restart from the running infimum (what remains of the excursion
        // cannot change the infimum process)
        ++count;
        cur = mn;
        floor_time = t;
      }
    }
    counts[r] = count;
  }

  const double target = 2.0 / std::sqrt(M_PI) * p.window / std::sqrt(p.duration_floor);
  const double m = mean(counts);
  const double v = sample_variance(counts);
  rep.add_band("mean_long_excursions", m, target * (1.0 - p.rel_tol),
               target * (1.0 + p.rel_tol));
  rep.add_band("var_long_excursions", v, target * (1.0 - p.rel_tol),
               target * (1.0 + p.rel_tol));
  rep.add_band("dispersion_index", v / m, p.dispersion_lo, p.dispersion_hi);
  rep.add("target_mean", target);
  // prediction under the standard two-sided Ito normalization for a
  // variance-dt walk; kept for comparison against the configured target
  rep.add("mean_standard_ito",
          std::sqrt(2.0 / M_PI) * p.window / std::sqrt(p.duration_floor));
  return rep;
}

Report snake_tail_report(const SnakeTailParams& p) {
  Report rep;
  rep.name = "snake-tail";
  rep.param("seed", std::uint64_t{p.seed});
  rep.param("excursions", std::uint64_t{p.excursions});
  rep.param("grid", std::uint64_t{p.grid});
  if (p.grid % 2 != 0 || p.grid < 4) throw InvalidParameter("grid must be even and >= 4");

  std::vector<double> thresholds(p.a_points);
  for (std::size_t i = 0; i < p.a_points; ++i)
    thresholds[i] =
        p.a_lo + (p.a_hi - p.a_lo) * static_cast<double>(i) / static_cast<double>(p.a_points - 1);

  const std::size_t n = p.grid;
  const double dt = 1.0 / static_cast<double>(n);
  const double inc_sd = std::pow(dt, 0.25);

  std::vector<std::uint64_t> hits(p.a_points, 0);
  std::vector<std::int8_t> steps(n);
  std::vector<double> label(n / 2 + 1);
  for (std::size_t r = 0; r < p.excursions; ++r) {
    Rng rng(p.seed, stream_id(kTagSnake, static_cast<std::uint32_t>(r)));
    // +-1 bridge, then the rotation at the leftmost minimum makes it an
    // excursion (nonnegative, zero at both ends)
    for (std::size_t i = 0; i < n / 2; ++i) steps[i] = 1;
    for (std::size_t i = n / 2; i < n; ++i) steps[i] = -1;
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(steps[i], steps[rng.uniform_below(i + 1)]);
    std::int64_t sum = 0, mn = 0;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += steps[i];
      if (sum < mn) {
        mn = sum;
        argmin = i + 1;  // rotate to start right after the minimum
      }
    }
    // snake over the rotated path: a rise draws a fresh branch increment,
    // a fall discards one; the label at height 0 is pinned to 0
    double sup_abs = 0.0;
    std::size_t h = 0;
    label[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (steps[(argmin + i) % n] > 0) {
        ++h;
        label[h] = label[h - 1] + inc_sd * rng.normal();
        sup_abs = std::max(sup_abs, std::fabs(label[h]));
      } else {
        --h;
      }
    }
    for (std::size_t i = 0; i < p.a_points; ++i)
      if (sup_abs > thresholds[i]) ++hits[i];
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < p.a_points; ++i) {
    const double prob = static_cast<double>(hits[i]) / static_cast<double>(p.excursions);
    rep.raw.push_back({thresholds[i], prob});
    if (prob <= 0.0 || prob >= 1.0) continue;
    xs.push_back(thresholds[i]);
    ys.push_back(-std::log(prob));
    rep.add("neglogp_over_a43_at_" + fmt(thresholds[i]),
            -std::log(prob) / std::pow(thresholds[i], 4.0 / 3.0));
  }
  if (xs.size() < 3) {
    rep.add_band("tail_points", static_cast<double>(xs.size()), 3.0, 1e18);
    return rep;
  }
  // prefactor estimate at the deepest threshold; converges to the true
  // constant only far into the tail, hence the wide band
  rep.add_band("prefactor_estimate", ys.back() / std::pow(xs.back(), 4.0 / 3.0), p.ratio_lo,
               p.ratio_hi);
  const ExponentFit fit = fit_exponent(xs, ys);
  rep.add_band("tail_slope", fit.slope, p.slope_lo, p.slope_hi);
  rep.add("tail_slope_se", fit.slope_se);
  rep.add("tail_r_squared", fit.r_squared);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

using Pairs = std::vector<std::array<double, 2>>;

std::shared_ptr<const DiskInstance> make_disk(const DiskGeometryParams& p, std::uint32_t replica) {
  DiskSpec spec;
  spec.perimeter = p.perimeter;
  spec.area = p.area;
  spec.n = p.n;
  spec.mode = StepMode::walk;
  spec.seed = p.seed;
  spec.replica = replica;
  return std::make_shared<DiskInstance>(build_disk(spec));
}

std::vector<std::uint32_t> arc_sources(const DiskInstance& disk, double start, double arc_len) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t k = 0; k < disk.boundary_points(); ++k) {
    const double c = disk.boundary_coordinate(k);
    if (c >= start - 1e-12 && c <= start + arc_len + 1e-12) out.push_back(disk.boundary_vertex(k));
  }
  return out;
}

// area mass of open balls around a field's sources, as a step function of
// the radius: dist sorted ascending, mass[i] = weight of {d <= dist[i]}
struct MassCurve {
  std::vector<double> dist;
  std::vector<double> mass;
  double total = 0.0;

  double mass_below(double delta) const {
    const auto it = std::lower_bound(dist.begin(), dist.end(), delta);
    const auto i = static_cast<std::size_t>(it - dist.begin());
    return i == 0 ? 0.0 : mass[i - 1];
  }
  double radius_at_mass(double m) const {
    const auto it = std::lower_bound(mass.begin(), mass.end(), m);
    return it == mass.end() ? dist.back() : dist[static_cast<std::size_t>(it - mass.begin())];
  }
};

MassCurve mass_curve(const FiniteGeodesicSpace& space, const DistanceField& field) {
  std::vector<std::pair<double, double>> dw;
  for (std::size_t v = 0; v < field.dist.size(); ++v) {
    if (!std::isfinite(field.dist[v])) continue;
    dw.emplace_back(field.dist[v], space.area_weight(static_cast<std::uint32_t>(v)));
  }
  std::sort(dw.begin(), dw.end());
  MassCurve out;
  out.dist.reserve(dw.size());
  out.mass.reserve(dw.size());
  double acc = 0.0;
  for (const auto& [d, w] : dw) {
    acc += w;
    if (!out.dist.empty() && out.dist.back() == d)
      out.mass.back() = acc;
    else {
      out.dist.push_back(d);
      out.mass.push_back(acc);
    }
  }
  out.total = acc;
  return out;
}

// geometric radius grid between the two mass quantiles, trimmed to the
// resolvable midrange; empty when the window degenerates
Pairs quantile_sweep(const MassCurve& curve, double mass_lo, double mass_hi, double floor_mass,
                     double delta_cap, std::size_t points) {
  if (curve.dist.empty() || points < 2) return {};
  const double lo_target = std::max(mass_lo * curve.total, floor_mass);
  const double d_lo = curve.radius_at_mass(lo_target);
  const double d_hi = std::min(curve.radius_at_mass(mass_hi * curve.total), delta_cap);
  if (!(d_lo > 0.0) || !(d_hi > d_lo * 1.25)) return {};
  Pairs out;
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    const double delta = d_hi * std::pow(d_lo / d_hi, f);
    const double m = curve.mass_below(std::nextafter(delta, delta + 1.0));
    if (m <= 0.0) continue;
    if (!out.empty() && out.back()[0] == delta) continue;
    out.push_back({delta, m});
  }
  return out.size() >= 2 ? out : Pairs{};
}

void append_raw(Report& rep, const std::vector<Pairs>& groups) {
  for (const auto& g : groups)
    for (const auto& pr : g) rep.raw.push_back(pr);
}

void add_pooled_fit(Report& rep, const std::string& prefix, const std::vector<Pairs>& groups,
                    double lo, double hi, std::size_t min_groups) {
  std::size_t usable = 0;
  for (const auto& g : groups)
    if (g.size() >= 2) ++usable;
  rep.add_band(prefix + "_groups", static_cast<double>(usable),
               static_cast<double>(min_groups), 1e18);
  if (usable < min_groups) return;
  const ExponentFit fit = pooled_exponent_fit(groups);
  rep.add_band(prefix + "_slope", fit.slope, lo, hi);
  rep.add(prefix + "_slope_se", fit.slope_se);
  rep.add(prefix + "_points", static_cast<double>(fit.points));
}

}  // namespace

DiskGeometryReports disk_geometry_reports(const DiskGeometryParams& p) {
  struct Slot {
    std::vector<Pairs> balls;
    double collapse_err = 0.0;
    double root_depth = 0.0;
    std::vector<Pairs> modulus;  // one (arc, d) list per root
    std::vector<Pairs> arc_delta;
    Pairs arc_nu;
  };
  std::vector<Slot> slots(p.replicas);

  parallel_for(p.replicas, static_cast<unsigned>(p.workers), [&](std::size_t r) {
    auto disk = make_disk(p, static_cast<std::uint32_t>(r));
    auto space = FiniteGeodesicSpace::from_disk(disk);
    const double cell = disk->dt();
    const double ell = disk->perimeter();
    const double floor_mass = p.ball_min_cells * cell;
    Slot& slot = slots[r];

    // distance to the whole boundary, for interior-center selection
    std::vector<std::uint32_t> all_marks;
    for (std::uint32_t k = 0; k < disk->boundary_points(); ++k)
      all_marks.push_back(disk->boundary_vertex(k));
    const DistanceField from_boundary = space.distances(all_marks);
    double inradius = 0.0;
    for (double d : from_boundary.dist)
      if (std::isfinite(d)) inradius = std::max(inradius, d);

    // ball around the minimal-label vertex; chains collapse onto label
    // differences exactly there, so the growth curve carries no
    // shortest-path truncation error (the collapse is asserted below)
    std::uint32_t root = 0;
    double z_root = kInf;
    for (std::uint32_t v = 0; v < space.vertex_count(); ++v) {
      const double z = disk->z()[disk->vertex_members(v).front()];
      if (z < z_root) {
        z_root = z;
        root = v;
      }
    }
    const DistanceField from_root = space.distances(root);
    double collapse = 0.0;
    for (std::uint32_t v = 0; v < space.vertex_count(); ++v)
      collapse = std::max(
          collapse, std::fabs(from_root.dist[v] -
                              (disk->z()[disk->vertex_members(v).front()] - z_root)));
    slot.collapse_err = collapse;
    slot.root_depth = from_boundary.dist[root];
    {
      const MassCurve curve = mass_curve(space, from_root);
      const double cap = p.ball_boundary_frac * slot.root_depth;
      Pairs g;
      for (std::size_t i = 0; i < p.ball_points; ++i) {
        const double f =
            static_cast<double>(i) / static_cast<double>(p.ball_points - 1);
        const double delta = p.ball_delta_lo * std::pow(p.ball_delta_hi / p.ball_delta_lo, f);
        if (delta > cap) break;
        const double mass = curve.mass_below(std::nextafter(delta, 2.0 * delta));
        if (mass >= floor_mass) g.push_back({delta, mass});
      }
      if (g.size() >= 2) slot.balls.push_back(std::move(g));
    }

    // boundary modulus: endpoint distances over dyadic arcs, both
    // directions from evenly spaced roots. Arcs below the floor produce
    // distances within a few chain hops (dt^{1/4}) where the exponent is
    // still steepening, and larger-than-cap arcs saturate at the diameter,
    // so both stay out of the fit
    const auto cells = static_cast<double>(disk->boundary_points() - 1);
    const double cell_arc = ell / cells;
    for (std::size_t s = 0; s < p.holder_sources; ++s) {
      const double root = ell * static_cast<double>(s) / static_cast<double>(p.holder_sources);
      const std::uint32_t root_vertex = disk->boundary_vertex(disk->boundary_point_at(root));
      const DistanceField from_root = space.distances(root_vertex);
      Pairs g;
      for (std::size_t j = 0; j < p.holder_scales; ++j) {
        const double arc = p.holder_min_cells * cell_arc * std::ldexp(1.0, static_cast<int>(j));
        if (arc > p.holder_arc_cap * ell * (1.0 + 1e-9)) break;
        for (const double sign : {1.0, -1.0}) {
          const double at = std::fmod(root + sign * arc + ell, ell);
          const std::uint32_t other = disk->boundary_vertex(disk->boundary_point_at(at));
          const double d = from_root.dist[other];
          if (d > 0.0 && std::isfinite(d)) g.push_back({arc, d});
        }
      }
      slot.modulus.push_back(std::move(g));
    }

    // neighborhoods of two fixed arcs, delta sweep in the mass window
    for (const double start : {0.0, 0.5 * ell}) {
      const DistanceField f = space.distances(arc_sources(*disk, start, p.arc_fraction * ell));
      Pairs g = quantile_sweep(mass_curve(space, f), p.arc_mass_lo, p.arc_mass_hi, floor_mass,
                               std::numeric_limits<double>::infinity(), p.arc_delta_points);
      if (!g.empty()) slot.arc_delta.push_back(std::move(g));
    }

    // neighborhood mass at fixed delta, arc-length sweep; delta is fixed
    // by the smallest arc's mass quantile so the collar term dominates the
    // endpoint caps at every arc
    std::vector<MassCurve> nu_curves;
    std::vector<double> nu_arcs;
    for (std::size_t j = 2; j < 2 + p.arc_nu_points; ++j) {
      const double arc_len = ell * std::ldexp(1.0, -static_cast<int>(j));
      nu_arcs.push_back(arc_len);
      nu_curves.push_back(mass_curve(space, space.distances(arc_sources(*disk, 0.0, arc_len))));
    }
    if (!nu_curves.empty() && !nu_curves.back().dist.empty()) {
      const MassCurve& small = nu_curves.back();
      const double delta =
          small.radius_at_mass(std::max(p.arc_nu_mass * small.total, floor_mass));
      for (std::size_t j = 0; j < nu_curves.size(); ++j) {
        const double m = nu_curves[j].mass_below(std::nextafter(delta, 2.0 * delta));
        if (m > 0.0) slot.arc_nu.push_back({nu_arcs[j], m});
      }
    }
  });

  const std::size_t min_groups = std::max<std::size_t>(3, p.replicas / 2);
  DiskGeometryReports out;

  out.ball_volume.name = "ball-volume";
  out.ball_volume.param("seed", std::uint64_t{p.seed});
  out.ball_volume.param("replicas", std::uint64_t{p.replicas});
  out.ball_volume.param("n", std::uint64_t{p.n});
  {
    std::vector<Pairs> groups;
    double collapse = 0.0;
    std::vector<double> depths;
    for (auto& s : slots) {
      for (auto& g : s.balls) groups.push_back(std::move(g));
      collapse = std::max(collapse, s.collapse_err);
      depths.push_back(s.root_depth);
    }
    out.ball_volume.add_band("root_collapse_err", collapse, 0.0, p.collapse_tol);
    out.ball_volume.add("root_depth_median", median(depths));
    add_pooled_fit(out.ball_volume, "ball", groups, p.ball_slope_lo, p.ball_slope_hi, min_groups);
    append_raw(out.ball_volume, groups);
  }

  out.boundary_modulus.name = "boundary-modulus";
  out.boundary_modulus.param("seed", std::uint64_t{p.seed});
  out.boundary_modulus.param("replicas", std::uint64_t{p.replicas});
  out.boundary_modulus.param("n", std::uint64_t{p.n});
  {
    // pool per-scale medians across roots and replicas, then one fit
    std::map<double, std::vector<double>> by_scale;
    for (auto& s : slots)
      for (auto& g : s.modulus)
        for (const auto& pr : g) {
          by_scale[pr[0]].push_back(pr[1]);
          out.boundary_modulus.raw.push_back(pr);
        }
    std::size_t min_samples = std::numeric_limits<std::size_t>::max();
    std::vector<double> xs, ys;
    for (auto& [scale, vals] : by_scale) {
      min_samples = std::min(min_samples, vals.size());
      if (vals.size() < p.holder_min_samples) continue;
      xs.push_back(scale);
      ys.push_back(median(vals));
    }
    out.boundary_modulus.add_band("modulus_scales", static_cast<double>(xs.size()), 3.0, 1e18);
    out.boundary_modulus.add("modulus_min_samples",
                             by_scale.empty() ? 0.0 : static_cast<double>(min_samples));
    if (xs.size() >= 3) {
      const ExponentFit fit = fit_exponent(xs, ys);
      out.boundary_modulus.add_band("modulus_slope", fit.slope, p.holder_slope_lo,
                                    p.holder_slope_hi);
      out.boundary_modulus.add("modulus_slope_se", fit.slope_se);
      out.boundary_modulus.add("modulus_points", static_cast<double>(fit.points));
    }
  }

  out.arc_neighborhood.name = "arc-neighborhood";
  out.arc_neighborhood.param("seed", std::uint64_t{p.seed});
  out.arc_neighborhood.param("replicas", std::uint64_t{p.replicas});
  out.arc_neighborhood.param("n", std::uint64_t{p.n});
  {
    std::vector<Pairs> dg, ng;
    for (auto& s : slots) {
      for (auto& g : s.arc_delta) dg.push_back(std::move(g));
      ng.push_back(std::move(s.arc_nu));
    }
    add_pooled_fit(out.arc_neighborhood, "arc_delta", dg, p.arc_delta_slope_lo,
                   p.arc_delta_slope_hi, min_groups);
    add_pooled_fit(out.arc_neighborhood, "arc_length", ng, p.arc_nu_slope_lo, p.arc_nu_slope_hi,
                   min_groups);
    append_raw(out.arc_neighborhood, dg);
  }
  return out;
}

// ---------------------------------------------------------------------------

GluedReports glued_reports(const GluedParams& p) {
  struct Slot {
    std::vector<Pairs> near_groups;
    Pairs control;
    std::vector<std::vector<double>> segment_counts;  // [delta][center]
    std::vector<std::vector<double>> crossings;       // [delta][geodesic]
    double min_crossing = kInf;
  };
  std::vector<double> deltas(p.delta_points);
  for (std::size_t i = 0; i < p.delta_points; ++i)
    deltas[i] = p.delta_max * std::pow(2.0, -0.5 * static_cast<double>(i));

  std::vector<Slot> slots(p.replicas);
  parallel_for(p.replicas, static_cast<unsigned>(p.workers), [&](std::size_t r) {
    Slot& slot = slots[r];
    slot.segment_counts.resize(p.delta_points);
    slot.crossings.resize(p.delta_points);

    DiskSpec spec;
    spec.perimeter = p.perimeter;
    spec.area = p.area;
    spec.n = p.n;
    spec.mode = StepMode::walk;
    spec.seed = p.seed;
    spec.replica = static_cast<std::uint32_t>(2 * r);
    auto d1 = std::make_shared<const DiskInstance>(build_disk(spec));
    spec.replica = static_cast<std::uint32_t>(2 * r + 1);
    auto d2 = std::make_shared<const DiskInstance>(build_disk(spec));
    const double cell = d1->dt();

    GluedSpace glued = glue_disks(d1, d2, {0.0, p.perimeter}, {0.0, p.perimeter}, true);
    const FiniteGeodesicSpace& space = glued.space;
    const UnionPieces& model = glued.model();

    std::vector<std::uint32_t> seam;
    for (const auto& mark : glued.interface) seam.push_back(mark.vertex);
    const DistanceField from_seam = space.distances(seam);

    // near-seam balls from several seam points; mass in the glued space
    // doubles, so the windows see the same cell counts as a single disk
    const std::size_t m = glued.interface.size();
    for (std::size_t c = 0; c < p.seam_centers; ++c) {
      const std::size_t idx = (m * (2 * c + 1)) / (2 * p.seam_centers);
      const std::uint32_t center = glued.interface[idx].vertex;
      const DistanceField f = space.distances(center);
      Pairs g = quantile_sweep(mass_curve(space, f), p.ball_mass_lo, p.ball_mass_hi,
                               p.ball_min_cells * cell,
                               std::numeric_limits<double>::infinity(), p.ball_points);
      if (!g.empty()) slot.near_groups.push_back(std::move(g));
      for (std::size_t i = 0; i < p.delta_points; ++i)
        slot.segment_counts[i].push_back(
            static_cast<double>(ball_segment_count(glued, f, deltas[i], p.segment_v)));
    }

    // control ball away from the seam
    Rng rng(p.seed, stream_id(kTagGlueControl, static_cast<std::uint32_t>(r)));
    std::uint32_t control = model.global_of[0][d1->vertex_of(d1->uniform_grid_index(rng))];
    double control_depth = from_seam.dist[control];
    for (int attempt = 0; attempt < 8; ++attempt) {
      const std::uint32_t v = model.global_of[0][d1->vertex_of(d1->uniform_grid_index(rng))];
      if (from_seam.dist[v] > control_depth) {
        control_depth = from_seam.dist[v];
        control = v;
      }
    }
    const DistanceField from_control = space.distances(control);
    slot.control =
        quantile_sweep(mass_curve(space, from_control), p.ball_mass_lo, p.ball_mass_hi,
                       p.ball_min_cells * cell, 0.9 * control_depth, p.ball_points);

    // geodesics between the pieces and their seam crossings
    Rng srng(p.seed, stream_id(kTagGlueSource, static_cast<std::uint32_t>(r)));
    Rng trng(p.seed, stream_id(kTagGlueTarget, static_cast<std::uint32_t>(r)));
    for (std::size_t g = 0; g < p.geodesic_pairs; ++g) {
      std::uint32_t s = model.global_of[0][d1->vertex_of(d1->uniform_grid_index(srng))];
      std::uint32_t t = model.global_of[1][d2->vertex_of(d2->uniform_grid_index(trng))];
      const std::vector<std::uint32_t> chain = geodesic(space, s, t);
      if (chain.empty()) continue;
      for (std::size_t i = 0; i < p.delta_points; ++i) {
        const auto c = static_cast<double>(crossing_count(glued, chain, deltas[i]));
        slot.crossings[i].push_back(c);
        slot.min_crossing = std::min(slot.min_crossing, c);
      }
    }
  });

  GluedReports out;
  out.locality.name = "glued-locality";
  out.locality.param("seed", std::uint64_t{p.seed});
  out.locality.param("replicas", std::uint64_t{p.replicas});
  out.locality.param("n", std::uint64_t{p.n});
  {
    std::vector<Pairs> near, control;
    for (auto& s : slots) {
      for (auto& g : s.near_groups) near.push_back(std::move(g));
      control.push_back(std::move(s.control));
    }
    add_pooled_fit(out.locality, "near_seam_ball", near, p.ball_slope_lo, p.ball_slope_hi,
                   std::max<std::size_t>(3, p.replicas));
    add_pooled_fit(out.locality, "control_ball", control, p.ball_slope_lo, p.ball_slope_hi,
                   std::max<std::size_t>(3, p.replicas / 2));
    append_raw(out.locality, near);

    // seam segments met by small balls around seam points
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < p.delta_points; ++i) {
      std::vector<double> counts;
      for (const auto& s : slots)
        for (double c : s.segment_counts[i]) counts.push_back(c);
      if (counts.empty()) continue;
      const double p95 = quantile(std::move(counts), 0.95);
      const double bound = std::pow(deltas[i], -p.segment_v * (1.0 + p.segment_slack));
      worst_ratio = std::max(worst_ratio, p95 / bound);
    }
    out.locality.add_band("segment_count_p95_over_bound", worst_ratio, 0.0, 1.0);
  }

  out.crossings.name = "seam-crossings";
  out.crossings.param("seed", std::uint64_t{p.seed});
  out.crossings.param("replicas", std::uint64_t{p.replicas});
  out.crossings.param("geodesic_pairs", std::uint64_t{p.geodesic_pairs});
  {
    std::vector<double> xs, ys;
    double min_crossing = kInf;
    for (std::size_t i = 0; i < p.delta_points; ++i) {
      std::vector<double> all;
      for (const auto& s : slots)
        for (double c : s.crossings[i]) all.push_back(c);
      if (all.empty()) continue;
      const double m = mean(all);
      out.crossings.raw.push_back({deltas[i], m});
      xs.push_back(deltas[i]);
      ys.push_back(m);
    }
    for (const auto& s : slots) min_crossing = std::min(min_crossing, s.min_crossing);
    out.crossings.add_band("min_crossings", std::isfinite(min_crossing) ? min_crossing : -1.0,
                           1.0, 1e18);
    if (xs.size() >= 3) {
      const ExponentFit fit = fit_exponent(xs, ys);
      const double exponent = -fit.slope;
      out.crossings.add("crossing_exponent", exponent);
      out.crossings.add("crossing_exponent_se", fit.slope_se);
      out.crossings.add_band("crossing_exponent_plus_se", exponent + fit.slope_se, -1e12,
                             p.crossing_exponent_cap);
    } else {
      out.crossings.add_band("crossing_scales", static_cast<double>(xs.size()), 3.0, 1e18);
    }
  }
  return out;
}

Report self_glue_report(const SelfGlueParams& p) {
  Report rep;
  rep.name = "self-glue-modulus";
  rep.param("seed", std::uint64_t{p.seed});
  rep.param("replicas", std::uint64_t{p.replicas});
  rep.param("n", std::uint64_t{p.n});

  std::vector<Pairs> groups(p.replicas);
  for (std::size_t r = 0; r < p.replicas; ++r) {
    DiskSpec spec;
    spec.n = p.n;
    spec.mode = StepMode::walk;
    spec.seed = p.seed;
    spec.replica = static_cast<std::uint32_t>(r);
    auto disk = std::make_shared<const DiskInstance>(build_disk(spec));
    const double ell = disk->perimeter();
    GluedSpace glued = self_glue(disk, {0.0, 0.5 * ell}, {0.5 * ell, ell}, true);
    const DistanceField f = glued.space.distances(glued.interface.front().vertex);
    for (std::size_t j = 0; j < p.scales; ++j) {
      const double arc = 0.5 * ell * std::ldexp(1.0, -static_cast<int>(j));
      double diam = 0.0;
      for (const auto& mark : glued.interface) {
        if (mark.coordinate > arc + 1e-12) break;
        if (std::isfinite(f.dist[mark.vertex])) diam = std::max(diam, f.dist[mark.vertex]);
      }
      if (diam > 0.0) groups[r].push_back({arc, diam});
    }
  }
  add_pooled_fit(rep, "seam_diameter", groups, p.slope_lo, p.slope_hi,
                 std::max<std::size_t>(3, p.replicas / 2));
  append_raw(rep, groups);
  return rep;
}

Report flat_ratio_report(const FlatParams& p) {
  Report rep;
  rep.name = "flat-ratio";
  rep.param("m", std::uint64_t{p.m});

  const FlatCounterexample flat = flat_counterexample(p.m);
  const double slack = 2.0 / static_cast<double>(p.m);

  constexpr std::size_t kCoords = 9;
  double coords[kCoords];
  std::vector<DistanceField> with_fields(kCoords), without_fields(kCoords);
  for (std::size_t i = 0; i < kCoords; ++i) {
    coords[i] = static_cast<double>(i) / static_cast<double>(kCoords - 1);
    with_fields[i] = flat.with_segment.distances(flat.seam_vertex(coords[i]));
    without_fields[i] = flat.without_segment.distances(flat.seam_vertex(coords[i]));
  }

  double ratio_lo = kInf, ratio_hi = -kInf, err_with = 0.0, err_without = 0.0;
  for (std::size_t i = 0; i < kCoords; ++i)
    for (std::size_t j = i + 1; j < kCoords; ++j) {
      const double sep = coords[j] - coords[i];
      if (sep < p.min_separation - 1e-12) continue;
      const std::uint32_t target = flat.seam_vertex(coords[j]);
      const double dw = with_fields[i].dist[target];
      const double dwo = without_fields[i].dist[target];
      ratio_lo = std::min(ratio_lo, dw / dwo);
      ratio_hi = std::max(ratio_hi, dw / dwo);
      err_with = std::max(err_with, std::fabs(dw - 0.5 * sep));
      err_without = std::max(err_without, std::fabs(dwo - sep));
      rep.raw.push_back({sep, dw / dwo});
    }
  rep.add_band("interface_ratio_min", ratio_lo, p.ratio_lo, p.ratio_hi);
  rep.add_band("interface_ratio_max", ratio_hi, p.ratio_lo, p.ratio_hi);
  rep.add_band("with_segment_error_max", err_with, 0.0, slack);
  rep.add_band("without_segment_error_max", err_without, 0.0, slack);

  // internal metrics of the halves must not see the segment at all
  const std::uint32_t side = static_cast<std::uint32_t>(p.m + 1);
  std::vector<char> lower_half(flat.with_segment.vertex_count(), 0);
  for (std::uint32_t v = 0; v < side * side; ++v) lower_half[v] = 1;
  const FiniteGeodesicSpace int_with = flat.with_segment.internal(lower_half);
  const FiniteGeodesicSpace int_without = flat.without_segment.internal(lower_half);
  double internal_diff = 0.0;
  const std::uint32_t a = side / 3, b = (2 * side) / 3;
  for (const auto& [s, t] : {std::pair{a * side + a, b * side + b},
                             std::pair{a * side + b, b * side + a},
                             std::pair{0u, side * side - 1}}) {
    internal_diff = std::max(
        internal_diff, std::fabs(int_with.distance(s, t) - int_without.distance(s, t)));
  }
  rep.add_band("internal_metric_diff", internal_diff, 0.0, 0.0);
  return rep;
}

Report grid_consistency_report(const GridConsistencyParams& p) {
  Report rep;
  rep.name = "grid-consistency";
  rep.param("seed", std::uint64_t{p.seed});
  rep.param("replicas", std::uint64_t{p.replicas});
  rep.param("n_coarse", std::uint64_t{p.n_coarse});
  rep.param("n_fine", std::uint64_t{p.n_fine});
  rep.param("r1", p.r1);
  rep.param("r2", p.r2);

  std::vector<double> coarse(p.replicas), fine(p.replicas);
  auto boundary_distance = [&](std::size_t n, std::uint32_t replica) {
    DiskSpec spec;
    spec.n = n;
    spec.mode = StepMode::walk;
    spec.seed = p.seed;
    spec.replica = replica;
    auto disk = std::make_shared<const DiskInstance>(build_disk(spec));
    const auto space = FiniteGeodesicSpace::from_disk(disk);
    const std::uint32_t s = disk->boundary_vertex(disk->boundary_point_at(p.r1));
    const std::uint32_t t = disk->boundary_vertex(disk->boundary_point_at(p.r2));
    return space.distance(s, t);
  };
  parallel_for(p.replicas, static_cast<unsigned>(p.workers), [&](std::size_t r) {
    coarse[r] = boundary_distance(p.n_coarse, static_cast<std::uint32_t>(r));
    fine[r] = boundary_distance(p.n_fine, static_cast<std::uint32_t>(100000 + r));
  });

  const KsResult ks = ks_two_sample(coarse, fine);
  const double med_c = median(coarse);
  const double med_f = median(fine);
  rep.add_band("ks_p_value", ks.p_value, p.ks_p_min, 1.0);
  rep.add("ks_statistic", ks.statistic);
  rep.add("median_rel_shift", std::fabs(med_f - med_c) / med_c);
  rep.add("median_coarse", med_c);
  rep.add("median_fine", med_f);
  return rep;
}

Report boundary_avoidance_report(const BoundaryAvoidanceParams& p) {
  Report rep;
  rep.name = "boundary-avoidance";
  rep.param("seed", std::uint64_t{p.seed});
  rep.param("replicas", std::uint64_t{p.replicas});

  std::vector<double> fractions(p.sizes.size(), 0.0);
  for (std::size_t si = 0; si < p.sizes.size(); ++si) {
    std::vector<char> touched(p.replicas, 0);
    parallel_for(p.replicas, static_cast<unsigned>(p.workers), [&](std::size_t r) {
      DiskSpec spec;
      spec.n = p.sizes[si];
      spec.mode = StepMode::walk;
      spec.seed = p.seed;
      spec.replica = static_cast<std::uint32_t>(r);
      auto disk = std::make_shared<const DiskInstance>(build_disk(spec));
      const auto space = FiniteGeodesicSpace::from_disk(disk);
      std::unordered_set<std::uint32_t> boundary;
      for (std::uint32_t k = 0; k < disk->boundary_points(); ++k)
        boundary.insert(disk->boundary_vertex(k));

      Rng rng(p.seed,
              stream_id(kTagAvoidance + static_cast<std::uint32_t>(si),
                        static_cast<std::uint32_t>(r)));
      auto interior_vertex = [&] {
        for (int attempt = 0; attempt < 64; ++attempt) {
          const std::uint32_t v = disk->vertex_of(disk->uniform_grid_index(rng));
          if (!boundary.count(v)) return v;
        }
        return disk->vertex_of(disk->uniform_grid_index(rng));
      };
      const std::uint32_t s = interior_vertex();
      const std::uint32_t t = interior_vertex();
      for (std::uint32_t v : geodesic(space, s, t))
        if (boundary.count(v)) {
          touched[r] = 1;
          break;
        }
    });
    std::size_t hits = 0;
    for (char c : touched) hits += c;
    fractions[si] = static_cast<double>(hits) / static_cast<double>(p.replicas);
    rep.add("touch_fraction_n_" + std::to_string(p.sizes[si]), fractions[si]);
    rep.raw.push_back({static_cast<double>(p.sizes[si]), fractions[si]});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < fractions.size(); ++i)
    if (fractions[i] > fractions[i - 1]) monotone = false;
  rep.add_band("fraction_nonincreasing", monotone ? 1.0 : 0.0, 1.0, 1.0);
  return rep;
}

}  // namespace bdisk
