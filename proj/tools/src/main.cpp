// Experiment harness. Exit codes: 0 pass, 1 acceptance/report band failure,
// 2 usage or config error, 3 resource limit.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "bdisk/acceptance.hpp"
#include "bdisk/config.hpp"
#include "bdisk/disk.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/gluing.hpp"
#include "bdisk/io.hpp"
#include "bdisk/labels.hpp"
#include "bdisk/metric.hpp"
#include "bdisk/reports.hpp"
#include "bdisk/rmq.hpp"
#include "bdisk/rng.hpp"
#include "bdisk/sampler.hpp"

namespace fs = std::filesystem;
using namespace bdisk;

namespace {

// Options shared by every subcommand. Explicit flags beat --set overrides,
// which beat the --config file, which beats built-in defaults.
struct CommonOpts {
  std::string config_file;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double perimeter = 0.0;
  double area = 0.0;
  bool random_area = false;
  std::string mode;
  std::size_t replicas = 0;
  std::size_t workers = 0;
  std::string output_dir;
  std::string run_name;

  CLI::Option* o_seed = nullptr;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_perimeter = nullptr;
  CLI::Option* o_area = nullptr;
  CLI::Option* o_random_area = nullptr;
  CLI::Option* o_mode = nullptr;
  CLI::Option* o_replicas = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_output = nullptr;
  CLI::Option* o_name = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON config file");
    cmd->add_option("--set", sets, "config override key=value (repeatable)");
    o_seed = cmd->add_option("--seed", seed, "base seed");
    o_n = cmd->add_option("--n", n, "contour grid values");
    o_perimeter = cmd->add_option("--perimeter", perimeter, "boundary length");
    o_area = cmd->add_option("--area", area, "target area");
    o_random_area = cmd->add_flag("--random-area", random_area, "sample the area");
    o_mode = cmd->add_option("--mode", mode, "step mode: walk | gaussian");
    o_replicas = cmd->add_option("--replicas", replicas, "replica count");
    o_workers = cmd->add_option("--workers", workers, "worker threads");
    o_output = cmd->add_option("--output-dir", output_dir, "run directory root");
    o_name = cmd->add_option("--name", run_name, "run name suffix");
  }

  RunConfig resolve() const {
    RunConfig cfg =
        config_file.empty() ? RunConfig{} : RunConfig::from_file(config_file);
    for (const auto& s : sets) cfg.apply_set(s);
    if (o_seed->count()) cfg.seed = seed;
    if (o_n->count()) cfg.n = n;
    if (o_perimeter->count()) cfg.perimeter = perimeter;
    if (o_area->count()) cfg.area = area;
    if (o_random_area->count()) cfg.random_area = random_area;
    if (o_mode->count()) {
      if (mode == "walk")
        cfg.mode = StepMode::walk;
      else if (mode == "gaussian")
        cfg.mode = StepMode::gaussian;
      else
        throw InvalidParameter("mode must be walk or gaussian");
    }
    if (o_replicas->count()) cfg.replicas = replicas;
    if (o_workers->count()) cfg.workers = workers;
    if (o_output->count()) cfg.output_dir = output_dir;
    if (o_name->count()) cfg.run_name = run_name;
    return cfg;
  }

  bool replicas_set() const { return o_replicas->count() > 0; }
  bool n_set() const { return o_n->count() > 0; }
};

fs::path make_run_dir(const RunConfig& cfg) {
  const fs::path root = cfg.resolved_output_dir();
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
  fs::path dir = root / (std::string(stamp) + "-" + cfg.run_name);
  for (int k = 2; fs::exists(dir); ++k)
    dir = root / (std::string(stamp) + "-" + cfg.run_name + "-" + std::to_string(k));
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << cfg.to_json() << '\n';
  return dir;
}

void write_report_files(const fs::path& reports_dir, const Report& rep) {
  fs::create_directories(reports_dir);
  std::ofstream(reports_dir / (rep.name + ".json")) << rep.to_json() << '\n';
  std::ofstream(reports_dir / (rep.name + ".txt")) << rep.to_text();
  if (!rep.raw.empty()) std::ofstream(reports_dir / (rep.name + ".csv")) << rep.raw_csv();
}

// ---------------------------------------------------------------------------

int cmd_sample_disk(const CommonOpts& common, std::uint32_t replica, bool dump_distances,
                    std::uint32_t source) {
  const RunConfig cfg = common.resolve();
  if (cfg.n < 2) throw InvalidParameter("n must be >= 2");
  DiskSpec spec;
  spec.perimeter = cfg.perimeter;
  spec.area = cfg.area;
  spec.random_area = cfg.random_area;
  spec.n = cfg.n;
  spec.mode = cfg.mode;
  spec.seed = cfg.seed;
  spec.replica = replica;
  spec.boundary_cells = cfg.boundary_cells;
  auto disk = std::make_shared<const DiskInstance>(build_disk(spec));

  const fs::path dir = make_run_dir(cfg);
  char base[32];
  std::snprintf(base, sizeof(base), "disk-%03u", replica);
  const fs::path file = dir / (std::string(base) + ".bdisk");
  write_disk(file.string(), *disk);
  std::ofstream(dir / (std::string(base) + ".json")) << disk_summary_json(*disk) << '\n';
  std::cout << "wrote " << file.string() << '\n';

  if (dump_distances) {
    if (source >= disk->vertex_count())
      throw InvalidParameter("--source vertex out of range");
    const DistanceField field = quotient_distances(disk, source);
    const fs::path csv = dir / (std::string(base) + "-distances.csv");
    write_distances_csv(csv.string(), source, field);
    std::cout << "wrote " << csv.string() << '\n';
  }
  return 0;
}

int cmd_glue(const CommonOpts& common, const std::string& schema_file, bool flat,
             std::size_t m) {
  const RunConfig cfg = common.resolve();
  if (flat) {
    FlatParams p;
    p.m = m;
    p.min_separation = cfg.tuning_or("flat_min_separation", p.min_separation);
    p.ratio_lo = cfg.tuning_or("flat_ratio_lo", p.ratio_lo);
    p.ratio_hi = cfg.tuning_or("flat_ratio_hi", p.ratio_hi);
    const Report rep = flat_ratio_report(p);
    const fs::path dir = make_run_dir(cfg);
    write_report_files(dir / "reports", rep);
    std::cout << rep.to_text();
    return rep.pass() ? 0 : 1;
  }
  if (schema_file.empty())
    throw InvalidParameter("glue needs --schema FILE or --flat-counterexample");
  if (!fs::exists(schema_file)) throw InvalidSchema("schema file not found: " + schema_file);
  std::ifstream in(schema_file, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const GluingSchema schema = parse_gluing_schema(buffer.str());

  std::vector<std::shared_ptr<const DiskInstance>> pieces;
  const fs::path schema_dir = fs::path(schema_file).parent_path();
  for (const std::string& name : schema.piece_files) {
    fs::path p = name;
    if (!fs::exists(p)) p = schema_dir / name;  // paths relative to the schema
    if (!fs::exists(p)) throw InvalidSchema("piece file not found: " + name);
    pieces.push_back(read_disk(p.string()));
  }
  GluedSpace glued = quotient_space(pieces, schema);

  const fs::path dir = make_run_dir(cfg);
  const fs::path file = dir / "glued.bglue";
  write_glued(file.string(), pieces, schema);
  nlohmann::json j;
  j["pieces"] = pieces.size();
  j["vertices"] = glued.space.vertex_count();
  j["total_area"] = glued.space.total_area();
  j["interface_points"] = glued.interface.size();
  j["seam_breaks"] = glued.seam_breaks;
  std::ofstream(dir / "glued.json") << j.dump(2) << '\n';
  std::cout << "wrote " << file.string() << " (" << glued.space.vertex_count() << " vertices, "
            << glued.interface.size() << " interface points)\n";
  return 0;
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kReportNames = {
    "excursion-count", "excursion-poisson", "snake-tail",
    "disk-geometry",   "glued",             "self-glue",
    "flat-ratio",      "grid-consistency",  "boundary-avoidance"};

std::string joined_report_names() {
  std::string out;
  for (const auto& n : kReportNames) out += (out.empty() ? "" : ", ") + n;
  return out;
}

std::vector<Report> run_named_report(const std::string& name, const RunConfig& cfg,
                                     bool replicas_set, bool n_set) {
  const auto tune = [&](const char* key, double fallback) {
    return cfg.tuning_or(key, fallback);
  };
  if (name == "excursion-count") {
    ExcursionCountParams p;
    p.seed = cfg.seed;
    if (replicas_set) {
      p.mean_replicas = cfg.replicas;
      p.count_replicas = cfg.replicas;
    }
    p.mean_dt = tune("mean_dt", p.mean_dt);
    p.count_grid = static_cast<std::size_t>(tune("count_grid", static_cast<double>(p.count_grid)));
    p.mean_rel_tol = tune("mean_rel_tol", p.mean_rel_tol);
    p.slope_lo = tune("count_slope_lo", p.slope_lo);
    p.slope_hi = tune("count_slope_hi", p.slope_hi);
    return {excursion_count_report(p)};
  }
  if (name == "excursion-poisson") {
    ExcursionPoissonParams p;
    p.seed = cfg.seed;
    if (replicas_set) p.replicas = cfg.replicas;
    p.window = tune("window", p.window);
    p.duration_floor = tune("duration_floor", p.duration_floor);
    p.dt = tune("poisson_dt", p.dt);
    p.rel_tol = tune("poisson_rel_tol", p.rel_tol);
    p.dispersion_lo = tune("dispersion_lo", p.dispersion_lo);
    p.dispersion_hi = tune("dispersion_hi", p.dispersion_hi);
    return {excursion_poisson_report(p)};
  }
  if (name == "snake-tail") {
    SnakeTailParams p;
    p.seed = cfg.seed;
    if (replicas_set) p.excursions = cfg.replicas;
    if (n_set) p.grid = cfg.n;
    p.slope_lo = tune("tail_slope_lo", p.slope_lo);
    p.slope_hi = tune("tail_slope_hi", p.slope_hi);
    p.ratio_lo = tune("tail_ratio_lo", p.ratio_lo);
    p.ratio_hi = tune("tail_ratio_hi", p.ratio_hi);
    return {snake_tail_report(p)};
  }
  if (name == "disk-geometry") {
    DiskGeometryParams p;
    p.seed = cfg.seed;
    p.replicas = cfg.replicas;
    if (n_set) p.n = cfg.n;
    p.perimeter = cfg.perimeter;
    p.area = cfg.area;
    p.workers = cfg.workers;
    p.ball_slope_lo = tune("ball_slope_lo", p.ball_slope_lo);
    p.ball_slope_hi = tune("ball_slope_hi", p.ball_slope_hi);
    p.holder_min_cells = tune("holder_min_cells", p.holder_min_cells);
    p.holder_slope_lo = tune("holder_slope_lo", p.holder_slope_lo);
    p.holder_slope_hi = tune("holder_slope_hi", p.holder_slope_hi);
    p.arc_delta_slope_lo = tune("arc_delta_slope_lo", p.arc_delta_slope_lo);
    p.arc_delta_slope_hi = tune("arc_delta_slope_hi", p.arc_delta_slope_hi);
    p.arc_nu_slope_lo = tune("arc_nu_slope_lo", p.arc_nu_slope_lo);
    p.arc_nu_slope_hi = tune("arc_nu_slope_hi", p.arc_nu_slope_hi);
    const DiskGeometryReports reps = disk_geometry_reports(p);
    return {reps.ball_volume, reps.boundary_modulus, reps.arc_neighborhood};
  }
  if (name == "glued") {
    GluedParams p;
    p.seed = cfg.seed;
    if (replicas_set) p.replicas = cfg.replicas;
    if (n_set) p.n = cfg.n;
    p.perimeter = cfg.perimeter;
    p.area = cfg.area;
    p.workers = cfg.workers;
    p.ball_slope_lo = tune("glued_ball_slope_lo", p.ball_slope_lo);
    p.ball_slope_hi = tune("glued_ball_slope_hi", p.ball_slope_hi);
    p.delta_max = tune("crossing_delta_max", p.delta_max);
    p.crossing_exponent_cap = tune("crossing_exponent_cap", p.crossing_exponent_cap);
    p.segment_v = tune("segment_v", p.segment_v);
    p.segment_slack = tune("segment_slack", p.segment_slack);
    const GluedReports reps = glued_reports(p);
    return {reps.locality, reps.crossings};
  }
  if (name == "self-glue") {
    SelfGlueParams p;
    p.seed = cfg.seed;
    if (replicas_set) p.replicas = cfg.replicas;
    if (n_set) p.n = cfg.n;
    p.slope_lo = tune("self_glue_slope_lo", p.slope_lo);
    p.slope_hi = tune("self_glue_slope_hi", p.slope_hi);
    return {self_glue_report(p)};
  }
  if (name == "flat-ratio") {
    FlatParams p;
    p.m = static_cast<std::size_t>(tune("flat_m", static_cast<double>(p.m)));
    p.min_separation = tune("flat_min_separation", p.min_separation);
    p.ratio_lo = tune("flat_ratio_lo", p.ratio_lo);
    p.ratio_hi = tune("flat_ratio_hi", p.ratio_hi);
    return {flat_ratio_report(p)};
  }
  if (name == "grid-consistency") {
    GridConsistencyParams p;
    p.seed = cfg.seed;
    if (replicas_set) p.replicas = cfg.replicas;
    p.workers = cfg.workers;
    p.n_coarse = static_cast<std::size_t>(tune("n_coarse", static_cast<double>(p.n_coarse)));
    p.n_fine = static_cast<std::size_t>(tune("n_fine", static_cast<double>(p.n_fine)));
    p.r1 = tune("r1", p.r1);
    p.r2 = tune("r2", p.r2);
    p.ks_p_min = tune("ks_p_min", p.ks_p_min);
    return {grid_consistency_report(p)};
  }
  if (name == "boundary-avoidance") {
    BoundaryAvoidanceParams p;
    p.seed = cfg.seed;
    if (replicas_set) p.replicas = cfg.replicas;
    p.workers = cfg.workers;
    return {boundary_avoidance_report(p)};
  }
  throw InvalidParameter("unknown report '" + name + "'; valid reports: " + joined_report_names());
}

int cmd_report(const CommonOpts& common, const std::vector<std::string>& names, bool list) {
  if (list) {
    for (const auto& n : kReportNames) std::cout << n << '\n';
    return 0;
  }
  if (names.empty()) {
    std::cerr << "error: no report named; valid reports: " << joined_report_names() << '\n';
    return 2;
  }
  for (const auto& name : names)
    if (std::find(kReportNames.begin(), kReportNames.end(), name) == kReportNames.end()) {
      std::cerr << "error: unknown report '" << name
                << "'; valid reports: " << joined_report_names() << '\n';
      return 2;
    }
  const RunConfig cfg = common.resolve();
  const fs::path dir = make_run_dir(cfg);
  bool all_pass = true;
  for (const auto& name : names) {
    for (const Report& rep : run_named_report(name, cfg, common.replicas_set(), common.n_set())) {
      write_report_files(dir / "reports", rep);
      std::cout << rep.to_text();
      all_pass = all_pass && rep.pass();
    }
  }
  std::cout << "reports written to " << (dir / "reports").string() << '\n';
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

// Brute-force cross-checks at sizes where the oracle is affordable.
bool oracle_floyd_warshall(std::uint64_t seed, bool inject_fault) {
  for (std::uint32_t r = 0; r < 10; ++r) {
    DiskSpec spec;
    spec.n = 48;
    spec.mode = StepMode::walk;
    spec.seed = seed;
    spec.replica = r;
    auto disk = std::make_shared<const DiskInstance>(build_disk(spec));
    const std::size_t n = disk->grid_size();
    std::vector<double> d(n * n);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        d[i * n + j] = disk->vertex_of(i) == disk->vertex_of(j) ? 0.0 : disk->d_z(i, j);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const double dik = d[i * n + k];
        for (std::size_t j = 0; j < n; ++j)
          if (dik + d[k * n + j] < d[i * n + j]) d[i * n + j] = dik + d[k * n + j];
      }
    if (inject_fault) d[1] += 1e-3;
    for (std::uint32_t c = 0; c < disk->vertex_count(); ++c) {
      const DistanceField field = quotient_distances(disk, c);
      const std::uint32_t rep_index = disk->vertex_members(c).front();
      for (std::uint32_t j = 0; j < n; ++j)
        if (std::fabs(d[rep_index * n + j] - field.dist[disk->vertex_of(j)]) > 1e-9)
          return false;
    }
  }
  return true;
}

bool oracle_rmq(std::uint64_t seed, bool inject_fault) {
  Rng rng(seed, stream_id(900, 0));
  std::vector<double> values(256);
  for (double& v : values) v = rng.uniform();
  RangeMin rm(values);
  for (std::uint32_t lo = 0; lo < values.size(); ++lo) {
    double best = values[lo];
    std::uint32_t arg = lo;
    for (std::uint32_t hi = lo; hi < values.size(); ++hi) {
      if (values[hi] < best) {
        best = values[hi];
        arg = hi;
      }
      const auto res = rm.query(lo, hi);
      if (inject_fault) return false;
      if (res.value != best || res.argmin != arg) return false;
    }
  }
  return true;
}

bool oracle_cholesky(std::uint64_t seed, bool inject_fault) {
  PathSample contour =
      sample_first_passage_bridge(1.0, 1.0, 128, {seed, stream_id(901, 0), StepMode::walk});
  ForestCode code(std::move(contour));
  const std::size_t n = code.size();
  constexpr std::size_t kReplicas = 8000;
  std::vector<double> cov_s(n * n, 0.0), cov_c(n * n, 0.0);
  for (std::uint32_t r = 0; r < kReplicas; ++r) {
    const auto zs = sample_labels_snake(code, {seed, stream_id(902, r), StepMode::walk});
    const auto zc =
        sample_labels_cholesky(code, {seed, stream_id(903, r), StepMode::gaussian});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        cov_s[i * n + j] += zs[i] * zs[j];
        cov_c[i * n + j] += zc[i] * zc[j];
      }
  }
  double max_entry = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      max_entry = std::max(max_entry, std::fabs(cov_c[i * n + j]) / kReplicas);
      max_diff =
          std::max(max_diff, std::fabs(cov_s[i * n + j] - cov_c[i * n + j]) / kReplicas);
    }
  if (inject_fault) max_diff += max_entry;
  return max_diff <= 0.12 * max_entry;
}

int cmd_oracle_check(const CommonOpts& common, const std::string& oracles_csv,
                     bool inject_fault) {
  const RunConfig cfg = common.resolve();
  std::vector<std::string> names;
  if (oracles_csv == "all") {
    names = {"floyd-warshall", "rmq", "cholesky"};
  } else {
    std::stringstream ss(oracles_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) names.push_back(tok);
  }
  if (names.empty()) throw InvalidParameter("empty oracle list");
  for (const auto& name : names)
    if (name != "floyd-warshall" && name != "rmq" && name != "cholesky")
      throw InvalidParameter("unknown oracle '" + name +
                             "'; valid oracles: floyd-warshall, rmq, cholesky");
  bool all_ok = true;
  for (const auto& name : names) {
    bool ok = false;
    if (name == "floyd-warshall") ok = oracle_floyd_warshall(cfg.seed, inject_fault);
    if (name == "rmq") ok = oracle_rmq(cfg.seed, inject_fault);
    if (name == "cholesky") ok = oracle_cholesky(cfg.seed, inject_fault);
    std::cout << "oracle " << name << ": " << (ok ? "ok" : "FAIL") << '\n';
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_acceptance(const CommonOpts& common) {
  const RunConfig cfg = common.resolve();
  AcceptanceOptions opts;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  opts.log = &std::cout;
  const auto results = run_acceptance(opts);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << "acceptance: " << passed << "/" << results.size() << " criteria pass\n";
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian disk laboratory"};
  app.require_subcommand(1);

  CommonOpts sample_common;
  std::uint32_t replica = 0;
  bool dump_distances = false;
  std::uint32_t source = 0;
  CLI::App* sample = app.add_subcommand("sample-disk", "sample one disk and write it");
  sample_common.attach(sample);
  sample->add_option("--replica", replica, "replica index (stream selector)");
  sample->add_flag("--dump-distances", dump_distances, "write source,vertex,distance CSV");
  sample->add_option("--source", source, "source vertex for --dump-distances");

  CommonOpts glue_common;
  std::string schema_file;
  bool flat = false;
  std::size_t flat_m = 256;
  CLI::App* glue = app.add_subcommand("glue", "glue pieces along a schema");
  glue_common.attach(glue);
  glue->add_option("--schema", schema_file, "gluing schema JSON");
  glue->add_flag("--flat-counterexample", flat, "run the exact flat-square check");
  glue->add_option("--m", flat_m, "flat grid resolution");

  CommonOpts report_common;
  std::vector<std::string> report_names;
  bool list_reports = false;
  CLI::App* report = app.add_subcommand("report", "run named verification reports");
  report_common.attach(report);
  report->add_option("names", report_names, "report names");
  report->add_flag("--list", list_reports, "list report names and exit");

  CommonOpts oracle_common;
  std::string oracles = "all";
  bool inject_fault = false;
  CLI::App* oracle = app.add_subcommand("oracle-check", "run brute-force cross-checks");
  oracle_common.attach(oracle);
  oracle->add_option("--oracles", oracles, "comma list: floyd-warshall,rmq,cholesky");
  oracle->add_flag("--inject-fault", inject_fault, "force a failure (harness self-test)");

  CommonOpts acceptance_common;
  CLI::App* acceptance = app.add_subcommand("acceptance", "run the full pass/fail battery");
  acceptance_common.attach(acceptance);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return cmd_sample_disk(sample_common, replica, dump_distances, source);
    if (glue->parsed()) return cmd_glue(glue_common, schema_file, flat, flat_m);
    if (report->parsed()) return cmd_report(report_common, report_names, list_reports);
    if (oracle->parsed()) return cmd_oracle_check(oracle_common, oracles, inject_fault);
    if (acceptance->parsed()) return cmd_acceptance(acceptance_common);
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
