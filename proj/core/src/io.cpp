#include "bdisk/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bdisk/errors.hpp"
#include "bdisk/rng.hpp"

namespace bdisk {
namespace {

constexpr char kDiskMagic[8] = {'B', 'D', 'I', 'S', 'K', 'B', 'I', 'N'};
constexpr char kPathMagic[8] = {'B', 'P', 'A', 'T', 'H', 'B', 'I', 'N'};
constexpr char kGlueMagic[8] = {'B', 'G', 'L', 'U', 'E', 'B', 'I', 'N'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw InvalidSchema("container truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw InvalidSchema("container truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

void put_values(std::ostream& out, const std::vector<double>& values) {
  put_u64(out, values.size());
  for (double v : values) put_f64(out, v);
}

std::vector<double> get_values(std::istream& in) {
  const std::uint64_t count = get_u64(in);
  if (count > (std::uint64_t{1} << 34)) throw InvalidSchema("implausible array length");
  std::vector<double> values(count);
  for (auto& v : values) v = get_f64(in);
  return values;
}

void check_magic(std::istream& in, const char (&magic)[8]) {
  char got[8];
  in.read(got, 8);
  if (!in || std::memcmp(got, magic, 8) != 0) throw InvalidSchema("unrecognized container");
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw InvalidSchema("unsupported container version");
}

void put_path_block(std::ostream& out, const PathSample& path) {
  put_u32(out, static_cast<std::uint32_t>(path.kind));
  put_u32(out, static_cast<std::uint32_t>(path.seed_record.mode));
  put_u64(out, path.seed_record.seed);
  put_u64(out, path.seed_record.stream);
  put_f64(out, path.dt);
  put_values(out, path.values);
}

PathSample get_path_block(std::istream& in) {
  PathSample path;
  const std::uint32_t kind = get_u32(in);
  if (kind > static_cast<std::uint32_t>(PathKind::stopped_bm))
    throw InvalidSchema("unknown path kind");
  path.kind = static_cast<PathKind>(kind);
  const std::uint32_t mode = get_u32(in);
  if (mode > static_cast<std::uint32_t>(StepMode::walk))
    throw InvalidSchema("unknown step mode");
  path.seed_record.mode = static_cast<StepMode>(mode);
  path.seed_record.seed = get_u64(in);
  path.seed_record.stream = get_u64(in);
  path.dt = get_f64(in);
  path.values = get_values(in);
  return path;
}

void put_spec_block(std::ostream& out, const DiskSpec& spec) {
  put_f64(out, spec.perimeter);
  put_f64(out, spec.area);
  put_u32(out, spec.random_area ? 1 : 0);
  put_u32(out, static_cast<std::uint32_t>(spec.mode));
  put_u32(out, spec.replica);
  put_u32(out, 0);  // reserved
  put_u64(out, spec.n);
  put_u64(out, spec.seed);
  put_u64(out, spec.boundary_cells);
  put_u64(out, spec.max_steps);
}

DiskSpec get_spec_block(std::istream& in) {
  DiskSpec spec;
  spec.perimeter = get_f64(in);
  spec.area = get_f64(in);
  spec.random_area = get_u32(in) != 0;
  spec.mode = static_cast<StepMode>(get_u32(in));
  spec.replica = get_u32(in);
  get_u32(in);
  spec.n = get_u64(in);
  spec.seed = get_u64(in);
  spec.boundary_cells = get_u64(in);
  spec.max_steps = get_u64(in);
  return spec;
}

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + file);
  return out;
}

std::ifstream open_in(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + file);
  return in;
}

void write_disk_body(std::ostream& out, const DiskInstance& disk) {
  put_spec_block(out, disk.spec());
  put_path_block(out, disk.code().contour());
  put_values(out, disk.labels().z0);
  put_values(out, disk.labels().bridge);
}

std::shared_ptr<const DiskInstance> read_disk_body(std::istream& in) {
  DiskSpec spec = get_spec_block(in);
  PathSample contour = get_path_block(in);
  std::vector<double> z0 = get_values(in);
  std::vector<double> bridge_values = get_values(in);

  ForestCode code(std::move(contour), spec.boundary_cells);
  PathSample bridge;
  bridge.kind = PathKind::bridge;
  bridge.dt = bridge_values.size() > 1
                  ? code.perimeter() / static_cast<double>(bridge_values.size() - 1)
                  : 1.0;
  bridge.seed_record = {spec.seed, stream_id(kStreamBridge, spec.replica), StepMode::gaussian};
  bridge.values = std::move(bridge_values);
  LabelField labels = assemble_labels(code, std::move(z0), bridge);
  return std::make_shared<DiskInstance>(std::move(code), std::move(labels), spec);
}

}  // namespace

void write_path(const std::string& file, const PathSample& path) {
  auto out = open_out(file);
  out.write(kPathMagic, 8);
  put_u32(out, kVersion);
  put_path_block(out, path);
  if (!out) throw Error("write failed: " + file);
}

PathSample read_path(const std::string& file) {
  auto in = open_in(file);
  check_magic(in, kPathMagic);
  return get_path_block(in);
}

void write_path_csv(const std::string& file, const PathSample& path) {
  auto out = open_out(file);
  out << "t,value\n";
  out.precision(17);
  for (std::size_t i = 0; i < path.values.size(); ++i)
    out << static_cast<double>(i) * path.dt << ',' << path.values[i] << '\n';
  if (!out) throw Error("write failed: " + file);
}

void write_disk(const std::string& file, const DiskInstance& disk) {
  auto out = open_out(file);
  out.write(kDiskMagic, 8);
  put_u32(out, kVersion);
  write_disk_body(out, disk);
  if (!out) throw Error("write failed: " + file);
}

std::shared_ptr<const DiskInstance> read_disk(const std::string& file) {
  auto in = open_in(file);
  check_magic(in, kDiskMagic);
  return read_disk_body(in);
}

std::string disk_summary_json(const DiskInstance& disk) {
  nlohmann::json j;
  const DiskSpec& spec = disk.spec();
  j["format"] = "bdisk";
  j["version"] = kVersion;
  j["parameters"] = {{"perimeter", spec.perimeter},
                     {"area", spec.random_area ? nlohmann::json() : nlohmann::json(spec.area)},
                     {"random_area", spec.random_area},
                     {"n", spec.n},
                     {"mode", spec.mode == StepMode::walk ? "walk" : "gaussian"},
                     {"seed", spec.seed},
                     {"replica", spec.replica},
                     {"boundary_cells", spec.boundary_cells}};
  double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin;
  for (double v : disk.z()) {
    zmin = std::min(zmin, v);
    zmax = std::max(zmax, v);
  }
  j["summary"] = {{"grid_size", disk.grid_size()},
                  {"dt", disk.dt()},
                  {"realized_area", disk.area()},
                  {"perimeter", disk.perimeter()},
                  {"vertex_count", disk.vertex_count()},
                  {"boundary_points", disk.boundary_points()},
                  {"z_min", zmin},
                  {"z_max", zmax}};
  return j.dump(2);
}

void write_glued(const std::string& file,
                 std::span<const std::shared_ptr<const DiskInstance>> pieces,
                 const GluingSchema& schema) {
  auto out = open_out(file);
  out.write(kGlueMagic, 8);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(pieces.size()));
  for (const auto& piece : pieces) write_disk_body(out, *piece);
  const std::string schema_json = gluing_schema_to_json(schema);
  put_u64(out, schema_json.size());
  out.write(schema_json.data(), static_cast<std::streamsize>(schema_json.size()));
  if (!out) throw Error("write failed: " + file);
}

GluedFile read_glued(const std::string& file) {
  auto in = open_in(file);
  check_magic(in, kGlueMagic);
  GluedFile out;
  const std::uint32_t count = get_u32(in);
  if (count == 0 || count > 4096) throw InvalidSchema("implausible piece count");
  out.pieces.reserve(count);
  for (std::uint32_t p = 0; p < count; ++p) out.pieces.push_back(read_disk_body(in));
  const std::uint64_t len = get_u64(in);
  if (len > (std::uint64_t{1} << 30)) throw InvalidSchema("implausible schema length");
  std::string schema_json(len, '\0');
  in.read(schema_json.data(), static_cast<std::streamsize>(len));
  if (!in) throw InvalidSchema("container truncated");
  out.schema = parse_gluing_schema(schema_json);
  return out;
}

void write_distances_csv(const std::string& file, std::uint32_t source,
                         const DistanceField& field) {
  auto out = open_out(file);
  out << "source,vertex,distance\n";
  out.precision(17);
  for (std::size_t v = 0; v < field.dist.size(); ++v) {
    out << source << ',' << v << ',';
    if (std::isinf(field.dist[v]))
      out << "inf";
    else
      out << field.dist[v];
    out << '\n';
  }
  if (!out) throw Error("write failed: " + file);
}

}  // namespace bdisk
