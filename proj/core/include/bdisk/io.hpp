#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bdisk/disk.hpp"
#include "bdisk/gluing.hpp"
#include "bdisk/metric.hpp"
#include "bdisk/path.hpp"

namespace bdisk {

// All binary containers are versioned, little-endian, and byte-identical
// across runs with the same seed. Readers reject unknown magic/version with
// invalid-schema.

void write_path(const std::string& file, const PathSample& path);
PathSample read_path(const std::string& file);
// columns t,value
void write_path_csv(const std::string& file, const PathSample& path);

// .bdisk: spec block + contour + tree labels + boundary bridge. Reading
// rebuilds the instance deterministically from those arrays.
void write_disk(const std::string& file, const DiskInstance& disk);
std::shared_ptr<const DiskInstance> read_disk(const std::string& file);
// sidecar: parameters, seed record, summary statistics
std::string disk_summary_json(const DiskInstance& disk);

// .bglue: embedded piece containers + the identification schema.
void write_glued(const std::string& file,
                 std::span<const std::shared_ptr<const DiskInstance>> pieces,
                 const GluingSchema& schema);
struct GluedFile {
  std::vector<std::shared_ptr<const DiskInstance>> pieces;
  GluingSchema schema;
};
GluedFile read_glued(const std::string& file);

// columns source,vertex,distance
void write_distances_csv(const std::string& file, std::uint32_t source,
                         const DistanceField& field);

}  // namespace bdisk
