#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "rhino/world.hpp"

namespace rhino {

/// Parses the Wavefront OBJ subset used for scene chunks: `v x y z` and
/// `f i j k ...` records (1-based or negative indices, `i/t/n` forms accepted).
/// Polygons with more than three vertices are fan-triangulated; every other
/// record type is ignored.
std::vector<Triangle> parse_obj(std::istream& in, const std::string& source_name = "<obj>");
std::vector<Triangle> load_obj(const std::filesystem::path& path);

struct ManifestEntry {
  std::string chunk_id;
  std::filesystem::path obj_path;  // resolved against the manifest directory
  Material material = Material::Opaque;
};

/// Scene manifest: one `<chunk_id> <obj_file> <opaque|transparent>` record per
/// line; blank lines and lines starting with '#' are skipped.
std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir);

/// Loads every chunk named by the manifest into a fresh world (revealed_at_tick = 0).
WorldModel load_scene(const std::filesystem::path& manifest_path);

Material parse_material(const std::string& text);
std::string to_string(Material material);

}  // namespace rhino
