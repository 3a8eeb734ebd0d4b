#include "rhino/scene_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "rhino/errors.hpp"

namespace rhino {

namespace {

std::size_t resolve_index(const std::string& token, std::size_t vertex_count,
                          const std::string& where) {
  const std::string head = token.substr(0, token.find('/'));
  long long value = 0;
  try {
    std::size_t used = 0;
    value = std::stoll(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw Error(ErrorCode::SceneFormat, where + ": bad face index '" + token + "'");
  }
  long long resolved = value > 0 ? value - 1 : static_cast<long long>(vertex_count) + value;
  if (value == 0 || resolved < 0 || resolved >= static_cast<long long>(vertex_count)) {
    throw Error(ErrorCode::SceneFormat, where + ": face index out of range '" + token + "'");
  }
  return static_cast<std::size_t>(resolved);
}

}  // namespace

Material parse_material(const std::string& text) {
  if (text == "opaque" || text == "Opaque") return Material::Opaque;
  if (text == "transparent" || text == "Transparent") return Material::Transparent;
  throw Error(ErrorCode::SceneFormat, "unknown material '" + text + "'");
}

std::string to_string(Material material) {
  return material == Material::Opaque ? "opaque" : "transparent";
}

std::vector<Triangle> parse_obj(std::istream& in, const std::string& source_name) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag[0] == '#') continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (tag == "v") {
      Vec3 v;
      if (!(fields >> v.x >> v.y >> v.z)) {
        throw Error(ErrorCode::SceneFormat, where + ": vertex needs three coordinates");
      }
      vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<std::size_t> face;
      std::string token;
      while (fields >> token) face.push_back(resolve_index(token, vertices.size(), where));
      if (face.size() < 3) {
        throw Error(ErrorCode::SceneFormat, where + ": face needs at least three vertices");
      }
      for (std::size_t i = 1; i + 1 < face.size(); ++i) {
        triangles.push_back({vertices[face[0]], vertices[face[i]], vertices[face[i + 1]]});
      }
    }
  }
  return triangles;
}

std::vector<Triangle> load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SceneFormat, "cannot open " + path.string());
  return parse_obj(in, path.string());
}

std::vector<ManifestEntry> parse_manifest(std::istream& in,
                                          const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;
    std::string obj;
    std::string material;
    std::string extra;
    if (!(fields >> obj >> material) || (fields >> extra)) {
      throw Error(ErrorCode::SceneFormat,
                  "manifest line " + std::to_string(line_no) +
                      ": expected '<chunk_id> <obj_file> <opaque|transparent>'");
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::SceneFormat, "duplicate chunk id '" + id + "'");
    }
    entries.push_back({id, base_dir / obj, parse_material(material)});
  }
  return entries;
}

WorldModel load_scene(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::SceneFormat, "cannot open " + manifest_path.string());
  const auto entries = parse_manifest(in, manifest_path.parent_path());
  std::vector<MeshChunk> chunks;
  chunks.reserve(entries.size());
  for (const ManifestEntry& entry : entries) {
    chunks.push_back({entry.chunk_id, load_obj(entry.obj_path), entry.material, 0});
  }
  WorldModel world;
  world.ingest_chunks(std::move(chunks));
  return world;
}

}  // namespace rhino
