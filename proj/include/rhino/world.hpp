#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhino/geometry.hpp"

namespace rhino {

enum class Material { Opaque, Transparent };

struct MeshChunk {
  std::string chunk_id;
  std::vector<Triangle> triangles;
  Material material = Material::Opaque;
  std::int64_t revealed_at_tick = 0;

  friend bool operator==(const MeshChunk&, const MeshChunk&) = default;
};

Aabb bounds_of(const MeshChunk& chunk);

/// Area-weighted centroid of the chunk surface.
Vec3 centroid_of(const MeshChunk& chunk);

struct IngestSummary {
  std::size_t added_triangles = 0;
  bool replaced = false;
};

struct RayHit {
  Vec3 point;
  double distance = 0.0;
  std::string chunk_id;
  std::size_t triangle_index = 0;
};

struct TriangleRef {
  std::string chunk_id;
  std::size_t triangle_index = 0;

  friend auto operator<=>(const TriangleRef&, const TriangleRef&) = default;
};

/// Tolerance on |direction| - 1 accepted by raycast.
inline constexpr double kDirectionTolerance = 1e-6;

/// Triangle geometry keyed by chunk with a BVH over every triangle.
///
/// Copies are independent values; a const WorldModel is safe to share across
/// threads. The BVH is rebuilt eagerly on every mutation, so query results are
/// a pure function of the chunk map.
class WorldModel {
 public:
  /// Inserts or atomically replaces a chunk. Degenerate triangles (area at or
  /// below kMinTriangleArea, or non-finite vertices) are dropped first; throws
  /// Error(EmptyChunk) when nothing survives, leaving the world untouched.
  IngestSummary ingest_chunk(MeshChunk chunk);

  /// Same contract as ingest_chunk applied in order, with a single index rebuild.
  std::vector<IngestSummary> ingest_chunks(std::vector<MeshChunk> chunks);

  bool contains(const std::string& chunk_id) const { return chunks_.contains(chunk_id); }
  const MeshChunk* find(const std::string& chunk_id) const;
  const std::map<std::string, MeshChunk>& chunks() const { return chunks_; }
  std::vector<std::string> chunk_ids() const;
  std::size_t triangle_count() const { return prims_.size(); }
  bool empty() const { return chunks_.empty(); }

  /// Nearest hit with distance in [min_range, max_range]. Equal distances resolve
  /// by (chunk_id, triangle_index) ascending. Throws InvalidDirection when
  /// |direction| is not 1 within kDirectionTolerance and InvalidArgument when
  /// max_range is not positive.
  std::optional<RayHit> raycast(const Vec3& origin, const Vec3& direction, double max_range,
                                double min_range = 0.0) const;

  /// Triangles that exactly overlap the closed box, sorted by (chunk_id, index).
  std::vector<TriangleRef> triangles_in_box(const Aabb& box) const;

  /// Broad phase: calls `visit` for every triangle whose bounds overlap `box`.
  /// Order is deterministic but unspecified.
  void for_each_candidate(const Aabb& box,
                          const std::function<void(const std::string& chunk_id, std::size_t,
                                                   const Triangle&)>& visit) const;

  friend bool operator==(const WorldModel&, const WorldModel&) = default;

 private:
  struct Prim {
    Triangle tri;
    Aabb box;
    std::uint32_t chunk_ordinal = 0;
    std::uint32_t triangle_index = 0;
    friend bool operator==(const Prim&, const Prim&) = default;
  };
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // first prim for leaves, right child otherwise
    std::uint32_t count = 0;  // 0 for interior nodes
    friend bool operator==(const Node&, const Node&) = default;
  };

  static MeshChunk filtered(MeshChunk chunk);
  void rebuild_index();
  std::uint32_t build_node(std::uint32_t begin, std::uint32_t end);

  std::map<std::string, MeshChunk> chunks_;
  std::vector<std::string> ordinal_ids_;
  std::vector<Prim> prims_;
  std::vector<Node> nodes_;
};

}  // namespace rhino
