#include "rhino/world.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include "rhino/errors.hpp"

namespace rhino {

namespace {

constexpr std::uint32_t kLeafSize = 4;

bool is_valid(const Triangle& t) {
  return is_finite(t.a) && is_finite(t.b) && is_finite(t.c) && t.area() > kMinTriangleArea;
}

// Traversal boxes are padded so rounding in the slab test never culls a triangle
// that the exact triangle test would report.
Aabb padded(const Aabb& box) {
  const double scale = 1.0 + std::max({std::abs(box.min.x), std::abs(box.min.y),
                                       std::abs(box.min.z), std::abs(box.max.x),
                                       std::abs(box.max.y), std::abs(box.max.z)});
  const double pad = 1e-9 * scale;
  return {box.min - Vec3{pad, pad, pad}, box.max + Vec3{pad, pad, pad}};
}

// Slab test; returns the entry parameter when the ray overlaps [t_min, t_max].
std::optional<double> ray_box(const Vec3& origin, const Vec3& inv_dir, const Vec3& dir,
                              const Aabb& box, double t_min, double t_max) {
  double lo = t_min;
  double hi = t_max;
  for (int axis = 0; axis < 3; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < box.min[axis] || origin[axis] > box.max[axis]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[axis] - origin[axis]) * inv_dir[axis];
    double t1 = (box.max[axis] - origin[axis]) * inv_dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (lo > hi) return std::nullopt;
  }
  return lo;
}

}  // namespace

Aabb bounds_of(const MeshChunk& chunk) {
  Aabb box;
  for (const Triangle& t : chunk.triangles) box.extend(t);
  return box;
}

Vec3 centroid_of(const MeshChunk& chunk) {
  Vec3 sum;
  double total = 0.0;
  for (const Triangle& t : chunk.triangles) {
    const double area = t.area();
    sum = sum + t.centroid() * area;
    total += area;
  }
  if (total <= 0.0) return bounds_of(chunk).center();
  return sum * (1.0 / total);
}

MeshChunk WorldModel::filtered(MeshChunk chunk) {
  std::erase_if(chunk.triangles, [](const Triangle& t) { return !is_valid(t); });
  if (chunk.triangles.empty()) {
    throw Error(ErrorCode::EmptyChunk,
                "chunk '" + chunk.chunk_id + "' has no non-degenerate triangles");
  }
  return chunk;
}

IngestSummary WorldModel::ingest_chunk(MeshChunk chunk) {
  std::vector<MeshChunk> batch;
  batch.push_back(std::move(chunk));
  return ingest_chunks(std::move(batch)).front();
}

std::vector<IngestSummary> WorldModel::ingest_chunks(std::vector<MeshChunk> chunks) {
  // Validate everything before touching state so a failure leaves the world as it was.
  for (MeshChunk& chunk : chunks) chunk = filtered(std::move(chunk));

  std::vector<IngestSummary> summaries;
  summaries.reserve(chunks.size());
  for (MeshChunk& chunk : chunks) {
    IngestSummary summary{chunk.triangles.size(), chunks_.contains(chunk.chunk_id)};
    std::string id = chunk.chunk_id;
    chunks_.insert_or_assign(std::move(id), std::move(chunk));
    summaries.push_back(summary);
  }
  rebuild_index();
  return summaries;
}

const MeshChunk* WorldModel::find(const std::string& chunk_id) const {
  const auto it = chunks_.find(chunk_id);
  return it == chunks_.end() ? nullptr : &it->second;
}

std::vector<std::string> WorldModel::chunk_ids() const {
  std::vector<std::string> ids;
  ids.reserve(chunks_.size());
  for (const auto& [id, _] : chunks_) ids.push_back(id);
  return ids;
}

void WorldModel::rebuild_index() {
  ordinal_ids_.clear();
  prims_.clear();
  nodes_.clear();
  std::uint32_t ordinal = 0;
  for (const auto& [id, chunk] : chunks_) {
    ordinal_ids_.push_back(id);
    for (std::uint32_t i = 0; i < chunk.triangles.size(); ++i) {
      const Triangle& t = chunk.triangles[i];
      prims_.push_back({t, bounds_of(t), ordinal, i});
    }
    ++ordinal;
  }
  if (prims_.empty()) return;
  nodes_.reserve(2 * prims_.size() / kLeafSize + 1);
  build_node(0, static_cast<std::uint32_t>(prims_.size()));
}

std::uint32_t WorldModel::build_node(std::uint32_t begin, std::uint32_t end) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  Aabb box;
  Aabb centroids;
  for (std::uint32_t i = begin; i < end; ++i) {
    box.extend(prims_[i].box);
    centroids.extend(prims_[i].box.center());
  }
  box = padded(box);

  if (end - begin <= kLeafSize) {
    nodes_[index] = {box, begin, end - begin};
    return index;
  }

  const Vec3 extent = centroids.max - centroids.min;
  int axis = 0;
  if (extent.y > extent[axis]) axis = 1;
  if (extent.z > extent[axis]) axis = 2;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(prims_.begin() + begin, prims_.begin() + mid, prims_.begin() + end,
                   [axis](const Prim& l, const Prim& r) {
                     return std::make_tuple(l.box.center()[axis], l.chunk_ordinal,
                                            l.triangle_index) <
                            std::make_tuple(r.box.center()[axis], r.chunk_ordinal,
                                            r.triangle_index);
                   });

  build_node(begin, mid);
  const std::uint32_t right = build_node(mid, end);
  nodes_[index] = {box, right, 0};
  return index;
}

std::optional<RayHit> WorldModel::raycast(const Vec3& origin, const Vec3& direction,
                                          double max_range, double min_range) const {
  if (!is_finite(direction) || std::abs(norm(direction) - 1.0) > kDirectionTolerance) {
    throw Error(ErrorCode::InvalidDirection, "ray direction must be unit length");
  }
  if (!(max_range > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_range must be positive");
  }
  if (nodes_.empty() || min_range > max_range) return std::nullopt;

  const Vec3 inv_dir{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};
  double best_t = max_range;
  const Prim* best = nullptr;

  std::array<std::uint32_t, 64> stack{};
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!ray_box(origin, inv_dir, direction, node.box, min_range, best_t)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Prim& prim = prims_[i];
        const auto t = intersect_ray_triangle(origin, direction, prim.tri);
        if (!t || *t < min_range || *t > best_t) continue;
        if (best != nullptr && *t == best_t &&
            std::tie(prim.chunk_ordinal, prim.triangle_index) >=
                std::tie(best->chunk_ordinal, best->triangle_index)) {
          continue;
        }
        best_t = *t;
        best = &prim;
      }
      continue;
    }
    const std::uint32_t left = static_cast<std::uint32_t>(&node - nodes_.data()) + 1;
    const std::uint32_t right = node.first;
    // Depth is bounded by log2 of the prim count, far below the stack size.
    stack[top++] = right;
    stack[top++] = left;
  }

  if (best == nullptr) return std::nullopt;
  return RayHit{origin + direction * best_t, best_t, ordinal_ids_[best->chunk_ordinal],
                best->triangle_index};
}

void WorldModel::for_each_candidate(
    const Aabb& box,
    const std::function<void(const std::string&, std::size_t, const Triangle&)>& visit) const {
  if (nodes_.empty() || box.empty()) return;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const std::uint32_t index = stack.back();
    stack.pop_back();
    const Node& node = nodes_[index];
    if (!node.box.overlaps(box)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Prim& prim = prims_[i];
        if (prim.box.overlaps(box)) {
          visit(ordinal_ids_[prim.chunk_ordinal], prim.triangle_index, prim.tri);
        }
      }
      continue;
    }
    stack.push_back(node.first);
    stack.push_back(index + 1);
  }
}

std::vector<TriangleRef> WorldModel::triangles_in_box(const Aabb& box) const {
  std::vector<TriangleRef> out;
  for_each_candidate(box, [&](const std::string& id, std::size_t index, const Triangle& tri) {
    if (triangle_overlaps_box(tri, box)) out.push_back({id, index});
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rhino
