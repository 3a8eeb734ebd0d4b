#include "rhino/discovery.hpp"

#include <cmath>
#include <numbers>

#include "rhino/errors.hpp"

namespace rhino {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void validate(const ObserverPose& pose) {
  if (!is_finite(pose.position) || !std::isfinite(pose.yaw)) {
    throw Error(ErrorCode::InvalidArgument, "observer pose must be finite");
  }
  if (!(pose.fov > 0.0) || pose.fov > 2.0 * std::numbers::pi + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "observer fov must lie in (0, 2pi]");
  }
}

void validate(const DiscoveryParams& params) {
  const auto is_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(params.range > 0.0)) throw Error(ErrorCode::InvalidArgument, "discovery range must be positive");
  if (!is_probability(params.p_detect_opaque) || !is_probability(params.p_detect_transparent)) {
    throw Error(ErrorCode::InvalidArgument, "detection probabilities must lie in [0, 1]");
  }
}

double detection_draw(std::uint64_t seed, const std::string& chunk_id, std::int64_t tick) {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ fnv1a(chunk_id));
  key = splitmix64(key ^ static_cast<std::uint64_t>(tick));
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

bool in_sensor_view(const MeshChunk& chunk, const ObserverPose& pose, double range) {
  const Vec3 offset = centroid_of(chunk) - pose.position;
  if (norm(offset) > range) return false;
  if (pose.fov >= 2.0 * std::numbers::pi) return true;
  const double horizontal = std::hypot(offset.x, offset.z);
  if (horizontal == 0.0) return true;
  const double bearing = std::atan2(offset.z, offset.x);
  return std::abs(wrap_angle(bearing - pose.yaw)) <= 0.5 * pose.fov;
}

std::vector<std::string> step_discovery(const WorldModel& truth, WorldModel& discovered,
                                        const ObserverPose& pose, const DiscoveryParams& params,
                                        std::int64_t tick) {
  validate(pose);
  validate(params);
  std::vector<MeshChunk> revealed;
  for (const auto& [id, chunk] : truth.chunks()) {
    if (discovered.contains(id) || !in_sensor_view(chunk, pose, params.range)) continue;
    const double p = chunk.material == Material::Opaque ? params.p_detect_opaque
                                                        : params.p_detect_transparent;
    if (detection_draw(params.seed, id, tick) < p) {
      MeshChunk copy = chunk;
      copy.revealed_at_tick = tick;
      revealed.push_back(std::move(copy));
    }
  }
  std::vector<std::string> ids;
  ids.reserve(revealed.size());
  for (const MeshChunk& c : revealed) ids.push_back(c.chunk_id);
  if (!revealed.empty()) discovered.ingest_chunks(std::move(revealed));
  return ids;
}

}  // namespace rhino
