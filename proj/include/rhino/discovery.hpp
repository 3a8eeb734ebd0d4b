#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "rhino/world.hpp"

namespace rhino {

/// Observer (headset) pose. Yaw 0 looks along +x, yaw pi/2 along +z.
struct ObserverPose {
  Vec3 position;
  double yaw = 0.0;
  double fov = 2.0 * std::numbers::pi;
};

struct DiscoveryParams {
  double range = 4.0;
  double p_detect_opaque = 1.0;
  double p_detect_transparent = 0.0;
  std::uint64_t seed = 0;
};

void validate(const ObserverPose& pose);
void validate(const DiscoveryParams& params);

/// Uniform draw in [0, 1) that depends only on (seed, chunk_id, tick).
double detection_draw(std::uint64_t seed, const std::string& chunk_id, std::int64_t tick);

/// True when the chunk centroid is within range and inside the yaw-only FOV wedge.
bool in_sensor_view(const MeshChunk& chunk, const ObserverPose& pose, double range);

/// Reveals eligible truth chunks into `discovered` and returns their ids in
/// ascending order. Chunks already present in `discovered` are never touched.
std::vector<std::string> step_discovery(const WorldModel& truth, WorldModel& discovered,
                                        const ObserverPose& pose, const DiscoveryParams& params,
                                        std::int64_t tick);

}  // namespace rhino
