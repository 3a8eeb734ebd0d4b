#include "rhino/lidar.hpp"

#include <numbers>

#include "rhino/errors.hpp"

namespace rhino {

void validate(const LidarParams& params) {
  if (params.beam_count < 1 || !(params.max_range > 0.0) || params.rotation_period < 1 ||
      !std::isfinite(params.scan_height)) {
    throw Error(ErrorCode::InvalidArgument,
                "lidar needs beam_count >= 1, max_range > 0 and rotation_period >= 1");
  }
}

int highlighted_beam(const LidarParams& params, std::int64_t tick) {
  const std::int64_t period = params.rotation_period;
  const std::int64_t phase = ((tick % period) + period) % period;
  return static_cast<int>(phase * params.beam_count / period);
}

double beam_azimuth(const LidarParams& params, double heading, int index) {
  return heading + 2.0 * std::numbers::pi * index / params.beam_count;
}

LidarFrame scan(const WorldModel& world, const Pose2D& robot_pose, const LidarParams& params,
                std::int64_t tick) {
  validate(params);
  if (!robot_pose.finite()) throw Error(ErrorCode::InvalidArgument, "robot pose must be finite");

  LidarFrame frame;
  frame.origin = {robot_pose.x, robot_pose.ground_y + params.scan_height, robot_pose.z};
  frame.ranges.resize(params.beam_count);
  frame.highlighted_beam = highlighted_beam(params, tick);
  for (int i = 0; i < params.beam_count; ++i) {
    const Vec3 dir = horizontal_direction(beam_azimuth(params, robot_pose.heading, i));
    if (const auto hit = world.raycast(frame.origin, dir, params.max_range)) {
      frame.ranges[i] = hit->distance;
      frame.hit_points.push_back(hit->point);
    }
  }
  return frame;
}

}  // namespace rhino
