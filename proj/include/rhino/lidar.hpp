#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rhino/pose.hpp"
#include "rhino/world.hpp"

namespace rhino {

struct LidarParams {
  int beam_count = 360;
  double max_range = 8.0;
  double scan_height = 0.3;
  int rotation_period = 120;  // ticks per full revolution of the highlighted beam
};

void validate(const LidarParams& params);

struct LidarFrame {
  Vec3 origin;                               // emitter position
  std::vector<std::optional<double>> ranges;  // one entry per beam
  std::vector<Vec3> hit_points;              // only beams that hit, in beam order
  int highlighted_beam = 0;
};

/// Beam index highlighted at `tick`; one full revolution per rotation_period ticks.
int highlighted_beam(const LidarParams& params, std::int64_t tick);

/// Azimuth of beam `index` for a robot heading.
double beam_azimuth(const LidarParams& params, double heading, int index);

/// Horizontal scan at scan_height above the robot base against `world`.
LidarFrame scan(const WorldModel& world, const Pose2D& robot_pose, const LidarParams& params,
                std::int64_t tick);

}  // namespace rhino
