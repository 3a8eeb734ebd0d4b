#pragma once

#include <cmath>

#include "rhino/geometry.hpp"

namespace rhino {

/// Planar robot pose. Heading 0 faces +x, heading pi/2 faces +z; always in (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double z = 0.0;
  double heading = 0.0;
  double ground_y = 0.0;

  Vec3 position() const { return {x, ground_y, z}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(z) && std::isfinite(heading) && std::isfinite(ground_y);
  }

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Unit horizontal direction for a heading/azimuth angle.
inline Vec3 horizontal_direction(double angle) { return {std::cos(angle), 0.0, std::sin(angle)}; }

}  // namespace rhino
