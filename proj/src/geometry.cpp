#include "rhino/geometry.hpp"

#include <array>
#include <numbers>

#include "rhino/errors.hpp"

namespace rhino {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyChunk: return "EmptyChunk";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StaleSpec: return "StaleSpec";
    case ErrorCode::StartNotNavigable: return "StartNotNavigable";
    case ErrorCode::GoalNotNavigable: return "GoalNotNavigable";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::SceneFormat: return "SceneFormat";
    case ErrorCode::ScenarioFormat: return "ScenarioFormat";
    case ErrorCode::ProtocolFormat: return "ProtocolFormat";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

std::optional<double> intersect_ray_triangle(const Vec3& origin, const Vec3& direction,
                                             const Triangle& tri) {
  // Moller-Trumbore, double precision, inclusive barycentric bounds.
  const Vec3 e1 = tri.b - tri.a;
  const Vec3 e2 = tri.c - tri.a;
  const Vec3 p = cross(direction, e2);
  const double det = dot(e1, p);
  if (det == 0.0) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Vec3 s = origin - tri.a;
  const double u = dot(s, p) * inv_det;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(direction, q) * inv_det;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = dot(e2, q) * inv_det;
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

namespace {

// Projects the triangle (relative to the box center) onto `axis` and checks the
// interval against the box projection radius.
bool separated_on(const Vec3& axis, const std::array<Vec3, 3>& v, const Vec3& half) {
  const double p0 = dot(v[0], axis);
  const double p1 = dot(v[1], axis);
  const double p2 = dot(v[2], axis);
  const double r =
      half.x * std::abs(axis.x) + half.y * std::abs(axis.y) + half.z * std::abs(axis.z);
  return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
}

}  // namespace

bool triangle_overlaps_box(const Triangle& tri, const Aabb& box) {
  const Vec3 c = box.center();
  const Vec3 half = (box.max - box.min) * 0.5;
  const std::array<Vec3, 3> v{tri.a - c, tri.b - c, tri.c - c};

  // Box face normals.
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = std::min({v[0][axis], v[1][axis], v[2][axis]});
    const double hi = std::max({v[0][axis], v[1][axis], v[2][axis]});
    if (lo > half[axis] || hi < -half[axis]) return false;
  }

  const std::array<Vec3, 3> edges{v[1] - v[0], v[2] - v[1], v[0] - v[2]};
  const Vec3 n = cross(edges[0], edges[1]);
  if (separated_on(n, v, half)) return false;

  const std::array<Vec3, 3> units{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (const Vec3& e : edges) {
    for (const Vec3& u : units) {
      const Vec3 axis = cross(u, e);
      if (dot(axis, axis) == 0.0) continue;
      if (separated_on(axis, v, half)) return false;
    }
  }
  return true;
}

double wrap_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

}  // namespace rhino
