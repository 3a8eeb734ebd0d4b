#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace rhino {

/// Meters, y-up, right-handed.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

struct Triangle {
  Vec3 a;
  Vec3 b;
  Vec3 c;

  Vec3 normal() const { return cross(b - a, c - a); }
  double area() const { return 0.5 * norm(normal()); }
  Vec3 centroid() const { return (a + b + c) * (1.0 / 3.0); }

  friend constexpr bool operator==(const Triangle&, const Triangle&) = default;
};

/// Triangles at or below this area are dropped on ingestion.
inline constexpr double kMinTriangleArea = 1e-12;

struct Aabb {
  Vec3 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

  bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }

  void extend(const Vec3& p) {
    min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
  }
  void extend(const Aabb& o) {
    if (o.empty()) return;
    extend(o.min);
    extend(o.max);
  }
  void extend(const Triangle& t) {
    extend(t.a);
    extend(t.b);
    extend(t.c);
  }

  bool overlaps(const Aabb& o) const {
    return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y &&
           min.z <= o.max.z && o.min.z <= max.z;
  }

  Vec3 center() const { return (min + max) * 0.5; }

  friend constexpr bool operator==(const Aabb&, const Aabb&) = default;
};

inline Aabb bounds_of(const Triangle& t) {
  Aabb box;
  box.extend(t);
  return box;
}

/// Ray parameter of the intersection with `tri`, if any. Edges and vertices are
/// inclusive; parallel rays never hit.
std::optional<double> intersect_ray_triangle(const Vec3& origin, const Vec3& direction,
                                             const Triangle& tri);

/// Exact separating-axis overlap test between a closed triangle and a closed box.
bool triangle_overlaps_box(const Triangle& tri, const Aabb& box);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

}  // namespace rhino
