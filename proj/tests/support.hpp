#pragma once

// Scene builders and brute-force oracles shared by the unit and acceptance tests.
// The oracles deliberately avoid the library's geometry kernels.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "rhino/traversability.hpp"
#include "rhino/world.hpp"

namespace rhino::testing {

inline MeshChunk make_chunk(std::string id, std::vector<Triangle> tris,
                            Material material = Material::Opaque) {
  MeshChunk c;
  c.chunk_id = std::move(id);
  c.triangles = std::move(tris);
  c.material = material;
  return c;
}

/// Horizontal quad at height y, two triangles.
inline std::vector<Triangle> floor_quad(double x0, double z0, double x1, double z1, double y = 0.0) {
  const Vec3 a{x0, y, z0}, b{x1, y, z0}, c{x1, y, z1}, d{x0, y, z1};
  return {{a, c, b}, {a, d, c}};
}

/// Closed axis-aligned box, twelve triangles.
inline std::vector<Triangle> box_mesh(const Vec3& lo, const Vec3& hi) {
  auto v = [&](int i) {
    return Vec3{(i & 4) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 1) ? hi.z : lo.z};
  };
  const int quads[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                           {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
  std::vector<Triangle> out;
  for (const auto& q : quads) {
    out.push_back({v(q[0]), v(q[1]), v(q[2])});
    out.push_back({v(q[0]), v(q[2]), v(q[3])});
  }
  return out;
}

/// Vertical wall in the plane x = x0 spanning z0..z1 and y0..y1.
inline std::vector<Triangle> wall_x(double x0, double z0, double z1, double y0, double y1) {
  const Vec3 a{x0, y0, z0}, b{x0, y0, z1}, c{x0, y1, z1}, d{x0, y1, z0};
  return {{a, b, c}, {a, c, d}};
}

inline Triangle random_triangle(std::mt19937_64& rng, double extent, double size) {
  std::uniform_real_distribution<double> pos(-extent, extent), off(-size, size);
  const Vec3 c{pos(rng), pos(rng), pos(rng)};
  return {c + Vec3{off(rng), off(rng), off(rng)}, c + Vec3{off(rng), off(rng), off(rng)},
          c + Vec3{off(rng), off(rng), off(rng)}};
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  for (;;) {
    const Vec3 v{n(rng), n(rng), n(rng)};
    const double l = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    if (l > 1e-6) return v * (1.0 / l);
  }
}

// ---------------------------------------------------------------------------
// Ray / segment oracle: plane intersection, then an inside test by the signs
// of the three edge cross products against the plane normal.

inline std::optional<double> oracle_ray_triangle(const Vec3& o, const Vec3& d, const Triangle& t) {
  const Vec3 e1{t.b.x - t.a.x, t.b.y - t.a.y, t.b.z - t.a.z};
  const Vec3 e2{t.c.x - t.a.x, t.c.y - t.a.y, t.c.z - t.a.z};
  const Vec3 n{e1.y * e2.z - e1.z * e2.y, e1.z * e2.x - e1.x * e2.z, e1.x * e2.y - e1.y * e2.x};
  const double denom = n.x * d.x + n.y * d.y + n.z * d.z;
  const double nn = std::sqrt(n.x * n.x + n.y * n.y + n.z * n.z);
  if (std::abs(denom) <= 1e-14 * nn) return std::nullopt;
  const double dist = (n.x * (t.a.x - o.x) + n.y * (t.a.y - o.y) + n.z * (t.a.z - o.z)) / denom;
  if (dist < 0.0) return std::nullopt;
  const Vec3 p{o.x + d.x * dist, o.y + d.y * dist, o.z + d.z * dist};
  const std::array<Vec3, 3> v{t.a, t.b, t.c};
  for (int i = 0; i < 3; ++i) {
    const Vec3& p0 = v[i];
    const Vec3& p1 = v[(i + 1) % 3];
    const Vec3 edge{p1.x - p0.x, p1.y - p0.y, p1.z - p0.z};
    const Vec3 to_p{p.x - p0.x, p.y - p0.y, p.z - p0.z};
    const Vec3 c{edge.y * to_p.z - edge.z * to_p.y, edge.z * to_p.x - edge.x * to_p.z,
                 edge.x * to_p.y - edge.y * to_p.x};
    if (c.x * n.x + c.y * n.y + c.z * n.z < -1e-12 * nn * nn) return std::nullopt;
  }
  return dist;
}

inline std::optional<double> oracle_raycast(const std::vector<Triangle>& tris, const Vec3& o,
                                            const Vec3& d, double max_range) {
  std::optional<double> best;
  for (const Triangle& t : tris) {
    const auto hit = oracle_ray_triangle(o, d, t);
    if (hit && *hit <= max_range && (!best || *hit < *best)) best = hit;
  }
  return best;
}

inline std::vector<Triangle> all_triangles(const WorldModel& world) {
  std::vector<Triangle> out;
  for (const auto& [id, chunk] : world.chunks()) {
    out.insert(out.end(), chunk.triangles.begin(), chunk.triangles.end());
  }
  return out;
}

/// Does any triangle cross the open segment (a, b)? Endpoints are excluded by a small margin.
inline bool oracle_segment_blocked(const std::vector<Triangle>& tris, const Vec3& a, const Vec3& b,
                                   double margin = 1e-6) {
  const Vec3 delta{b.x - a.x, b.y - a.y, b.z - a.z};
  const double len = std::sqrt(delta.x * delta.x + delta.y * delta.y + delta.z * delta.z);
  if (len <= 2 * margin) return false;
  const Vec3 d = delta * (1.0 / len);
  for (const Triangle& t : tris) {
    const auto hit = oracle_ray_triangle(a, d, t);
    if (hit && *hit > margin && *hit < len - margin) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Triangle / box overlap by Sutherland-Hodgman clipping of the triangle
// polygon against the six slab planes; overlap iff something survives.

inline bool oracle_triangle_in_box(const Triangle& t, const Aabb& box) {
  std::vector<Vec3> poly{t.a, t.b, t.c};
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const double bound = side == 0 ? box.min[axis] : box.max[axis];
      auto inside = [&](const Vec3& p) { return side == 0 ? p[axis] >= bound : p[axis] <= bound; };
      std::vector<Vec3> out;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec3& cur = poly[i];
        const Vec3& nxt = poly[(i + 1) % poly.size()];
        const bool ci = inside(cur), ni = inside(nxt);
        if (ci) out.push_back(cur);
        if (ci != ni) {
          const double s = (bound - cur[axis]) / (nxt[axis] - cur[axis]);
          Vec3 p = cur + (nxt - cur) * s;
          // pin the clipped coordinate exactly onto the plane
          if (axis == 0) p.x = bound;
          if (axis == 1) p.y = bound;
          if (axis == 2) p.z = bound;
          out.push_back(p);
        }
      }
      poly = std::move(out);
      if (poly.empty()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Vertical cylinder oracle: clip the triangle to the height slab, then test the
// projected polygon against the disk by vertex, edge distance and containment.

inline bool oracle_triangle_cylinder(const Triangle& t, double cx, double cz, double r, double ylo,
                                     double yhi) {
  std::vector<Vec3> poly{t.a, t.b, t.c};
  for (int side = 0; side < 2; ++side) {
    const double bound = side == 0 ? ylo : yhi;
    auto inside = [&](const Vec3& p) { return side == 0 ? p.y >= bound : p.y <= bound; };
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec3& cur = poly[i];
      const Vec3& nxt = poly[(i + 1) % poly.size()];
      const bool ci = inside(cur), ni = inside(nxt);
      if (ci) out.push_back(cur);
      if (ci != ni) {
        const double s = (bound - cur.y) / (nxt.y - cur.y);
        out.push_back(cur + (nxt - cur) * s);
      }
    }
    poly = std::move(out);
    if (poly.empty()) return false;
  }
  auto seg_dist2 = [&](double ax, double az, double bx, double bz) {
    const double dx = bx - ax, dz = bz - az;
    const double l2 = dx * dx + dz * dz;
    double s = l2 > 0 ? ((cx - ax) * dx + (cz - az) * dz) / l2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const double px = ax + s * dx - cx, pz = az + s * dz - cz;
    return px * px + pz * pz;
  };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    if (seg_dist2(a.x, a.z, b.x, b.z) <= r * r) return true;
  }
  // center inside the projected polygon (winding by cross-product signs)
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    const double c = (b.x - a.x) * (cz - a.z) - (b.z - a.z) * (cx - a.x);
    if (c > 0) pos = true;
    if (c < 0) neg = true;
  }
  return !(pos && neg);
}

// ---------------------------------------------------------------------------
// Exact octile arithmetic and a Dijkstra oracle for the planner.

struct Octile {
  std::int64_t s = 0, d = 0;
};

/// Sign of (a.s + a.d*sqrt2) - (b.s + b.d*sqrt2), computed in integers.
inline int octile_compare(const Octile& a, const Octile& b) {
  const std::int64_t x = a.s - b.s, y = a.d - b.d;
  if (x >= 0 && y >= 0) return (x == 0 && y == 0) ? 0 : 1;
  if (x <= 0 && y <= 0) return -1;
  // opposite signs: compare |x| against |y|*sqrt2 by squaring
  const std::int64_t lhs = x * x, rhs = 2 * y * y;
  if (x > 0) return lhs > rhs ? 1 : -1;
  return lhs > rhs ? -1 : 1;
}

inline bool oracle_step_ok(const TraversabilityGrid& g, Cell a, Cell b) {
  if (g.state(b) != CellState::Free) return false;
  if (a.ix != b.ix && a.iy != b.iy) {
    if (g.state({b.ix, a.iy}) == CellState::Blocked) return false;
    if (g.state({a.ix, b.iy}) == CellState::Blocked) return false;
  }
  return true;
}

inline std::optional<Octile> dijkstra_cost(const TraversabilityGrid& g, Cell start, Cell goal) {
  if (g.state(start) != CellState::Free || g.state(goal) != CellState::Free) return std::nullopt;
  const int w = g.width(), h = g.height();
  std::vector<std::optional<Octile>> dist(static_cast<std::size_t>(w) * h);
  std::vector<bool> done(dist.size(), false);
  auto idx = [&](Cell c) { return static_cast<std::size_t>(c.iy) * w + c.ix; };
  dist[idx(start)] = Octile{};
  for (;;) {
    // O(V^2) selection keeps the oracle free of any heap ordering subtleties.
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (done[i] || !dist[i]) continue;
      if (!best || octile_compare(*dist[i], *dist[*best]) < 0) best = i;
    }
    if (!best) return std::nullopt;
    const Cell u{static_cast<int>(*best % w), static_cast<int>(*best / w)};
    if (u.ix == goal.ix && u.iy == goal.iy) return dist[*best];
    done[*best] = true;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const Cell v{u.ix + dx, u.iy + dy};
        if (!g.in_bounds(v) || done[idx(v)] || !oracle_step_ok(g, u, v)) continue;
        Octile nd = *dist[*best];
        (dx && dy ? nd.d : nd.s) += 1;
        auto& cur = dist[idx(v)];
        if (!cur || octile_compare(nd, *cur) < 0) cur = nd;
      }
    }
  }
}

/// Nearest Free cell by BFS with neighbor order +iy, +ix, -iy, -ix.
inline std::optional<Cell> oracle_bfs_free(const TraversabilityGrid& g, Cell from) {
  std::vector<bool> seen(static_cast<std::size_t>(g.width()) * g.height(), false);
  std::deque<Cell> q{from};
  seen[g.index(from)] = true;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    if (g.state(c) == CellState::Free) return c;
    for (const Cell n : {Cell{c.ix, c.iy + 1}, Cell{c.ix + 1, c.iy}, Cell{c.ix, c.iy - 1},
                         Cell{c.ix - 1, c.iy}}) {
      if (!g.in_bounds(n) || seen[g.index(n)]) continue;
      seen[g.index(n)] = true;
      q.push_back(n);
    }
  }
  return std::nullopt;
}

/// Random grid with the given Blocked fraction; the rest is mostly Free with some Unknown.
inline TraversabilityGrid random_grid(std::mt19937_64& rng, int w, int h, double blocked,
                                      double unknown = 0.0, double cell_size = 0.25) {
  TraversabilityConfig cfg;
  cfg.spec.cell_size = cell_size;
  cfg.spec.width = w;
  cfg.spec.height = h;
  TraversabilityGrid g(cfg);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      const double r = u(rng);
      if (r < blocked) {
        g.set({ix, iy}, CellState::Blocked, 0.0);
      } else if (r < blocked + unknown) {
        g.set({ix, iy}, CellState::Unknown, std::nullopt);
      } else {
        g.set({ix, iy}, CellState::Free, 0.0);
      }
    }
  }
  return g;
}

}  // namespace rhino::testing
