#include "rhino/traversability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "rhino/errors.hpp"

namespace rhino {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Projections that only touch along an edge do not count as ground overlap.
constexpr double kOverlapEps = 1e-9;

struct P2 {
  double x = 0.0;
  double z = 0.0;
};

P2 flat(const Vec3& v) { return {v.x, v.z}; }

double cross2(const P2& o, const P2& a, const P2& b) {
  return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x);
}

double dist2_point_segment(const P2& p, const P2& a, const P2& b, double* t_out = nullptr) {
  const double dx = b.x - a.x;
  const double dz = b.z - a.z;
  const double len2 = dx * dx + dz * dz;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.z - a.z) * dz) / len2, 0.0, 1.0);
  if (t_out != nullptr) *t_out = t;
  const double qx = a.x + t * dx - p.x;
  const double qz = a.z + t * dz - p.z;
  return qx * qx + qz * qz;
}

// Positive-area overlap between the xz projection of a triangle and a rectangle.
bool projection_overlaps_rect(const Triangle& tri, double x0, double x1, double z0, double z1) {
  const std::array<P2, 3> v{flat(tri.a), flat(tri.b), flat(tri.c)};
  const std::array<P2, 4> r{P2{x0, z0}, P2{x1, z0}, P2{x1, z1}, P2{x0, z1}};
  const auto separated = [&](double ax, double az) {
    double tmin = kInf, tmax = -kInf, rmin = kInf, rmax = -kInf;
    for (const P2& p : v) {
      const double d = p.x * ax + p.z * az;
      tmin = std::min(tmin, d);
      tmax = std::max(tmax, d);
    }
    for (const P2& p : r) {
      const double d = p.x * ax + p.z * az;
      rmin = std::min(rmin, d);
      rmax = std::max(rmax, d);
    }
    const double scale = std::max(1.0, std::hypot(ax, az));
    return std::min(tmax, rmax) - std::max(tmin, rmin) <= kOverlapEps * scale;
  };
  if (separated(1.0, 0.0) || separated(0.0, 1.0)) return false;
  for (int i = 0; i < 3; ++i) {
    const P2& a = v[i];
    const P2& b = v[(i + 1) % 3];
    const double nx = -(b.z - a.z);
    const double nz = b.x - a.x;
    if (nx == 0.0 && nz == 0.0) continue;
    const double len = std::hypot(nx, nz);
    if (separated(nx / len, nz / len)) return false;
  }
  return true;
}

// Height of the ground triangle at the point of its xz projection closest to (x, z).
double ground_sample(const Triangle& tri, double x, double z) {
  const P2 p{x, z};
  const P2 a = flat(tri.a);
  const P2 b = flat(tri.b);
  const P2 c = flat(tri.c);
  const double area = cross2(a, b, c);
  const double wa = cross2(p, b, c) / area;
  const double wb = cross2(a, p, c) / area;
  const double wc = 1.0 - wa - wb;
  if (wa >= 0.0 && wb >= 0.0 && wc >= 0.0) {
    return wa * tri.a.y + wb * tri.b.y + wc * tri.c.y;
  }
  const std::array<std::pair<const Vec3*, const Vec3*>, 3> edges{
      std::pair{&tri.a, &tri.b}, std::pair{&tri.b, &tri.c}, std::pair{&tri.c, &tri.a}};
  double best_d2 = kInf;
  double best_y = tri.a.y;
  for (const auto& [e0, e1] : edges) {
    double t = 0.0;
    const double d2 = dist2_point_segment(p, flat(*e0), flat(*e1), &t);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_y = e0->y + t * (e1->y - e0->y);
    }
  }
  return best_y;
}

// Sutherland-Hodgman clip of a convex polygon against y >= lo (keep_above) or y <= hi.
std::vector<Vec3> clip_y(const std::vector<Vec3>& poly, double level, bool keep_above) {
  std::vector<Vec3> out;
  const auto inside = [&](const Vec3& v) { return keep_above ? v.y >= level : v.y <= level; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& cur = poly[i];
    const Vec3& nxt = poly[(i + 1) % poly.size()];
    const bool cin = inside(cur);
    const bool nin = inside(nxt);
    if (cin) out.push_back(cur);
    if (cin != nin) {
      const double t = (level - cur.y) / (nxt.y - cur.y);
      Vec3 v = cur + (nxt - cur) * t;
      v.y = level;
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

void validate(const TraversabilityConfig& config) {
  const GridSpec& s = config.spec;
  if (!is_finite(s.origin) || !(s.cell_size > 0.0) || s.width < 1 || s.height < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid spec needs cell_size > 0 and width, height >= 1");
  }
  if (!(config.footprint.radius > 0.0) || !(config.footprint.clearance_height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "footprint radius and clearance must be positive");
  }
  if (!(config.slope_max >= 0.0) || config.slope_max > 0.5 * std::numbers::pi ||
      !(config.ground_skip >= 0.0) || config.ground_skip >= config.footprint.clearance_height) {
    throw Error(ErrorCode::InvalidArgument, "slope_max or ground_skip out of range");
  }
}

TraversabilityGrid::TraversabilityGrid(TraversabilityConfig config) : config_(config) {
  validate(config_);
  const auto n = static_cast<std::size_t>(config_.spec.width) *
                 static_cast<std::size_t>(config_.spec.height);
  cells_.assign(n, CellState::Unknown);
  ground_.assign(n, std::nullopt);
}

Cell TraversabilityGrid::unchecked_cell_of(const Vec3& point) const {
  const GridSpec& s = config_.spec;
  const double fx = std::floor((point.x - s.origin.x) / s.cell_size);
  const double fz = std::floor((point.z - s.origin.z) / s.cell_size);
  const double lim = static_cast<double>(std::numeric_limits<int>::max() / 2);
  return {static_cast<int>(std::clamp(fx, -lim, lim)), static_cast<int>(std::clamp(fz, -lim, lim))};
}

std::optional<Cell> TraversabilityGrid::cell_of(const Vec3& point) const {
  if (!std::isfinite(point.x) || !std::isfinite(point.z)) return std::nullopt;
  const Cell c = unchecked_cell_of(point);
  if (!in_bounds(c)) return std::nullopt;
  return c;
}

Vec3 TraversabilityGrid::cell_center(Cell c) const {
  const GridSpec& s = config_.spec;
  const double y = ground_height(c).value_or(s.origin.y);
  return {s.origin.x + (c.ix + 0.5) * s.cell_size, y, s.origin.z + (c.iy + 0.5) * s.cell_size};
}

void TraversabilityGrid::set(Cell c, CellState state, std::optional<double> ground) {
  cells_[index(c)] = state;
  ground_[index(c)] = ground;
}

std::size_t TraversabilityGrid::count(CellState state) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), state));
}

std::vector<std::vector<std::pair<int, int>>> TraversabilityGrid::encode_rle() const {
  std::vector<std::vector<std::pair<int, int>>> rows(height());
  for (int iy = 0; iy < height(); ++iy) {
    auto& row = rows[iy];
    for (int ix = 0; ix < width(); ++ix) {
      const int s = static_cast<int>(cells_[index({ix, iy})]);
      if (!row.empty() && row.back().first == s) {
        ++row.back().second;
      } else {
        row.emplace_back(s, 1);
      }
    }
  }
  return rows;
}

bool triangle_intersects_cylinder(const Triangle& tri, double center_x, double center_z,
                                  double radius, double y_lo, double y_hi) {
  std::vector<Vec3> poly{tri.a, tri.b, tri.c};
  poly = clip_y(poly, y_lo, true);
  if (poly.empty()) return false;
  poly = clip_y(poly, y_hi, false);
  if (poly.empty()) return false;

  const P2 center{center_x, center_z};
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (dist2_point_segment(center, flat(poly[i]), flat(poly[(i + 1) % poly.size()])) <= r2) {
      return true;
    }
  }
  // Center strictly inside the projected polygon (which is convex).
  if (poly.size() < 3) return false;
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double c = cross2(flat(poly[i]), flat(poly[(i + 1) % poly.size()]), center);
    pos = pos || c > 0.0;
    neg = neg || c < 0.0;
  }
  // Collinear (vertical) slivers have no interior; their edges were checked above.
  return pos != neg;
}

CellEvaluation evaluate_cell(const WorldModel& world, const TraversabilityConfig& config,
                             Cell cell) {
  const GridSpec& s = config.spec;
  const double x0 = s.origin.x + cell.ix * s.cell_size;
  const double z0 = s.origin.z + cell.iy * s.cell_size;
  const double x1 = x0 + s.cell_size;
  const double z1 = z0 + s.cell_size;
  const double cx = x0 + 0.5 * s.cell_size;
  const double cz = z0 + 0.5 * s.cell_size;
  const double min_up = std::cos(config.slope_max);

  std::optional<double> ground;
  world.for_each_candidate({{x0, -kInf, z0}, {x1, kInf, z1}},
                           [&](const std::string&, std::size_t, const Triangle& tri) {
                             const Vec3 n = tri.normal();
                             if (std::abs(n.y) < min_up * norm(n)) return;
                             if (!projection_overlaps_rect(tri, x0, x1, z0, z1)) return;
                             const double h = ground_sample(tri, cx, cz);
                             if (!ground || h > *ground) ground = h;
                           });
  if (!ground) return {CellState::Unknown, std::nullopt};

  const double r = config.footprint.radius;
  const double y_lo = *ground + config.ground_skip;
  const double y_hi = *ground + config.footprint.clearance_height;
  bool blocked = false;
  world.for_each_candidate({{cx - r, y_lo, cz - r}, {cx + r, y_hi, cz + r}},
                           [&](const std::string&, std::size_t, const Triangle& tri) {
                             if (!blocked &&
                                 triangle_intersects_cylinder(tri, cx, cz, r, y_lo, y_hi)) {
                               blocked = true;
                             }
                           });
  return {blocked ? CellState::Blocked : CellState::Free, ground};
}

TraversabilityGrid rebuild(const WorldModel& discovered, const TraversabilityConfig& config) {
  TraversabilityGrid grid(config);
  for (int iy = 0; iy < grid.height(); ++iy) {
    for (int ix = 0; ix < grid.width(); ++ix) {
      const CellEvaluation e = evaluate_cell(discovered, config, {ix, iy});
      grid.set({ix, iy}, e.state, e.ground_height);
    }
  }
  for (const auto& [id, chunk] : discovered.chunks()) grid.chunk_bounds()[id] = bounds_of(chunk);
  return grid;
}

TraversabilityGrid rebuild(const WorldModel& discovered, const GridSpec& spec,
                           const RobotFootprint& footprint, double slope_max) {
  TraversabilityConfig config;
  config.spec = spec;
  config.footprint = footprint;
  config.slope_max = slope_max;
  return rebuild(discovered, config);
}

std::vector<Cell> update_cells(TraversabilityGrid& grid, const WorldModel& discovered,
                               const std::vector<std::string>& changed_chunk_ids,
                               const TraversabilityConfig& config) {
  if (!(grid.config() == config)) {
    throw Error(ErrorCode::StaleSpec, "grid was built against a different configuration");
  }
  const GridSpec& s = config.spec;
  const double reach = config.footprint.radius;

  std::set<std::size_t> dirty;
  const auto mark = [&](const Aabb& box) {
    if (box.empty()) return;
    const auto to_index = [&](double v, double origin) {
      return static_cast<long long>(std::floor((v - origin) / s.cell_size));
    };
    // One extra cell of margin absorbs rounding at cell boundaries.
    const long long ix0 = std::max(0LL, to_index(box.min.x - reach, s.origin.x) - 1);
    const long long ix1 = std::min<long long>(s.width - 1, to_index(box.max.x + reach, s.origin.x) + 1);
    const long long iy0 = std::max(0LL, to_index(box.min.z - reach, s.origin.z) - 1);
    const long long iy1 = std::min<long long>(s.height - 1, to_index(box.max.z + reach, s.origin.z) + 1);
    for (long long iy = iy0; iy <= iy1; ++iy) {
      for (long long ix = ix0; ix <= ix1; ++ix) {
        dirty.insert(grid.index({static_cast<int>(ix), static_cast<int>(iy)}));
      }
    }
  };

  for (const std::string& id : changed_chunk_ids) {
    auto& known = grid.chunk_bounds();
    if (const auto it = known.find(id); it != known.end()) mark(it->second);
    if (const MeshChunk* chunk = discovered.find(id)) {
      const Aabb box = bounds_of(*chunk);
      mark(box);
      known[id] = box;
    } else {
      known.erase(id);
    }
  }

  std::vector<Cell> changed;
  for (const std::size_t index : dirty) {
    const Cell c = grid.cell_at(index);
    const CellEvaluation e = evaluate_cell(discovered, config, c);
    if (e.state != grid.state(c) || e.ground_height != grid.ground_height(c)) {
      grid.set(c, e.state, e.ground_height);
      changed.push_back(c);
    }
  }
  return changed;
}

bool is_navigable(const TraversabilityGrid& grid, const Vec3& point) {
  const auto cell = grid.cell_of(point);
  return cell && grid.is_free(*cell);
}

}  // namespace rhino
