#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rhino/traversability.hpp"

namespace rhino {

/// Path length as a count of straight and diagonal steps. Ordering is exact:
/// s1 + d1*sqrt(2) is compared against s2 + d2*sqrt(2) in integer arithmetic.
struct OctileCost {
  std::int64_t straight = 0;
  std::int64_t diagonal = 0;

  OctileCost operator+(const OctileCost& o) const {
    return {straight + o.straight, diagonal + o.diagonal};
  }
  double meters(double cell_size) const;

  friend bool operator==(const OctileCost&, const OctileCost&) = default;
  friend std::strong_ordering operator<=>(const OctileCost& a, const OctileCost& b);
};

/// Octile distance between two cells.
OctileCost octile_heuristic(Cell from, Cell to);

struct PlannedPath {
  std::vector<Cell> cells;
  std::vector<Vec3> waypoints;  // cell centers at ground height
  OctileCost steps;
  double cost = 0.0;  // meters
};

/// Optional hook observing every (expanded node, successor) pair.
using ExpansionObserver = std::function<void(Cell expanded, Cell successor)>;

/// Minimum-cost 8-connected A* path. Diagonal moves are refused when either
/// orthogonal neighbor of the corner is Blocked. Open-list ties resolve by
/// (f, h, iy*width+ix). Throws StartNotNavigable, GoalNotNavigable or NoPath.
PlannedPath plan(const TraversabilityGrid& grid, Cell start, Cell goal,
                 const ExpansionObserver& observer = {});

/// True when a step between two 8-adjacent cells is allowed on `grid`
/// (destination Free, no corner cutting past a Blocked cell).
bool step_allowed(const TraversabilityGrid& grid, Cell from, Cell to);

/// Index of the first cell at or after `from_index` that is no longer Free or
/// that is entered by a now-forbidden diagonal step.
std::optional<std::size_t> validate(const PlannedPath& path, const TraversabilityGrid& grid,
                                    std::size_t from_index = 0);

}  // namespace rhino
