#include "rhino/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>

#include "rhino/errors.hpp"

namespace rhino {

namespace {

constexpr std::array<std::pair<int, int>, 8> kSteps{{
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

struct OpenEntry {
  OctileCost f;
  OctileCost h;
  std::size_t index;

  // priority_queue is a max-heap; invert to pop the smallest (f, h, index).
  bool operator<(const OpenEntry& o) const {
    return std::tie(o.f, o.h, o.index) < std::tie(f, h, index);
  }
};

}  // namespace

std::strong_ordering operator<=>(const OctileCost& a, const OctileCost& b) {
  // sign of ds + dd*sqrt(2)
  const std::int64_t ds = a.straight - b.straight;
  const std::int64_t dd = a.diagonal - b.diagonal;
  if (ds == 0 && dd == 0) return std::strong_ordering::equal;
  if (ds >= 0 && dd >= 0) return std::strong_ordering::greater;
  if (ds <= 0 && dd <= 0) return std::strong_ordering::less;
  // Opposite signs: compare ds^2 against 2*dd^2.
  const std::int64_t lhs = ds * ds;
  const std::int64_t rhs = 2 * dd * dd;
  if (ds > 0) return lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::less;
  return lhs > rhs ? std::strong_ordering::less : std::strong_ordering::greater;
}

double OctileCost::meters(double cell_size) const {
  return cell_size * (static_cast<double>(straight) +
                      static_cast<double>(diagonal) * std::numbers::sqrt2);
}

OctileCost octile_heuristic(Cell from, Cell to) {
  const std::int64_t dx = std::abs(from.ix - to.ix);
  const std::int64_t dy = std::abs(from.iy - to.iy);
  const std::int64_t diag = std::min(dx, dy);
  return {std::max(dx, dy) - diag, diag};
}

bool step_allowed(const TraversabilityGrid& grid, Cell from, Cell to) {
  if (!grid.is_free(to)) return false;
  const int dx = to.ix - from.ix;
  const int dy = to.iy - from.iy;
  if (std::abs(dx) > 1 || std::abs(dy) > 1 || (dx == 0 && dy == 0)) return false;
  if (dx != 0 && dy != 0) {
    if (grid.state({from.ix + dx, from.iy}) == CellState::Blocked ||
        grid.state({from.ix, from.iy + dy}) == CellState::Blocked) {
      return false;
    }
  }
  return true;
}

PlannedPath plan(const TraversabilityGrid& grid, Cell start, Cell goal,
                 const ExpansionObserver& observer) {
  if (!grid.is_free(start)) throw Error(ErrorCode::StartNotNavigable, "start cell is not Free");
  if (!grid.is_free(goal)) throw Error(ErrorCode::GoalNotNavigable, "goal cell is not Free");

  const std::size_t n = grid.cells().size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::optional<OctileCost>> best(n);
  std::vector<std::size_t> parent(n, kNone);
  std::vector<bool> closed(n, false);

  const std::size_t start_index = grid.index(start);
  const std::size_t goal_index = grid.index(goal);
  std::priority_queue<OpenEntry> open;
  best[start_index] = OctileCost{};
  const OctileCost h0 = octile_heuristic(start, goal);
  open.push({h0, h0, start_index});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index]) continue;
    closed[top.index] = true;
    if (top.index == goal_index) break;

    const Cell cur = grid.cell_at(top.index);
    const OctileCost g = *best[top.index];
    for (const auto& [dx, dy] : kSteps) {
      const Cell next{cur.ix + dx, cur.iy + dy};
      if (!grid.in_bounds(next) || !step_allowed(grid, cur, next)) continue;
      if (observer) observer(cur, next);
      const std::size_t ni = grid.index(next);
      if (closed[ni]) continue;
      const OctileCost step = (dx != 0 && dy != 0) ? OctileCost{0, 1} : OctileCost{1, 0};
      const OctileCost tentative = g + step;
      if (best[ni] && !(tentative < *best[ni])) continue;
      best[ni] = tentative;
      parent[ni] = top.index;
      const OctileCost h = octile_heuristic(next, goal);
      open.push({tentative + h, h, ni});
    }
  }

  if (!closed[goal_index]) throw Error(ErrorCode::NoPath, "goal unreachable from start");

  PlannedPath path;
  for (std::size_t i = goal_index; i != kNone; i = parent[i]) path.cells.push_back(grid.cell_at(i));
  std::reverse(path.cells.begin(), path.cells.end());
  path.waypoints.reserve(path.cells.size());
  for (const Cell& c : path.cells) path.waypoints.push_back(grid.cell_center(c));
  path.steps = *best[goal_index];
  path.cost = path.steps.meters(grid.spec().cell_size);
  return path;
}

std::optional<std::size_t> validate(const PlannedPath& path, const TraversabilityGrid& grid,
                                    std::size_t from_index) {
  for (std::size_t i = from_index; i < path.cells.size(); ++i) {
    if (!grid.is_free(path.cells[i])) return i;
    if (i > from_index && !step_allowed(grid, path.cells[i - 1], path.cells[i])) return i;
  }
  return std::nullopt;
}

}  // namespace rhino
