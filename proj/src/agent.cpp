#include "rhino/agent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "rhino/errors.hpp"

namespace rhino {

namespace {

double horizontal_distance(const Pose2D& pose, const Vec3& p) {
  return std::hypot(p.x - pose.x, p.z - pose.z);
}

void clear_navigation(RobotState& s) {
  s.current_path.reset();
  s.goal.reset();
  s.path_progress = {};
}

// Plans from the robot's current cell to its goal. On failure the robot parks in
// Blocked with the goal dropped.
void replan(RobotState& s, const TraversabilityGrid& grid, std::vector<AgentEvent>& events) {
  const auto start = grid.cell_of(s.pose.position());
  try {
    if (!start || !s.goal) throw Error(ErrorCode::NoPath, "robot is off the grid");
    s.current_path = plan(grid, *start, *s.goal);
    s.path_progress = {};
    s.mode = RobotMode::Navigating;
    events.push_back(AgentEvent::Replanned);
  } catch (const Error&) {
    clear_navigation(s);
    s.mode = RobotMode::Blocked;
    events.push_back(AgentEvent::PathBlocked);
  }
}

void snap_ground(RobotState& s, const TraversabilityGrid& grid) {
  if (const auto cell = grid.cell_of(s.pose.position())) {
    if (const auto h = grid.ground_height(*cell)) s.pose.ground_y = *h;
  }
}

void drive(RobotState& s, const AgentParams& params, double dt) {
  const PlannedPath& path = *s.current_path;
  double turn_budget = params.turn_rate * dt;
  double drive_budget = params.speed * dt;
  auto& progress = s.path_progress;

  while (progress.index + 1 < path.waypoints.size() && drive_budget > 0.0) {
    const Vec3& target = path.waypoints[progress.index + 1];
    const double dist = horizontal_distance(s.pose, target);
    if (dist <= 1e-12) {
      ++progress.index;
      progress.fraction = 0.0;
      continue;
    }
    const double desired = std::atan2(target.z - s.pose.z, target.x - s.pose.x);
    double error = wrap_angle(desired - s.pose.heading);
    const double turn = std::clamp(error, -turn_budget, turn_budget);
    s.pose.heading = wrap_angle(s.pose.heading + turn);
    turn_budget -= std::abs(turn);
    error = wrap_angle(desired - s.pose.heading);
    if (std::abs(error) >= kDriveGate) break;

    const double step = std::min(drive_budget, dist);
    drive_budget -= step;
    if (step >= dist) {
      s.pose.x = target.x;
      s.pose.z = target.z;
      ++progress.index;
      progress.fraction = 0.0;
      continue;
    }
    s.pose.x += (target.x - s.pose.x) * (step / dist);
    s.pose.z += (target.z - s.pose.z) * (step / dist);
    const Vec3& from = path.waypoints[progress.index];
    const double seg = std::hypot(target.x - from.x, target.z - from.z);
    progress.fraction = seg > 0.0 ? std::clamp(1.0 - (dist - step) / seg, 0.0, 1.0) : 1.0;
  }
}

}  // namespace

void validate(const AgentParams& params) {
  if (!(params.speed > 0.0) || !(params.turn_rate > 0.0) || !(params.goal_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "agent speed, turn_rate and goal_tolerance must be positive");
  }
}

GoalOutcome set_goal(const RobotState& state, const TraversabilityGrid& grid,
                     const Vec3& goal_point) {
  const auto goal = grid.cell_of(goal_point);
  if (!goal || !grid.is_free(*goal)) return {state, GoalStatus::NotNavigable};

  GoalOutcome out{state, GoalStatus::Accepted};
  RobotState& s = out.state;
  s.goal = *goal;
  std::vector<AgentEvent> events;
  replan(s, grid, events);
  if (s.mode == RobotMode::Blocked) out.status = GoalStatus::NoPath;
  return out;
}

std::optional<Cell> nearest_free_cell(const TraversabilityGrid& grid, Cell from) {
  if (!grid.in_bounds(from)) return std::nullopt;
  constexpr std::array<std::pair<int, int>, 4> kNesw{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};
  std::vector<bool> seen(grid.cells().size(), false);
  std::deque<Cell> queue{from};
  seen[grid.index(from)] = true;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (grid.is_free(c)) return c;
    for (const auto& [dx, dy] : kNesw) {
      const Cell n{c.ix + dx, c.iy + dy};
      if (!grid.in_bounds(n) || seen[grid.index(n)]) continue;
      seen[grid.index(n)] = true;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

AgentTick tick(const RobotState& state, const TraversabilityGrid& grid, const AgentParams& params,
               double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  AgentTick out{state, {}};
  RobotState& s = out.state;

  // Recovery: newly revealed geometry on top of the robot.
  const auto cell = grid.cell_of(s.pose.position());
  if (cell && grid.state(*cell) == CellState::Blocked) {
    const auto target = nearest_free_cell(grid, *cell);
    if (!target) {
      clear_navigation(s);
      s.mode = RobotMode::Blocked;
      out.events.push_back(AgentEvent::PathBlocked);
      return out;
    }
    const Vec3 center = grid.cell_center(*target);
    s.pose.x = center.x;
    s.pose.z = center.z;
    s.pose.ground_y = center.y;
    s.mode = RobotMode::Recovered;
    s.current_path.reset();
    s.path_progress = {};
    out.events.push_back(AgentEvent::Recovered);
    return out;
  }

  // A surface revealed under the robot lifts it onto that surface.
  snap_ground(s, grid);

  if (s.mode == RobotMode::Recovered) {
    // The goal survives the teleport; resume by replanning from the new cell.
    if (s.goal) {
      replan(s, grid, out.events);
    } else {
      s.mode = RobotMode::Idle;
    }
  }

  if (s.mode == RobotMode::Navigating && s.current_path) {
    if (validate(*s.current_path, grid, s.path_progress.index)) replan(s, grid, out.events);
  }

  if (s.mode == RobotMode::Navigating && s.current_path) {
    drive(s, params, dt);
    snap_ground(s, grid);
    const Vec3& last = s.current_path->waypoints.back();
    if (horizontal_distance(s.pose, last) <= params.goal_tolerance) {
      clear_navigation(s);
      s.mode = RobotMode::Idle;
      out.events.push_back(AgentEvent::Arrived);
    }
  }
  return out;
}

RobotState reset(const RobotState& /*state*/, const Pose2D& home_pose) {
  RobotState s;
  s.pose = home_pose;
  s.pose.heading = wrap_angle(home_pose.heading);
  return s;
}

}  // namespace rhino
