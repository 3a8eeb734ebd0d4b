#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "rhino/planner.hpp"
#include "rhino/pose.hpp"

namespace rhino {

enum class RobotMode { Idle, Navigating, Blocked, Recovered };

struct AgentParams {
  double speed = 0.6;                            // m/s
  double turn_rate = std::numbers::pi;           // rad/s
  double goal_tolerance = 0.15;                  // m
};

void validate(const AgentParams& params);

/// Robot drives only while its heading error to the next waypoint is below this.
inline constexpr double kDriveGate = std::numbers::pi / 6.0;

struct PathProgress {
  std::size_t index = 0;  // last waypoint reached
  double fraction = 0.0;  // along the segment to waypoint index + 1

  friend bool operator==(const PathProgress&, const PathProgress&) = default;
};

struct RobotState {
  Pose2D pose;
  RobotMode mode = RobotMode::Idle;
  std::optional<PlannedPath> current_path;
  std::optional<Cell> goal;
  PathProgress path_progress;
};

enum class GoalStatus { Accepted, NotNavigable, NoPath };

struct GoalOutcome {
  RobotState state;
  GoalStatus status = GoalStatus::Accepted;
};

/// Plans from the robot's current cell to the cell under `goal_point`.
/// NotNavigable leaves the state unchanged; NoPath (including a robot that is
/// not standing on a Free cell) switches to Blocked with the goal cleared.
GoalOutcome set_goal(const RobotState& state, const TraversabilityGrid& grid,
                     const Vec3& goal_point);

enum class AgentEvent { Replanned, Recovered, Arrived, PathBlocked };

struct AgentTick {
  RobotState state;
  std::vector<AgentEvent> events;
};

/// Nearest Free cell by 4-neighbor BFS (neighbor order N=+iy, E=+ix, S=-iy, W=-ix)
/// over all in-bounds cells, or none when the grid has no Free cell.
std::optional<Cell> nearest_free_cell(const TraversabilityGrid& grid, Cell from);

/// One kinematic step: recovery, path validation and replanning, rotate-then-drive
/// motion, arrival. Throws InvalidArgument when dt is not positive.
AgentTick tick(const RobotState& state, const TraversabilityGrid& grid, const AgentParams& params,
               double dt);

RobotState reset(const RobotState& state, const Pose2D& home_pose);

}  // namespace rhino
