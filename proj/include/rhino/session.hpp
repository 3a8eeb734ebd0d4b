#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rhino/scenario.hpp"

namespace rhino {

enum class EventKind {
  GoalAccepted,
  GoalRejected,
  Replanned,
  Recovered,
  AudioStarted,
  Reset,
  Arrived,
  PathBlocked,
};

std::string to_string(EventKind kind);

struct SessionEvent {
  EventKind kind = EventKind::GoalAccepted;
  std::string detail;    // rejection reason or audio asset id
  double duration = 0.0;  // AudioStarted only

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

enum class TriggerResult { GoalAccepted, GoalRejected };

struct PointerState {
  Ray ray;
  std::optional<Vec3> hit;
  bool accepted = false;
  std::string reason;  // "no_hit", "not_navigable", "no_path" on rejection
};

struct OcclusionMask {
  std::vector<bool> path_hidden;  // per path waypoint
  std::vector<bool> hits_hidden;  // per LiDAR hit point
};

struct SessionSnapshot {
  std::int64_t tick = 0;
  RobotState robot;
  LidarFrame lidar;
  GridSpec grid_spec;
  std::vector<std::vector<std::pair<int, int>>> grid_rle;
  std::vector<std::string> discovered_chunk_ids;
  VisualizationMode mode = VisualizationMode::Standard;
  double dim_level = 0.0;
  Language language = Language::DE;
  bool menu_open = false;
  ObserverPose observer;
  std::optional<PointerState> pointer;
  std::vector<SessionEvent> events;
  OcclusionMask occlusion;

  const std::optional<PlannedPath>& path() const { return robot.current_path; }
};

/// True when a discovered triangle crosses the open segment (from, to).
bool segment_occluded(const WorldModel& world, const Vec3& from, const Vec3& to);

/// Hidden flags for the snapshot's path waypoints and LiDAR hit points as seen from `viewpoint`.
OcclusionMask occlusion_mask(const WorldModel& world, const SessionSnapshot& snapshot,
                             const Vec3& viewpoint);

/// Owns the simulation state. run_tick and the accessors belong to the tick
/// thread; enqueue may be called from any thread.
class Session {
 public:
  explicit Session(Scenario scenario);
  Session(Scenario scenario, WorldModel truth);

  /// Fixed order: queued commands, discovery, traversability update, agent,
  /// LiDAR, snapshot assembly.
  const SessionSnapshot& run_tick();

  void enqueue(Command command);

  /// Pointer ray against discovered geometry; accepted goals go to the agent.
  TriggerResult handle_trigger(const Ray& ray);

  /// Adds a chunk to both truth and discovered worlds at the next discovery step.
  void inject_chunk(MeshChunk chunk);

  const Scenario& scenario() const { return scenario_; }
  const WorldModel& truth() const { return truth_; }
  const WorldModel& discovered() const { return discovered_; }
  const TraversabilityGrid& grid() const { return grid_; }
  const RobotState& robot() const { return robot_; }
  const SessionSnapshot& snapshot() const { return snapshot_; }
  std::int64_t tick() const { return tick_; }

 private:
  void apply(const Command& command);
  void set_mode(VisualizationMode mode);
  ObserverPose current_observer() const;
  void assemble_snapshot();

  Scenario scenario_;
  WorldModel truth_;
  WorldModel discovered_;
  TraversabilityGrid grid_;
  RobotState robot_;
  std::int64_t tick_ = 0;
  VisualizationMode mode_ = VisualizationMode::Standard;
  double dim_level_ = 0.0;
  Language language_ = Language::DE;
  bool menu_open_ = false;
  std::optional<ObserverPose> manual_observer_;
  std::optional<PointerState> pointer_;
  std::vector<SessionEvent> events_;
  std::vector<MeshChunk> pending_injections_;
  LidarFrame lidar_;
  SessionSnapshot snapshot_;

  std::mutex queue_mutex_;
  std::deque<Command> queue_;
};

}  // namespace rhino
