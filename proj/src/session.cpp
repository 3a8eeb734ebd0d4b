#include "rhino/session.hpp"

#include <algorithm>
#include <cmath>

#include "rhino/errors.hpp"
#include "rhino/scene_io.hpp"

namespace rhino {

namespace {

EventKind to_event(AgentEvent e) {
  switch (e) {
    case AgentEvent::Replanned: return EventKind::Replanned;
    case AgentEvent::Recovered: return EventKind::Recovered;
    case AgentEvent::Arrived: return EventKind::Arrived;
    case AgentEvent::PathBlocked: return EventKind::PathBlocked;
  }
  return EventKind::PathBlocked;
}

std::string audio_asset(Language language) {
  return language == Language::DE ? "rhino_history_de" : "rhino_history_en";
}

bool too_steep(const WorldModel& world, const RayHit& hit, double slope_max) {
  const Vec3 n = world.find(hit.chunk_id)->triangles[hit.triangle_index].normal();
  return std::abs(n.y) < std::cos(slope_max) * norm(n);
}

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::GoalAccepted: return "GoalAccepted";
    case EventKind::GoalRejected: return "GoalRejected";
    case EventKind::Replanned: return "Replanned";
    case EventKind::Recovered: return "Recovered";
    case EventKind::AudioStarted: return "AudioStarted";
    case EventKind::Reset: return "Reset";
    case EventKind::Arrived: return "Arrived";
    case EventKind::PathBlocked: return "PathBlocked";
  }
  return "Unknown";
}

bool segment_occluded(const WorldModel& world, const Vec3& from, const Vec3& to) {
  const Vec3 delta = to - from;
  const double length = norm(delta);
  // Open segment: the endpoint's own surface must not count as an occluder.
  const double end_guard = std::max(1e-7, 1e-9 * length);
  const double near_guard = 1e-9;
  if (length - end_guard <= near_guard) return false;
  return world.raycast(from, delta * (1.0 / length), length - end_guard, near_guard).has_value();
}

OcclusionMask occlusion_mask(const WorldModel& world, const SessionSnapshot& snapshot,
                             const Vec3& viewpoint) {
  if (!is_finite(viewpoint)) throw Error(ErrorCode::InvalidArgument, "viewpoint must be finite");
  OcclusionMask mask;
  if (const auto& path = snapshot.path()) {
    for (const Vec3& w : path->waypoints) mask.path_hidden.push_back(segment_occluded(world, viewpoint, w));
  }
  for (const Vec3& h : snapshot.lidar.hit_points) {
    mask.hits_hidden.push_back(segment_occluded(world, viewpoint, h));
  }
  return mask;
}

Session::Session(Scenario scenario) : Session(scenario, load_scene(scenario.scene_manifest)) {}

Session::Session(Scenario scenario, WorldModel truth)
    : scenario_(std::move(scenario)), truth_(std::move(truth)) {
  validate(scenario_);
  grid_ = rebuild(discovered_, scenario_.traversability);
  robot_ = reset(robot_, scenario_.home_pose);
  lidar_ = scan(discovered_, robot_.pose, scenario_.lidar, 0);
  assemble_snapshot();
}

void Session::enqueue(Command command) {
  std::lock_guard lock(queue_mutex_);
  queue_.push_back(std::move(command));
}

void Session::inject_chunk(MeshChunk chunk) { pending_injections_.push_back(std::move(chunk)); }

void Session::set_mode(VisualizationMode mode) {
  mode_ = mode;
  dim_level_ = mode == VisualizationMode::LidarMode ? scenario_.lidar_dim_level : 0.0;
}

ObserverPose Session::current_observer() const {
  if (manual_observer_) return *manual_observer_;
  return observer_at(scenario_, tick_);
}

TriggerResult Session::handle_trigger(const Ray& ray) {
  PointerState pointer{ray, std::nullopt, false, {}};
  const auto hit = discovered_.raycast(ray.origin, ray.direction, scenario_.pointer_range);
  if (!hit) {
    pointer.reason = "no_hit";
  } else if (pointer.hit = hit->point; too_steep(discovered_, *hit, scenario_.traversability.slope_max)) {
    // wall faces: the cell behind the hit may be a walkable top, but the click was on a wall
    pointer.reason = "not_navigable";
  } else {
    const GoalOutcome outcome = set_goal(robot_, grid_, hit->point);
    switch (outcome.status) {
      case GoalStatus::Accepted:
        robot_ = outcome.state;
        pointer.accepted = true;
        break;
      case GoalStatus::NotNavigable:
        pointer.reason = "not_navigable";
        break;
      case GoalStatus::NoPath:
        robot_ = outcome.state;
        pointer.reason = "no_path";
        break;
    }
  }
  pointer_ = pointer;
  if (pointer.accepted) {
    events_.push_back({EventKind::GoalAccepted, {}, 0.0});
    return TriggerResult::GoalAccepted;
  }
  events_.push_back({EventKind::GoalRejected, pointer.reason, 0.0});
  return TriggerResult::GoalRejected;
}

void Session::apply(const Command& cmd) {
  std::visit(
      [this](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, command::MenuToggle>) {
          menu_open_ = !menu_open_;
        } else if constexpr (std::is_same_v<T, command::Trigger>) {
          handle_trigger(c.ray);
        } else if constexpr (std::is_same_v<T, command::SetMode>) {
          set_mode(c.mode);
        } else if constexpr (std::is_same_v<T, command::SetLanguage>) {
          language_ = c.language;
        } else if constexpr (std::is_same_v<T, command::Reset>) {
          robot_ = reset(robot_, scenario_.home_pose);
          events_.push_back({EventKind::Reset, {}, 0.0});
        } else if constexpr (std::is_same_v<T, command::PlayAudio>) {
          events_.push_back({EventKind::AudioStarted, audio_asset(language_), scenario_.audio_duration});
        } else if constexpr (std::is_same_v<T, command::MoveObserver>) {
          manual_observer_ = c.pose;
        }
      },
      cmd);
}

const SessionSnapshot& Session::run_tick() {
  ++tick_;
  events_.clear();
  pointer_.reset();

  // 1. commands: scripted first, then live ones in arrival order.
  for (const ScriptedCommand& sc : scenario_.commands) {
    if (sc.tick == tick_) apply(sc.command);
  }
  std::deque<Command> live;
  {
    std::lock_guard lock(queue_mutex_);
    live.swap(queue_);
  }
  for (const Command& c : live) apply(c);

  // 2. discovery
  std::vector<std::string> changed;
  if (tick_ % scenario_.discovery_interval == 0) {
    changed = step_discovery(truth_, discovered_, current_observer(), scenario_.discovery, tick_);
  }
  if (!pending_injections_.empty()) {
    for (MeshChunk& chunk : pending_injections_) {
      chunk.revealed_at_tick = tick_;
      changed.push_back(chunk.chunk_id);
    }
    truth_.ingest_chunks(pending_injections_);
    discovered_.ingest_chunks(std::move(pending_injections_));
    pending_injections_.clear();
  }

  // 3. traversability
  if (!changed.empty()) update_cells(grid_, discovered_, changed, scenario_.traversability);

  // 4. agent
  const AgentTick step = rhino::tick(robot_, grid_, scenario_.agent, 1.0 / scenario_.tick_rate);
  robot_ = step.state;
  for (AgentEvent e : step.events) events_.push_back({to_event(e), {}, 0.0});

  // 5. lidar
  lidar_ = scan(discovered_, robot_.pose, scenario_.lidar, tick_);

  // 6. snapshot
  assemble_snapshot();
  return snapshot_;
}

void Session::assemble_snapshot() {
  SessionSnapshot s;
  s.tick = tick_;
  s.robot = robot_;
  s.lidar = lidar_;
  s.grid_spec = grid_.spec();
  s.grid_rle = grid_.encode_rle();
  s.discovered_chunk_ids = discovered_.chunk_ids();
  s.mode = mode_;
  s.dim_level = dim_level_;
  s.language = language_;
  s.menu_open = menu_open_;
  s.observer = current_observer();
  s.pointer = pointer_;
  s.events = events_;
  s.occlusion = occlusion_mask(discovered_, s, s.observer.position);
  snapshot_ = std::move(s);
}

}  // namespace rhino
