#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "rhino/agent.hpp"
#include "rhino/discovery.hpp"
#include "rhino/lidar.hpp"
#include "rhino/traversability.hpp"

namespace rhino {

enum class VisualizationMode { Standard, LidarMode, TraversableOverlay };
enum class Language { DE, EN };

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

namespace command {
struct MenuToggle {};
struct Trigger {
  Ray ray;
};
struct SetMode {
  VisualizationMode mode = VisualizationMode::Standard;
};
struct SetLanguage {
  Language language = Language::DE;
};
struct Reset {};
struct PlayAudio {};
struct MoveObserver {
  ObserverPose pose;
};
}  // namespace command

using Command = std::variant<command::MenuToggle, command::Trigger, command::SetMode,
                             command::SetLanguage, command::Reset, command::PlayAudio,
                             command::MoveObserver>;

struct ScriptedCommand {
  std::int64_t tick = 0;
  Command command;
};

/// Observer position/yaw at a tick; poses between keyframes are interpolated linearly.
struct ObserverKeyframe {
  std::int64_t tick = 0;
  Vec3 position;
  double yaw = 0.0;
};

struct Scenario {
  std::filesystem::path scene_manifest;
  TraversabilityConfig traversability;
  DiscoveryParams discovery;
  std::int64_t discovery_interval = 1;  // ticks between meshing updates
  LidarParams lidar;
  AgentParams agent;
  Pose2D home_pose;
  double observer_fov = 2.0 * std::numbers::pi;
  std::vector<ObserverKeyframe> observer_trajectory;
  std::vector<ScriptedCommand> commands;
  double tick_rate = 30.0;
  std::uint64_t seed = 0;
  double pointer_range = 15.0;
  double lidar_dim_level = 0.8;
  double audio_duration = 45.0;  // seconds
};

void validate(const Scenario& scenario);

/// Reads a scenario file; relative paths resolve against its directory.
/// Throws Error(ScenarioFormat) on malformed or missing content.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir);

/// Observer pose at `tick` from the keyframes (clamped at both ends).
ObserverPose observer_at(const Scenario& scenario, std::int64_t tick);

std::string to_string(VisualizationMode mode);
std::string to_string(Language language);
VisualizationMode parse_mode(const std::string& text);
Language parse_language(const std::string& text);

}  // namespace rhino
