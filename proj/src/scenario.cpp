#include "rhino/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rhino/errors.hpp"
#include "rhino/protocol.hpp"

namespace rhino {

namespace {

using nlohmann::json;

double deg(double degrees) { return degrees * std::numbers::pi / 180.0; }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

std::string to_string(VisualizationMode mode) {
  switch (mode) {
    case VisualizationMode::Standard: return "Standard";
    case VisualizationMode::LidarMode: return "LidarMode";
    case VisualizationMode::TraversableOverlay: return "TraversableOverlay";
  }
  return "Standard";
}

std::string to_string(Language language) { return language == Language::DE ? "DE" : "EN"; }

VisualizationMode parse_mode(const std::string& text) {
  if (text == "Standard") return VisualizationMode::Standard;
  if (text == "LidarMode") return VisualizationMode::LidarMode;
  if (text == "TraversableOverlay") return VisualizationMode::TraversableOverlay;
  throw Error(ErrorCode::ProtocolFormat, "unknown visualization mode '" + text + "'");
}

Language parse_language(const std::string& text) {
  if (text == "DE") return Language::DE;
  if (text == "EN") return Language::EN;
  throw Error(ErrorCode::ProtocolFormat, "unknown language '" + text + "'");
}

void validate(const Scenario& s) {
  validate(s.traversability);
  validate(s.discovery);
  validate(s.lidar);
  validate(s.agent);
  if (!(s.tick_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "tick_rate must be positive");
  if (s.discovery_interval < 1) {
    throw Error(ErrorCode::InvalidArgument, "discovery interval must be at least one tick");
  }
  if (!(s.pointer_range > 0.0)) throw Error(ErrorCode::InvalidArgument, "pointer_range must be positive");
  if (!(s.lidar_dim_level > 0.0) || s.lidar_dim_level > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "lidar_dim_level must lie in (0, 1]");
  }
  if (!s.home_pose.finite()) throw Error(ErrorCode::InvalidArgument, "home_pose must be finite");
  ObserverPose probe;
  probe.fov = s.observer_fov;
  validate(probe);
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  Scenario s;
  try {
    const json j = json::parse(text);
    s.scene_manifest = base_dir / j.at("scene").get<std::string>();
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    s.tick_rate = get_or(j, "tick_rate", s.tick_rate);
    s.pointer_range = get_or(j, "pointer_range", s.pointer_range);
    s.lidar_dim_level = get_or(j, "lidar_dim_level", s.lidar_dim_level);
    s.audio_duration = get_or(j, "audio_duration", s.audio_duration);

    const json& grid = j.at("grid");
    GridSpec& spec = s.traversability.spec;
    if (grid.contains("origin")) spec.origin = protocol::vec3_from_json(grid.at("origin"));
    spec.cell_size = get_or(grid, "cell_size", spec.cell_size);
    spec.width = grid.at("width").get<int>();
    spec.height = grid.at("height").get<int>();

    if (j.contains("traversability")) {
      const json& t = j.at("traversability");
      if (t.contains("slope_max_deg")) s.traversability.slope_max = deg(t.at("slope_max_deg").get<double>());
      s.traversability.footprint.radius = get_or(t, "footprint_radius", s.traversability.footprint.radius);
      s.traversability.footprint.clearance_height =
          get_or(t, "clearance_height", s.traversability.footprint.clearance_height);
      s.traversability.ground_skip = get_or(t, "ground_skip", s.traversability.ground_skip);
    }

    s.discovery.seed = s.seed;
    if (j.contains("discovery")) {
      const json& d = j.at("discovery");
      s.discovery.range = get_or(d, "range", s.discovery.range);
      s.discovery.p_detect_opaque = get_or(d, "p_detect_opaque", s.discovery.p_detect_opaque);
      s.discovery.p_detect_transparent =
          get_or(d, "p_detect_transparent", s.discovery.p_detect_transparent);
      s.discovery_interval = get_or<std::int64_t>(d, "interval_ticks", s.discovery_interval);
    }

    if (j.contains("lidar")) {
      const json& l = j.at("lidar");
      s.lidar.beam_count = get_or(l, "beam_count", s.lidar.beam_count);
      s.lidar.max_range = get_or(l, "max_range", s.lidar.max_range);
      s.lidar.scan_height = get_or(l, "scan_height", s.lidar.scan_height);
      s.lidar.rotation_period = get_or(l, "rotation_period", s.lidar.rotation_period);
    }

    if (j.contains("agent")) {
      const json& a = j.at("agent");
      s.agent.speed = get_or(a, "speed", s.agent.speed);
      if (a.contains("turn_rate_deg")) s.agent.turn_rate = deg(a.at("turn_rate_deg").get<double>());
      s.agent.goal_tolerance = get_or(a, "goal_tolerance", s.agent.goal_tolerance);
    }

    if (j.contains("home_pose")) {
      const json& h = j.at("home_pose");
      s.home_pose.x = get_or(h, "x", 0.0);
      s.home_pose.z = get_or(h, "z", 0.0);
      s.home_pose.heading = wrap_angle(deg(get_or(h, "heading_deg", 0.0)));
      s.home_pose.ground_y = get_or(h, "ground_y", 0.0);
    }

    if (j.contains("observer")) {
      const json& o = j.at("observer");
      if (o.contains("fov_deg")) s.observer_fov = deg(o.at("fov_deg").get<double>());
      for (const json& k : o.value("trajectory", json::array())) {
        s.observer_trajectory.push_back(
            {k.at("tick").get<std::int64_t>(), protocol::vec3_from_json(k.at("position")),
             deg(get_or(k, "yaw_deg", 0.0))});
      }
      std::stable_sort(s.observer_trajectory.begin(), s.observer_trajectory.end(),
                       [](const auto& a, const auto& b) { return a.tick < b.tick; });
    }

    for (const json& c : j.value("commands", json::array())) {
      s.commands.push_back({c.at("tick").get<std::int64_t>(), protocol::command_from_json(c)});
    }
    std::stable_sort(s.commands.begin(), s.commands.end(),
                     [](const auto& a, const auto& b) { return a.tick < b.tick; });
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ScenarioFormat, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ScenarioFormat, e.what());
  }

  try {
    validate(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::ScenarioFormat, e.what());
  }
  if (!std::filesystem::exists(s.scene_manifest)) {
    throw Error(ErrorCode::ScenarioFormat, "scene manifest not found: " + s.scene_manifest.string());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ScenarioFormat, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.parent_path());
}

ObserverPose observer_at(const Scenario& scenario, std::int64_t tick) {
  ObserverPose pose;
  pose.fov = scenario.observer_fov;
  const auto& keys = scenario.observer_trajectory;
  if (keys.empty()) {
    // Without a trajectory the visitor stands at the robot's home at eye height.
    pose.position = scenario.home_pose.position() + Vec3{0.0, 1.6, 0.0};
    pose.yaw = scenario.home_pose.heading;
    return pose;
  }
  if (tick <= keys.front().tick) {
    pose.position = keys.front().position;
    pose.yaw = keys.front().yaw;
    return pose;
  }
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (tick <= keys[i].tick) {
      const auto& a = keys[i - 1];
      const auto& b = keys[i];
      const double t = static_cast<double>(tick - a.tick) / static_cast<double>(b.tick - a.tick);
      pose.position = a.position + (b.position - a.position) * t;
      pose.yaw = wrap_angle(a.yaw + wrap_angle(b.yaw - a.yaw) * t);
      return pose;
    }
  }
  pose.position = keys.back().position;
  pose.yaw = keys.back().yaw;
  return pose;
}

}  // namespace rhino
