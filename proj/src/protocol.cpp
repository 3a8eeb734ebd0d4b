#include "rhino/protocol.hpp"

#include <numbers>

#include "rhino/errors.hpp"
#include "rhino/scene_io.hpp"

namespace rhino::protocol {

using nlohmann::json;

namespace {

std::string to_string(RobotMode mode) {
  switch (mode) {
    case RobotMode::Idle: return "Idle";
    case RobotMode::Navigating: return "Navigating";
    case RobotMode::Blocked: return "Blocked";
    case RobotMode::Recovered: return "Recovered";
  }
  return "Idle";
}

json cell_json(const Cell& c) { return json::array({c.ix, c.iy}); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json grid_spec_json(const GridSpec& spec) {
  return {{"origin", to_json(spec.origin)},
          {"cell_size", spec.cell_size},
          {"width", spec.width},
          {"height", spec.height}};
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ProtocolFormat, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
    throw Error(ErrorCode::ProtocolFormat, "expected [x, y, z]");
  }
  const Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (!is_finite(v)) throw Error(ErrorCode::ProtocolFormat, "vector components must be finite");
  return v;
}

json to_json(const PlannedPath& path) {
  json cells = json::array();
  for (const Cell& c : path.cells) cells.push_back(cell_json(c));
  json waypoints = json::array();
  for (const Vec3& w : path.waypoints) waypoints.push_back(to_json(w));
  return {{"cells", cells}, {"waypoints", waypoints}, {"cost", path.cost}};
}

json to_json(const RobotState& robot) {
  return {{"pose",
           {{"x", robot.pose.x},
            {"z", robot.pose.z},
            {"heading", robot.pose.heading},
            {"ground_y", robot.pose.ground_y}}},
          {"mode", to_string(robot.mode)},
          {"goal", robot.goal ? cell_json(*robot.goal) : json(nullptr)},
          {"path_progress",
           {{"index", robot.path_progress.index}, {"fraction", robot.path_progress.fraction}}}};
}

json to_json(const LidarFrame& frame) {
  json ranges = json::array();
  for (const auto& r : frame.ranges) ranges.push_back(optional_number(r));
  json hits = json::array();
  for (const Vec3& h : frame.hit_points) hits.push_back(to_json(h));
  return {{"origin", to_json(frame.origin)},
          {"ranges", ranges},
          {"hit_points", hits},
          {"highlighted_beam", frame.highlighted_beam}};
}

json to_json(const SessionSnapshot& s) {
  json rle = json::array();
  for (const auto& row : s.grid_rle) {
    json r = json::array();
    for (const auto& [state, count] : row) r.push_back(json::array({state, count}));
    rle.push_back(r);
  }
  json events = json::array();
  for (const SessionEvent& e : s.events) {
    json ev{{"kind", to_string(e.kind)}};
    if (!e.detail.empty()) ev["detail"] = e.detail;
    if (e.kind == EventKind::AudioStarted) ev["duration"] = e.duration;
    events.push_back(ev);
  }
  json pointer = nullptr;
  if (s.pointer) {
    pointer = {{"origin", to_json(s.pointer->ray.origin)},
               {"direction", to_json(s.pointer->ray.direction)},
               {"hit", s.pointer->hit ? to_json(*s.pointer->hit) : json(nullptr)},
               {"accepted", s.pointer->accepted}};
    if (!s.pointer->accepted) pointer["reason"] = s.pointer->reason;
  }
  return {{"type", "Snapshot"},
          {"tick", s.tick},
          {"robot", to_json(s.robot)},
          {"path", s.path() ? to_json(*s.path()) : json(nullptr)},
          {"lidar", to_json(s.lidar)},
          {"grid", {{"spec", grid_spec_json(s.grid_spec)}, {"rows", rle}}},
          {"discovered_chunk_ids", s.discovered_chunk_ids},
          {"mode", to_string(s.mode)},
          {"dim_level", s.dim_level},
          {"language", to_string(s.language)},
          {"menu_open", s.menu_open},
          {"observer",
           {{"position", to_json(s.observer.position)},
            {"yaw", s.observer.yaw},
            {"fov", s.observer.fov}}},
          {"pointer", pointer},
          {"events", events},
          {"occlusion",
           {{"path_hidden", s.occlusion.path_hidden}, {"hits_hidden", s.occlusion.hits_hidden}}}};
}

std::string canonical(const SessionSnapshot& snapshot) { return to_json(snapshot).dump(); }

json to_json(const Command& command) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, command::MenuToggle>) {
          return {{"kind", "MenuToggle"}};
        } else if constexpr (std::is_same_v<T, command::Trigger>) {
          return {{"kind", "Trigger"},
                  {"origin", to_json(c.ray.origin)},
                  {"direction", to_json(c.ray.direction)}};
        } else if constexpr (std::is_same_v<T, command::SetMode>) {
          return {{"kind", "SetMode"}, {"mode", rhino::to_string(c.mode)}};
        } else if constexpr (std::is_same_v<T, command::SetLanguage>) {
          return {{"kind", "SetLanguage"}, {"language", rhino::to_string(c.language)}};
        } else if constexpr (std::is_same_v<T, command::Reset>) {
          return {{"kind", "Reset"}};
        } else if constexpr (std::is_same_v<T, command::PlayAudio>) {
          return {{"kind", "PlayAudio"}};
        } else {
          return {{"kind", "MoveObserver"},
                  {"position", to_json(c.pose.position)},
                  {"yaw_deg", c.pose.yaw * 180.0 / std::numbers::pi},
                  {"fov_deg", c.pose.fov * 180.0 / std::numbers::pi}};
        }
      },
      command);
}

Command command_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ProtocolFormat, "command must be an object");
  const json& kind_field = require(j, "kind");
  if (!kind_field.is_string()) throw Error(ErrorCode::ProtocolFormat, "'kind' must be a string");
  const std::string kind = kind_field.get<std::string>();
  try {
    if (kind == "MenuToggle") return command::MenuToggle{};
    if (kind == "Reset") return command::Reset{};
    if (kind == "PlayAudio") return command::PlayAudio{};
    if (kind == "SetMode") return command::SetMode{parse_mode(require(j, "mode").get<std::string>())};
    if (kind == "SetLanguage") {
      return command::SetLanguage{parse_language(require(j, "language").get<std::string>())};
    }
    if (kind == "Trigger") {
      const Vec3 origin = vec3_from_json(require(j, "origin"));
      const Vec3 direction = vec3_from_json(require(j, "direction"));
      const double len = norm(direction);
      if (!(len > 1e-12)) throw Error(ErrorCode::ProtocolFormat, "pointer direction has zero length");
      return command::Trigger{{origin, direction * (1.0 / len)}};
    }
    if (kind == "MoveObserver") {
      ObserverPose pose;
      pose.position = vec3_from_json(require(j, "position"));
      pose.yaw = wrap_angle(j.value("yaw_deg", 0.0) * std::numbers::pi / 180.0);
      if (j.contains("fov_deg")) pose.fov = j.at("fov_deg").get<double>() * std::numbers::pi / 180.0;
      validate(pose);
      return command::MoveObserver{pose};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProtocolFormat, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ProtocolFormat) throw;
    throw Error(ErrorCode::ProtocolFormat, e.what());
  }
  throw Error(ErrorCode::ProtocolFormat, "unknown command kind '" + kind + "'");
}

std::string hello_message(const Session& session) {
  json chunks = json::array();
  for (const auto& [id, chunk] : session.truth().chunks()) {
    json vertices = json::array();
    for (const Triangle& t : chunk.triangles) {
      for (const Vec3& v : {t.a, t.b, t.c}) {
        vertices.push_back(v.x);
        vertices.push_back(v.y);
        vertices.push_back(v.z);
      }
    }
    chunks.push_back({{"chunk_id", id}, {"material", to_string(chunk.material)}, {"vertices", vertices}});
  }
  const Scenario& sc = session.scenario();
  const json hello{{"type", "Hello"},
                   {"protocol_version", kVersion},
                   {"tick_rate", sc.tick_rate},
                   {"grid", grid_spec_json(sc.traversability.spec)},
                   {"home_pose",
                    {{"x", sc.home_pose.x},
                     {"z", sc.home_pose.z},
                     {"heading", sc.home_pose.heading},
                     {"ground_y", sc.home_pose.ground_y}}},
                   {"chunks", chunks}};
  return hello.dump();
}

std::string snapshot_message(const SessionSnapshot& snapshot) { return canonical(snapshot); }

std::string error_message(std::string_view message) {
  return json{{"type", "Error"}, {"message", std::string(message)}}.dump();
}

std::string encode_frame(std::string_view body) {
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string frame;
  frame.reserve(body.size() + 4);
  frame.push_back(static_cast<char>((n >> 24) & 0xff));
  frame.push_back(static_cast<char>((n >> 16) & 0xff));
  frame.push_back(static_cast<char>((n >> 8) & 0xff));
  frame.push_back(static_cast<char>(n & 0xff));
  frame.append(body);
  return frame;
}

std::uint32_t decode_length(std::string_view header) {
  if (header.size() < 4) throw Error(ErrorCode::ProtocolFormat, "short frame header");
  const auto b = [&](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(header[i])); };
  return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rhino::protocol
