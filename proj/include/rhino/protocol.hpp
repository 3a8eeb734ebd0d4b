#pragma once

// Wire protocol: every message is a 4-byte big-endian length followed by that
// many bytes of UTF-8 JSON. Each body is an object with a "type" field:
//
//   Hello     server -> client on connect: protocol version, tick rate, grid spec
//             and the full scene geometry (clients draw the discovered subset).
//   Snapshot  server -> client once per tick, always a full state (never a delta).
//   Command   client -> server: {"type":"Command","kind":...} plus kind fields.
//   Error     server -> client: {"type":"Error","message":...}; the session is unaffected.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rhino/session.hpp"

namespace rhino::protocol {

inline constexpr int kVersion = 1;
inline constexpr std::size_t kMaxMessageBytes = 16u << 20;

nlohmann::json to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PlannedPath& path);
nlohmann::json to_json(const RobotState& robot);
nlohmann::json to_json(const LidarFrame& frame);
nlohmann::json to_json(const SessionSnapshot& snapshot);

/// Compact JSON with sorted keys; byte-identical for identical snapshots.
std::string canonical(const SessionSnapshot& snapshot);

nlohmann::json to_json(const Command& command);
/// Parses {"kind": ..., ...}. Throws Error(ProtocolFormat) on unknown kinds,
/// missing fields or a zero-length pointer direction (other directions are normalised).
Command command_from_json(const nlohmann::json& j);

std::string hello_message(const Session& session);
std::string snapshot_message(const SessionSnapshot& snapshot);
std::string error_message(std::string_view message);

/// Length prefix + body.
std::string encode_frame(std::string_view body);
/// Big-endian length from the first four bytes of `header`.
std::uint32_t decode_length(std::string_view header);

/// 64-bit FNV-1a, used to fingerprint snapshot logs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace rhino::protocol
