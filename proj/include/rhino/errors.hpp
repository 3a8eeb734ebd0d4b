#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rhino {

enum class ErrorCode {
  EmptyChunk,
  InvalidDirection,
  InvalidArgument,
  StaleSpec,
  StartNotNavigable,
  GoalNotNavigable,
  NoPath,
  SceneFormat,
  ScenarioFormat,
  ProtocolFormat,
  BindFailure,
  OutOfRange,
  DegenerateSample,
  EmptyInput,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as an Error carrying its code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rhino
