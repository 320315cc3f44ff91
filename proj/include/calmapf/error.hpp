/*
 * error type shared by all modules
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace calmapf {

enum class ErrorCode {
  MalformedMap,
  UnreachableCell,
  InvalidCacheCount,
  IndivisibleAgents,
  InvalidConfig,
  InvalidParams,
  MalformedCsv,
  EmptyTable,
  EmptyQueue,
  LockNotHeld,
  LockAlreadyHeld,
  NoStep,
  LivelockSuspected,
  TimeoutExceeded,
  MalformedLog,
  InvariantViolated,
  Io,
};

std::string_view to_string(ErrorCode code);

// True for errors caused by bad input / configuration (detected before a run
// starts), false for failures raised while a run is in progress.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace calmapf
