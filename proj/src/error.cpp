#include "calmapf/error.hpp"

namespace calmapf {

std::string_view to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::MalformedMap: return "MalformedMap";
    case ErrorCode::UnreachableCell: return "UnreachableCell";
    case ErrorCode::InvalidCacheCount: return "InvalidCacheCount";
    case ErrorCode::IndivisibleAgents: return "IndivisibleAgents";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::EmptyQueue: return "EmptyQueue";
    case ErrorCode::LockNotHeld: return "LockNotHeld";
    case ErrorCode::LockAlreadyHeld: return "LockAlreadyHeld";
    case ErrorCode::NoStep: return "NoStep";
    case ErrorCode::LivelockSuspected: return "LivelockSuspected";
    case ErrorCode::TimeoutExceeded: return "TimeoutExceeded";
    case ErrorCode::MalformedLog: return "MalformedLog";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code)
{
  switch (code) {
    case ErrorCode::LockNotHeld:
    case ErrorCode::LockAlreadyHeld:
    case ErrorCode::NoStep:
    case ErrorCode::InvariantViolated:
    case ErrorCode::LivelockSuspected:
    case ErrorCode::TimeoutExceeded:
    case ErrorCode::Io:
      return false;
    default:
      return true;
  }
}

}  // namespace calmapf
