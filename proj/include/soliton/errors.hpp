#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

enum class ErrorCode {
  Domain,
  Singularity,
  StepFailure,
  NoConvergence,
  NoClosure,
  Precondition,
  InconsistentParams,
  WrongFamily,
  DegenerateFrame,
  OutOfRange,
  EmptyFiber,
  Config,
  Io
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Singularity: return "singularity";
    case ErrorCode::StepFailure: return "step failure";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::NoClosure: return "no closure";
    case ErrorCode::Precondition: return "precondition violated";
    case ErrorCode::InconsistentParams: return "inconsistent parameters";
    case ErrorCode::WrongFamily: return "wrong family";
    case ErrorCode::DegenerateFrame: return "degenerate frame";
    case ErrorCode::OutOfRange: return "out of range";
    case ErrorCode::EmptyFiber: return "empty fiber";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Io: return "i/o error";
  }
  return "error";
}

}  // namespace soliton
