#pragma once

#include <stdexcept>
#include <string>

namespace relsim {

enum class ErrorCode {
  InvalidArgument = 1,
  InvalidDimension,
  TooLarge,
  SelfLoopRejected,
  ParseError,
  UnknownVertex,
  InvalidStrength,
  ShapeError,
  SolverError,
  Unreachable,
  TooLargeForEnumeration,
  ApparatusNotInitialized,
  InvalidSubset,
  LocalityViolation,
  InvalidGeometry,
  Io,
};

/// Exception carrying a stable error code; the C boundary maps codes 1:1.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace relsim
