#pragma once

#include <stdexcept>
#include <string>

namespace flowres {

enum class ErrorCode {
  DanglingParent,
  LevelCycle,
  InvalidFeatureCode,
  UnknownRegion,
  UnknownCode,
  DuplicateFlow,
  NegativeValue,
  EmptySelection,
  ParseError,
  CycleDetected,
  MissingParent,
  SelfPair,
  MissingGeometry,
  InvalidRing,
  AllZero,
  NoFlows,
  DegenerateNetwork,
  BadParams,
  SinkWrite,
};

const char* error_code_name(ErrorCode code);

/// Domain error carrying a machine-checkable code plus a human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flowres
