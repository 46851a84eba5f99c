#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gzavg {

enum class ErrorCode {
  NotFundamental,
  NotOdd,
  NotNegative,
  TableSizeMismatch,
  DomainError,
  PrecisionNotReached,
  RangeError,
  BranchError,
  TailDiverges,
  RamifiedPrime,
  CaseMismatch,
  MissingThetaParams,
  SingularGram,
  LLogBoundFails,
  InvalidArgument,
  ConfigError,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every domain failure in the library is reported through this type; the
// code lets callers (and the CLI's exit-status mapping) dispatch on kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gzavg
