#include "gzavg/error.hpp"

namespace gzavg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFundamental: return "NotFundamental";
    case ErrorCode::NotOdd: return "NotOdd";
    case ErrorCode::NotNegative: return "NotNegative";
    case ErrorCode::TableSizeMismatch: return "TableSizeMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PrecisionNotReached: return "PrecisionNotReached";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::BranchError: return "BranchError";
    case ErrorCode::TailDiverges: return "TailDiverges";
    case ErrorCode::RamifiedPrime: return "RamifiedPrime";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::MissingThetaParams: return "MissingThetaParams";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::LLogBoundFails: return "LLogBoundFails";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace gzavg
