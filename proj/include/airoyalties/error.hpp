#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace airoyalties {

enum class ErrorCode {
  MissingFile,
  MalformedRecord,
  DuplicateWorkId,
  DimensionMismatch,
  ModelMismatch,
  UnknownWorkId,
  ZeroVector,
  MalformedRow,
  UnknownLabel,
  DuplicatePairId,
  MissingReportedMetric,
  LengthMismatch,
  OutOfRange,
  InsufficientClasses,
  EmptyTrainingSet,
  SingularSystem,
  InfluenceOutputMismatch,
  ZeroTotalRaw,
  ZeroDisplaced,
  HoldingsExceedDataset,
  ZeroFameTotal,
  UnknownScheme,
  MissingParam,
  InvalidParam,
  InvariantViolation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateWorkId: return "DuplicateWorkId";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::UnknownWorkId: return "UnknownWorkId";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicatePairId: return "DuplicatePairId";
    case ErrorCode::MissingReportedMetric: return "MissingReportedMetric";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InsufficientClasses: return "InsufficientClasses";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InfluenceOutputMismatch: return "InfluenceOutputMismatch";
    case ErrorCode::ZeroTotalRaw: return "ZeroTotalRaw";
    case ErrorCode::ZeroDisplaced: return "ZeroDisplaced";
    case ErrorCode::HoldingsExceedDataset: return "HoldingsExceedDataset";
    case ErrorCode::ZeroFameTotal: return "ZeroFameTotal";
    case ErrorCode::UnknownScheme: return "UnknownScheme";
    case ErrorCode::MissingParam: return "MissingParam";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` is the
/// machine-readable kind, `what()` carries the human detail (path, line, id).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace airoyalties
