#include "vbpbb/error.hpp"

namespace vbpbb {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PeriodExceedsLength: return "PeriodExceedsLength";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::HarmonicAboveNyquist: return "HarmonicAboveNyquist";
    case ErrorCode::NeedTwoFrequencies: return "NeedTwoFrequencies";
    case ErrorCode::NotOdd: return "NotOdd";
    case ErrorCode::SeriesShorterThanWindow: return "SeriesShorterThanWindow";
    case ErrorCode::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorCode::MismatchedB: return "MismatchedB";
    case ErrorCode::IncomparableBands: return "IncomparableBands";
    case ErrorCode::AllZeroWidths: return "AllZeroWidths";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorCode::GapDetected: return "GapDetected";
    case ErrorCode::UnparseableValue: return "UnparseableValue";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

} // namespace vbpbb
