#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vbpbb {

// Failure categories shared by every module. The C API maps each one onto a
// vbpbb_status value of the same name.
enum class ErrorCode {
  InvalidArgument = 1,
  PeriodExceedsLength,
  SeriesTooShort,
  HarmonicAboveNyquist,
  NeedTwoFrequencies,
  NotOdd,
  SeriesShorterThanWindow,
  DegenerateEnsemble,
  MismatchedB,
  IncomparableBands,
  AllZeroWidths,
  NoOverlap,
  ZeroVariance,
  MissingColumn,
  NonMonotoneTimestamps,
  GapDetected,
  UnparseableValue,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the category prefix.
  const std::string& message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::string message_;
};

} // namespace vbpbb
