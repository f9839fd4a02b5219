#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vbpbb/timeseries.hpp"

namespace vbpbb {

struct CsvOptions {
  std::string timestamp_column = "timestamp";
  std::string value_column = "value";
  double step_hours = 1.0;
  // Values written as 1.234,56 instead of 1,234.56.
  bool decimal_comma = false;
  char delimiter = ',';
};

// ISO-8601 date-time: YYYY-MM-DD, optionally followed by T or a space and
// HH:MM[:SS[.fff]], optionally followed by Z or +HH:MM / -HH:MM. The result is
// UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

// Locale-tolerant number: thousands separators are stripped, the decimal mark
// is selected by `decimal_comma`.
std::optional<double> parse_number(std::string_view text, bool decimal_comma);

// Reads one timestamp column and one numeric column. Timestamps must advance by
// exactly step_hours; every gap is reported and nothing is imputed. Row numbers
// in errors count data rows from 1.
TimeSeries ingest_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Writes "timestamp,<value_header>" rows.
void write_series_csv(const TimeSeries& series, const std::filesystem::path& path,
                      std::string_view value_header = "value");

// 12 significant digits, locale independent.
std::string format_number(double value);

} // namespace vbpbb
