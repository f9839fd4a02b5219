#include "vbpbb/ingest.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "vbpbb/error.hpp"

namespace vbpbb {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return true;
}

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line, char delimiter) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == name) return i;
  throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found in header");
}

} // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const auto s = trim(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_int(s, 5, 2, mo) ||
      s[7] != '-' || !read_int(s, 8, 2, d))
    return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 10;
  long long offset_seconds = 0;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    if (!read_int(s, pos + 1, 2, h) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !read_int(s, pos + 4, 2, mi))
      return std::nullopt;
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      if (!read_int(s, pos + 1, 2, sec)) return std::nullopt;
      pos += 3;
      if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      }
    }
    if (pos < s.size()) {
      if (s[pos] == 'Z' && pos + 1 == s.size()) {
        pos = s.size();
      } else if (s[pos] == '+' || s[pos] == '-') {
        int oh = 0, om = 0;
        if (!read_int(s, pos + 1, 2, oh)) return std::nullopt;
        std::size_t next = pos + 3;
        if (next < s.size() && s[next] == ':') ++next;
        if (next < s.size() && !read_int(s, next, 2, om)) return std::nullopt;
        if (next < s.size()) next += 2;
        if (next != s.size()) return std::nullopt;
        offset_seconds = (s[pos] == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
        pos = s.size();
      } else {
        return std::nullopt;
      }
    }
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
  }
  const sys_seconds local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
  return local - seconds{offset_seconds};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<double> parse_number(std::string_view text, bool decimal_comma) {
  const auto s = trim(text);
  std::string cleaned;
  cleaned.reserve(s.size());
  const char thousands = decimal_comma ? '.' : ',';
  for (char c : s) {
    if (c == thousands || c == ' ' || c == '\'' || c == '_') continue;
    cleaned += (decimal_comma && c == ',') ? '.' : c;
  }
  if (cleaned.empty()) return std::nullopt;
  const char* first = cleaned.data();
  if (*first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, cleaned.data() + cleaned.size(), value);
  if (ec != std::errc{} || ptr != cleaned.data() + cleaned.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

TimeSeries ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  if (!(options.step_hours > 0.0)) throw Error(ErrorCode::InvalidArgument, "step_hours must be positive");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, "empty file " + path.string());
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_record(line, options.delimiter);
  const std::size_t ts_col = find_column(header, options.timestamp_column);
  const std::size_t value_col = find_column(header, options.value_column);
  const std::size_t needed = std::max(ts_col, value_col) + 1;

  const auto step = std::chrono::seconds(std::llround(options.step_hours * 3600.0));
  std::vector<double> values;
  std::optional<Timestamp> start, previous;
  std::vector<std::string> gaps;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_record(line, options.delimiter);
    const std::string where = "row " + std::to_string(row);
    if (fields.size() < needed)
      throw Error(ErrorCode::UnparseableValue, where + ": expected at least " +
                                                   std::to_string(needed) + " fields");
    const auto ts = parse_timestamp(fields[ts_col]);
    if (!ts) throw Error(ErrorCode::UnparseableValue, where + ": bad timestamp '" + fields[ts_col] + "'");
    const auto value = parse_number(fields[value_col], options.decimal_comma);
    if (!value) throw Error(ErrorCode::UnparseableValue, where + ": bad value '" + fields[value_col] + "'");

    if (previous) {
      if (*ts <= *previous)
        throw Error(ErrorCode::NonMonotoneTimestamps,
                    where + ": timestamp " + format_timestamp(*ts) + " does not follow " +
                        format_timestamp(*previous));
      if (*ts - *previous != step)
        gaps.push_back(where + " (" + format_timestamp(*previous) + " -> " + format_timestamp(*ts) + ")");
    } else {
      start = ts;
    }
    previous = ts;
    values.push_back(*value);
  }
  if (!gaps.empty()) {
    std::string msg = std::to_string(gaps.size()) + " step violation(s): ";
    for (std::size_t i = 0; i < gaps.size() && i < 20; ++i) msg += (i ? "; " : "") + gaps[i];
    if (gaps.size() > 20) msg += "; ...";
    throw Error(ErrorCode::GapDetected, msg);
  }
  if (values.empty()) throw Error(ErrorCode::UnparseableValue, "no data rows in " + path.string());
  return TimeSeries(std::move(values), *start, options.step_hours, options.value_column);
}

std::string format_number(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

void write_series_csv(const TimeSeries& series, const std::filesystem::path& path,
                      std::string_view value_header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "timestamp," << value_header << '\n';
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_timestamp(series.time_at(i)) << ',' << format_number(series[i]) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace vbpbb
