#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "oracles.hpp"
#include "vbpbb/error.hpp"
#include "vbpbb/ingest.hpp"
#include "vbpbb/synthetic.hpp"

using namespace vbpbb;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name, const std::string& body) {
  const auto dir = fs::temp_directory_path() / "vbpbb_test_ingest";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

Error error_of(const fs::path& path, const CsvOptions& opts) {
  try {
    ingest_csv(path, opts);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorCode::InvalidArgument, "");
}

CsvOptions kwh() {
  CsvOptions o;
  o.timestamp_column = "ts";
  o.value_column = "kwh";
  return o;
}

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("parse_timestamp") {
  using namespace std::chrono;
  const auto base = sys_days{2023y / January / 1};
  CHECK(parse_timestamp("2023-01-01T00:00") == base);
  CHECK(parse_timestamp("2023-01-01 05:30") == base + hours(5) + minutes(30));
  CHECK(parse_timestamp("2023-01-01T05:30:15") == base + hours(5) + minutes(30) + seconds(15));
  CHECK(parse_timestamp("2023-01-01T05:30:15.250Z") == base + hours(5) + minutes(30) + seconds(15));
  CHECK(parse_timestamp("2023-01-01T03:00+03:00") == base);
  CHECK(parse_timestamp("2022-12-31T22:00-02:00") == base);
  CHECK(parse_timestamp("2023-01-01") == base);
  CHECK_FALSE(parse_timestamp("2023-13-01T00:00"));
  CHECK_FALSE(parse_timestamp("2023-02-30"));
  CHECK_FALSE(parse_timestamp("01/02/2023 00:00"));
  CHECK_FALSE(parse_timestamp("2023-01-01T25:00"));
  CHECK_FALSE(parse_timestamp("2023-01-01T00:00 junk"));
  CHECK(format_timestamp(base + hours(13) + seconds(7)) == "2023-01-01T13:00:07");
}

TEST_CASE("parse_number") {
  CHECK(parse_number("1234.5", false) == 1234.5);
  CHECK(parse_number("1,234.5", false) == 1234.5);
  CHECK(parse_number("1.234,56", true) == 1234.56);
  CHECK(parse_number("  -7,5 ", true) == -7.5);
  CHECK(parse_number("+3", false) == 3.0);
  CHECK(parse_number("1e3", false) == 1000.0);
  CHECK(parse_number("1 234 567", false) == 1234567.0);
  CHECK_FALSE(parse_number("", false));
  CHECK_FALSE(parse_number("abc", false));
  CHECK_FALSE(parse_number("12kWh", false));
  CHECK_FALSE(parse_number("nan", false));
}

TEST_CASE("ingest_csv: three hourly rows") {
  const auto path = scratch("ok.csv", "ts,kwh\n2023-01-01T00:00,100\n2023-01-01T01:00,110\n2023-01-01T02:00,120\n");
  const auto s = ingest_csv(path, kwh());
  CHECK(vec(s.values()) == std::vector<double>{100, 110, 120});
  CHECK(s.start_time() == parse_timestamp("2023-01-01T00:00"));
  CHECK(s.step_hours() == 1.0);
}

TEST_CASE("ingest_csv: gap is reported at its row") {
  const auto path = scratch("gap.csv", "ts,kwh\n2023-01-01T00:00,100\n2023-01-01T01:00,110\n2023-01-01T04:00,120\n");
  const auto e = error_of(path, kwh());
  CHECK(e.code() == ErrorCode::GapDetected);
  CHECK(e.message().find("row 3") != std::string::npos);
}

TEST_CASE("ingest_csv: every gap is listed") {
  const auto path = scratch("gaps.csv",
                            "ts,kwh\n2023-01-01T00:00,1\n2023-01-01T02:00,1\n2023-01-01T03:00,1\n"
                            "2023-01-01T07:00,1\n");
  const auto e = error_of(path, kwh());
  CHECK(e.code() == ErrorCode::GapDetected);
  CHECK(e.message().find("row 2") != std::string::npos);
  CHECK(e.message().find("row 4") != std::string::npos);
}

TEST_CASE("ingest_csv: decimal comma with semicolons and quoting") {
  const auto path = scratch("eu.csv",
                            "\xEF\xBB\xBF" "Tarih;Saat;kwh;ts\r\n"
                            "x;1;\"1.234,56\";2023-01-01 00:00\r\n"
                            "x;2;\"1.300,00\";2023-01-01 01:00\r\n");
  auto opts = kwh();
  opts.delimiter = ';';
  opts.decimal_comma = true;
  const auto s = ingest_csv(path, opts);
  CHECK(vec(s.values()) == std::vector<double>{1234.56, 1300.0});
}

TEST_CASE("ingest_csv: step_hours other than one") {
  const auto path = scratch("half.csv", "timestamp,value\n2023-01-01T00:00,1\n2023-01-01T00:30,2\n");
  CsvOptions opts;
  opts.step_hours = 0.5;
  const auto s = ingest_csv(path, opts);
  CHECK(s.size() == 2);
  CHECK(s.step_hours() == 0.5);
  CHECK(error_of(path, CsvOptions{}).code() == ErrorCode::GapDetected);
}

TEST_CASE("ingest_csv: errors") {
  CHECK(error_of(scratch("nocol.csv", "ts,load\n2023-01-01T00:00,1\n"), kwh()).code() == ErrorCode::MissingColumn);

  const auto bad_value = error_of(scratch("badval.csv", "ts,kwh\n2023-01-01T00:00,1\n2023-01-01T01:00,n/a\n"), kwh());
  CHECK(bad_value.code() == ErrorCode::UnparseableValue);
  CHECK(bad_value.message().find("row 2") != std::string::npos);

  const auto bad_ts = error_of(scratch("badts.csv", "ts,kwh\nyesterday,1\n"), kwh());
  CHECK(bad_ts.code() == ErrorCode::UnparseableValue);
  CHECK(bad_ts.message().find("row 1") != std::string::npos);

  CHECK(error_of(scratch("back.csv", "ts,kwh\n2023-01-01T01:00,1\n2023-01-01T00:00,2\n"), kwh()).code() ==
        ErrorCode::NonMonotoneTimestamps);
  CHECK(error_of(scratch("dup.csv", "ts,kwh\n2023-01-01T01:00,1\n2023-01-01T01:00,2\n"), kwh()).code() ==
        ErrorCode::NonMonotoneTimestamps);
  CHECK(error_of(fs::temp_directory_path() / "vbpbb_no_such_file.csv", kwh()).code() == ErrorCode::IoError);
}

TEST_CASE("write_series_csv round trip") {
  const TimeSeries s({1.5, -2.25, 1e-7, 123456.789012}, *parse_timestamp("2020-02-28T22:00"), 1.0);
  const auto dir = fs::temp_directory_path() / "vbpbb_test_ingest";
  fs::create_directories(dir);
  write_series_csv(s, dir / "rt.csv", "value");
  const auto back = ingest_csv(dir / "rt.csv");
  CHECK(vec(back.values()) == vec(s.values()));
  CHECK(back.start_time() == s.start_time());
}

TEST_CASE("format_number keeps at least six significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.000123456789) == "-0.000123456789");
  CHECK(std::stod(format_number(3.14159265358979)) == doctest::Approx(3.14159265358979).epsilon(1e-11));
}

TEST_CASE("synthesize: closed-form cosine") {
  SyntheticSpec spec;
  spec.length_samples = 48;
  spec.components = {{24.0, Waveform::Cosine, 10.0}};
  const auto s = synthesize(spec);
  CHECK(s[0] == doctest::Approx(10.0));
  CHECK(s[12] == doctest::Approx(-10.0));
  CHECK(s[6] == doctest::Approx(0.0).scale(10));
}

TEST_CASE("synthesize: null signal") {
  SyntheticSpec spec;
  spec.length_samples = 100;
  spec.components = {{24.0, Waveform::Cosine, 0.0}, {168.0, Waveform::Square, 0.0}};
  const auto s = synthesize(spec);
  for (double x : s.values()) CHECK(x == 0.0);
}

TEST_CASE("synthesize: noise level, determinism and trend") {
  SyntheticSpec spec;
  spec.length_samples = 10000;
  spec.components = {{24.0, Waveform::Cosine, 3.0}, {168.0, Waveform::Square, 2.0, 4}};
  spec.noise_sd = 5.0;
  spec.trend_slope = 0.01;
  spec.seed = 99;
  const auto s = synthesize(spec);
  const auto det = deterministic_signal(spec);
  std::vector<double> resid(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) resid[t] = s[t] - det[t];
  const double sd = std::sqrt(static_cast<double>(oracle::variance(resid)));
  CHECK(sd >= 4.8);
  CHECK(sd <= 5.2);
  CHECK(vec(synthesize(spec).values()) == vec(s.values()));
  spec.seed = 100;
  CHECK(vec(synthesize(spec).values()) != vec(s.values()));

  // Noise-free parts: trend plus the two waveforms.
  const double square_at_0 = 2.0 * 4.0 / std::numbers::pi * (1.0 - 1.0 / 3 + 1.0 / 5 - 1.0 / 7);
  CHECK(det[0] == doctest::Approx(3.0 + square_at_0));
  CHECK(det[168] == doctest::Approx(1.68 + 3.0 + square_at_0));
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec spec;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.length_samples = 10;
  spec.noise_sd = -1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.noise_sd = 0;
  spec.components = {{24.0, Waveform::Cosine, -1.0}};
  CHECK_THROWS_AS(spec.validate(), Error);
}
