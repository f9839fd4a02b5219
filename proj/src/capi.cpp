#include "vbpbb/vbpbb.h"

#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>

#include "vbpbb/analysis.hpp"
#include "vbpbb/error.hpp"
#include "vbpbb/ingest.hpp"
#include "vbpbb/kzft.hpp"
#include "vbpbb/spectral.hpp"
#include "vbpbb/synthetic.hpp"

struct vbpbb_series {
  vbpbb::TimeSeries series;
};

struct vbpbb_analysis {
  vbpbb::AnalysisConfig config;
  std::optional<vbpbb::AnalysisResult> result;
};

namespace {

thread_local std::string g_last_error;

vbpbb_status fail(vbpbb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions to status codes.
template <class Fn>
vbpbb_status guarded(Fn&& fn) noexcept {
  try {
    return fn();
  } catch (const vbpbb::Error& e) {
    return fail(static_cast<vbpbb_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VBPBB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VBPBB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VBPBB_ERR_INTERNAL, "unknown error");
  }
}

vbpbb_status null_argument(const char* name) {
  return fail(VBPBB_ERR_NULL_ARGUMENT, std::string("argument '") + name + "' is null");
}

vbpbb_status store_series(vbpbb::TimeSeries series, vbpbb_series** out) {
  *out = new vbpbb_series{std::move(series)};
  return VBPBB_OK;
}

} // namespace

extern "C" {

const char* vbpbb_version(void) { return "1.0.0"; }

const char* vbpbb_status_name(vbpbb_status status) {
  switch (status) {
    case VBPBB_OK: return "OK";
    case VBPBB_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case VBPBB_ERR_NULL_ARGUMENT: return "NullArgument";
    case VBPBB_ERR_NOT_RUN: return "NotRun";
    case VBPBB_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= static_cast<int>(vbpbb::ErrorCode::IoError))
    return vbpbb::to_string(static_cast<vbpbb::ErrorCode>(code)).data();
  return "Unknown";
}

const char* vbpbb_last_error(void) { return g_last_error.c_str(); }

vbpbb_status vbpbb_series_create(const double* values, size_t length, int64_t start_unix_seconds,
                                 double step_hours, vbpbb_series** out) {
  if (!out) return null_argument("out");
  if (!values && length > 0) return null_argument("values");
  return guarded([&] {
    return store_series(vbpbb::TimeSeries(std::vector<double>(values, values + length),
                                          vbpbb::Timestamp{std::chrono::seconds(start_unix_seconds)},
                                          step_hours),
                        out);
  });
}

vbpbb_status vbpbb_series_read_csv(const char* path, const vbpbb_csv_options* options,
                                   vbpbb_series** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    vbpbb::CsvOptions opts;
    if (options) {
      if (options->timestamp_column) opts.timestamp_column = options->timestamp_column;
      if (options->value_column) opts.value_column = options->value_column;
      if (options->step_hours > 0.0) opts.step_hours = options->step_hours;
      opts.decimal_comma = options->decimal_comma != 0;
      if (options->delimiter != 0) opts.delimiter = options->delimiter;
    }
    return store_series(vbpbb::ingest_csv(path, opts), out);
  });
}

vbpbb_status vbpbb_series_simulate(const char* spec_json, vbpbb_series** out) {
  if (!spec_json) return null_argument("spec_json");
  if (!out) return null_argument("out");
  return guarded([&] { return store_series(vbpbb::synthesize(vbpbb::parse_synthetic_spec(spec_json)), out); });
}

void vbpbb_series_destroy(vbpbb_series* series) { delete series; }

size_t vbpbb_series_length(const vbpbb_series* series) { return series ? series->series.size() : 0; }

double vbpbb_series_step_hours(const vbpbb_series* series) {
  return series ? series->series.step_hours() : 0.0;
}

int64_t vbpbb_series_start(const vbpbb_series* series) {
  return series ? series->series.start_time().time_since_epoch().count() : 0;
}

vbpbb_status vbpbb_series_values(const vbpbb_series* series, double* buffer, size_t capacity,
                                 size_t* needed) {
  if (!series) return null_argument("series");
  const auto values = series->series.values();
  if (needed) *needed = values.size();
  if (capacity < values.size() || !buffer)
    return fail(VBPBB_ERR_BUFFER_TOO_SMALL, "value buffer too small");
  std::memcpy(buffer, values.data(), values.size() * sizeof(double));
  return VBPBB_OK;
}

vbpbb_status vbpbb_series_center(const vbpbb_series* series, vbpbb_series** out, double* grand_mean) {
  if (!series) return null_argument("series");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto centered = vbpbb::center(series->series);
    if (grand_mean) *grand_mean = centered.grand_mean;
    return store_series(std::move(centered.series), out);
  });
}

vbpbb_status vbpbb_series_write_csv(const vbpbb_series* series, const char* path,
                                    const char* value_header) {
  if (!series) return null_argument("series");
  if (!path) return null_argument("path");
  return guarded([&] {
    vbpbb::write_series_csv(series->series, path, value_header ? value_header : "value");
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_periodic_mean(const vbpbb_series* series, size_t period_samples, double* means,
                                 size_t* counts, size_t capacity) {
  if (!series) return null_argument("series");
  if (!means) return null_argument("means");
  return guarded([&] {
    const auto profile = vbpbb::periodic_mean(series->series, period_samples);
    if (capacity < period_samples) return fail(VBPBB_ERR_BUFFER_TOO_SMALL, "profile buffer too small");
    for (size_t s = 0; s < period_samples; ++s) {
      means[s] = profile.means[s];
      if (counts) counts[s] = profile.counts[s];
    }
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_periodogram(const vbpbb_series* series, double* frequencies, double* power,
                               size_t capacity, size_t* needed) {
  if (!series) return null_argument("series");
  return guarded([&] {
    const auto spectrum = vbpbb::periodogram(series->series);
    const size_t n = spectrum.frequencies.size();
    if (needed) *needed = n;
    if (capacity < n || !frequencies || !power)
      return fail(VBPBB_ERR_BUFFER_TOO_SMALL, "spectrum buffers too small");
    std::memcpy(frequencies, spectrum.frequencies.data(), n * sizeof(double));
    std::memcpy(power, spectrum.power.data(), n * sizeof(double));
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_periodogram_write_csv(const vbpbb_series* series, const char* path) {
  if (!series) return null_argument("series");
  if (!path) return null_argument("path");
  return guarded([&] {
    const auto spectrum = vbpbb::periodogram(series->series);
    const double step = series->series.step_hours();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vbpbb::Error(vbpbb::ErrorCode::IoError, std::string("cannot write ") + path);
    out << "frequency_per_sample,frequency_per_hour,period_hours,power\n";
    for (size_t j = 0; j < spectrum.frequencies.size(); ++j) {
      const double f = spectrum.frequencies[j];
      out << vbpbb::format_number(f) << ',' << vbpbb::format_number(f / step) << ','
          << vbpbb::format_number(step / f) << ',' << vbpbb::format_number(spectrum.power[j]) << '\n';
    }
    if (!out) throw vbpbb::Error(vbpbb::ErrorCode::IoError, std::string("write failed for ") + path);
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_plan_bandwidth(const double* frequencies, size_t count, size_t override_m,
                                  size_t* m_out) {
  if (!frequencies && count > 0) return null_argument("frequencies");
  if (!m_out) return null_argument("m_out");
  return guarded([&] {
    std::optional<std::size_t> override;
    if (override_m != 0) override = override_m;
    *m_out = vbpbb::plan_bandwidth(std::span<const double>(frequencies, count), override).m;
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_kzft_coefficients(size_t m, size_t k, double* buffer, size_t capacity,
                                     size_t* needed) {
  return guarded([&] {
    vbpbb::KzftConfig{m, k, 0.0}.validate();
    const auto coefs = vbpbb::kzft_coefficients(m, k);
    if (needed) *needed = coefs.size();
    if (capacity < coefs.size() || !buffer)
      return fail(VBPBB_ERR_BUFFER_TOO_SMALL, "coefficient buffer too small");
    std::memcpy(buffer, coefs.data(), coefs.size() * sizeof(double));
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_kzft_filter(const vbpbb_series* series, size_t m, size_t k, double v,
                               vbpbb_series** out) {
  if (!series) return null_argument("series");
  if (!out) return null_argument("out");
  return guarded([&] { return store_series(vbpbb::kzft_filter(series->series, {m, k, v}), out); });
}

vbpbb_status vbpbb_analysis_create(const char* config_json, vbpbb_analysis** out) {
  if (!config_json) return null_argument("config_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new vbpbb_analysis{vbpbb::parse_analysis_config(config_json), std::nullopt};
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_analysis_run(vbpbb_analysis* analysis) {
  if (!analysis) return null_argument("analysis");
  return guarded([&] {
    analysis->result = vbpbb::run_analysis(analysis->config);
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_analysis_write(const vbpbb_analysis* analysis, const char* out_dir) {
  if (!analysis) return null_argument("analysis");
  if (!analysis->result) return fail(VBPBB_ERR_NOT_RUN, "analysis has not been run");
  return guarded([&] {
    vbpbb::emit_outputs(*analysis->result, out_dir ? std::filesystem::path(out_dir) : analysis->config.out_dir);
    return VBPBB_OK;
  });
}

vbpbb_status vbpbb_analysis_summary_json(const vbpbb_analysis* analysis, char* buffer,
                                         size_t capacity, size_t* needed) {
  if (!analysis) return null_argument("analysis");
  if (!analysis->result) return fail(VBPBB_ERR_NOT_RUN, "analysis has not been run");
  return guarded([&] {
    const auto text = vbpbb::summary_json(*analysis->result);
    if (needed) *needed = text.size() + 1;
    if (capacity < text.size() + 1 || !buffer)
      return fail(VBPBB_ERR_BUFFER_TOO_SMALL, "summary buffer too small");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return VBPBB_OK;
  });
}

void vbpbb_analysis_destroy(vbpbb_analysis* analysis) { delete analysis; }

} // extern "C"
