#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vbpbb/bootstrap.hpp"
#include "vbpbb/inference.hpp"
#include "vbpbb/ingest.hpp"
#include "vbpbb/spectral.hpp"
#include "vbpbb/synthetic.hpp"

namespace vbpbb {

// A fundamental period and how many of its harmonics to test.
struct ComponentFamily {
  std::string label;  // empty: derived from the period ("daily", "weekly", ...)
  double period_hours = 24.0;
  std::size_t n_harmonics = 1;
};

// Which raw-series PBB bands are computed for comparison.
enum class PbbMode {
  PerComponent,  // at each component's own period
  Fixed24,       // one 24-hour band for every component
  Off,
};

const char* to_string(PbbMode mode) noexcept;
PbbMode parse_pbb_mode(const std::string& text);

struct AnalysisConfig {
  std::optional<std::filesystem::path> input;
  std::optional<SyntheticSpec> synthetic;
  CsvOptions csv;
  std::vector<ComponentFamily> components;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::optional<std::size_t> override_m;
  PbbMode pbb_mode = PbbMode::PerComponent;
  std::filesystem::path out_dir = "vbpbb-out";
  bool plots = false;
  bool write_periodogram = false;
  std::size_t threads = 1;

  void validate() const;
};

// Config files are JSON objects whose keys mirror AnalysisConfig: input,
// timestamp_column, value_column, step_hours, decimal_comma, delimiter,
// components [{label, period_hours, n_harmonics}], B, seed, alpha, override_m,
// pbb_mode, out_dir, plots, periodogram, threads and synthetic
// {length_samples, components [{period_samples, waveform, amplitude,
// square_terms}], noise_sd, trend_slope, seed, start_time}.
AnalysisConfig parse_analysis_config(const std::string& json_text);
SyntheticSpec parse_synthetic_spec(const std::string& json_text);

struct ComponentResult {
  ComponentSpec spec;
  std::string family;
  CiBand vbpbb;
  std::optional<CiBand> pbb;  // evaluated on this component's phase grid
  std::optional<double> width_ratio_vs_pbb;
};

struct FamilyResult {
  std::string label;
  std::size_t period_samples = 0;
  std::vector<std::string> components;
  CiBand vbpbb;
  std::optional<CiBand> pbb;
  std::optional<double> width_ratio_vs_pbb;
  std::optional<double> r_squared;
};

struct CombinedResult {
  CombinedBand band;
  std::optional<double> r_squared;
  std::optional<double> width_ratio_vs_pbb;
};

struct AnalysisResult {
  AnalysisConfig config;
  std::size_t n_samples = 0;
  Timestamp start_time{};
  double step_hours = 1.0;
  double grand_mean = 0.0;
  FrequencyPlan plan;
  std::string bandwidth_rule;  // "min-spacing", "override" or "dc-spacing"
  std::vector<ComponentResult> components;
  std::vector<FamilyResult> families;
  std::optional<CombinedResult> combined;
  std::optional<Spectrum> periodogram;
};

// Centres the series, plans the filter window, bootstraps every component with
// VBPBB (and PBB per the comparison mode), then builds bands, width ratios,
// family and combined bands and R^2. Errors name the failing stage.
AnalysisResult run_analysis(const AnalysisConfig& config);
AnalysisResult run_analysis(const AnalysisConfig& config, const TimeSeries& series);

// bands.csv, families.csv, combined.csv, summary.json, and optionally
// periodogram.csv and plots/*.svg under out_dir.
void emit_outputs(const AnalysisResult& result, const std::filesystem::path& out_dir);

std::string summary_json(const AnalysisResult& result);

} // namespace vbpbb
