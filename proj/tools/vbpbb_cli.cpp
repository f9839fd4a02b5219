// vbpbb: command-line front end over the C API.
//
//   vbpbb analyze     full pipeline, writes bands/summary files
//   vbpbb periodogram periodogram of an input series
//   vbpbb filter      one KZFT pass, writes the real component series
//   vbpbb simulate    writes a synthetic series

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vbpbb/vbpbb.h"

using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(vbpbb_status status, const std::string& what) {
  if (status != VBPBB_OK)
    throw CliError(what + " failed [" + vbpbb_status_name(status) + "]: " + vbpbb_last_error());
}

struct SeriesDeleter {
  void operator()(vbpbb_series* s) const { vbpbb_series_destroy(s); }
};
struct AnalysisDeleter {
  void operator()(vbpbb_analysis* a) const { vbpbb_analysis_destroy(a); }
};
using SeriesPtr = std::unique_ptr<vbpbb_series, SeriesDeleter>;
using AnalysisPtr = std::unique_ptr<vbpbb_analysis, AnalysisDeleter>;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw CliError("config file " + path + " is not valid JSON: " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

// CSV ingestion flags shared by analyze, periodogram and filter.
struct CsvFlags {
  std::optional<std::string> ts_col, value_col, delimiter;
  std::optional<double> step_hours;
  bool decimal_comma = false;

  void add_to(CLI::App* app) {
    app->add_option("--ts-col", ts_col, "Timestamp column name (default: timestamp)");
    app->add_option("--value-col", value_col, "Value column name (default: value)");
    app->add_option("--step-hours", step_hours, "Sampling step in hours (default: 1)");
    app->add_option("--delimiter", delimiter, "Field delimiter (default: ,)");
    app->add_flag("--decimal-comma", decimal_comma, "Numbers use a decimal comma (1.234,56)");
  }

  void merge_into(json& cfg) const {
    if (ts_col) cfg["timestamp_column"] = *ts_col;
    if (value_col) cfg["value_column"] = *value_col;
    if (step_hours) cfg["step_hours"] = *step_hours;
    if (delimiter) cfg["delimiter"] = *delimiter;
    if (decimal_comma) cfg["decimal_comma"] = true;
  }
};

SeriesPtr read_series(const std::string& input, const json& cfg) {
  const std::string ts = cfg.value("timestamp_column", std::string("timestamp"));
  const std::string val = cfg.value("value_column", std::string("value"));
  const std::string delim = cfg.value("delimiter", std::string(","));
  vbpbb_csv_options opts{ts.c_str(), val.c_str(), cfg.value("step_hours", 1.0),
                         cfg.value("decimal_comma", false) ? 1 : 0, delim.empty() ? ',' : delim[0]};
  vbpbb_series* raw = nullptr;
  check(vbpbb_series_read_csv(input.c_str(), &opts, &raw), "reading " + input);
  return SeriesPtr(raw);
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::optional<std::string> config, input, pbb_mode, out_dir;
  std::optional<std::size_t> b, override_m, threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::vector<std::string> components;
  bool plots = false;
  bool periodogram = false;
  CsvFlags csv;
};

int run_analyze(const AnalyzeArgs& args) {
  json cfg = args.config ? load_json_file(*args.config) : json::object();
  if (args.input) {
    cfg["input"] = *args.input;
    cfg.erase("synthetic");
  }
  if (args.b) cfg["B"] = *args.b;
  if (args.seed) cfg["seed"] = *args.seed;
  if (args.alpha) cfg["alpha"] = *args.alpha;
  if (args.override_m) cfg["override_m"] = *args.override_m;
  if (args.pbb_mode) cfg["pbb_mode"] = *args.pbb_mode;
  if (args.out_dir) cfg["out_dir"] = *args.out_dir;
  if (args.threads) cfg["threads"] = *args.threads;
  if (args.plots) cfg["plots"] = true;
  if (args.periodogram) cfg["periodogram"] = true;
  args.csv.merge_into(cfg);
  if (!args.components.empty()) {
    json list = json::array();
    for (const auto& spec : args.components) {
      const auto parts = split(spec, ':');
      if (parts.empty() || parts.size() > 3) throw CliError("bad --component '" + spec + "'");
      json c;
      try {
        c["period_hours"] = std::stod(parts[0]);
        c["n_harmonics"] = parts.size() > 1 ? std::stoul(parts[1]) : 1UL;
      } catch (const std::exception&) {
        throw CliError("bad --component '" + spec + "', expected HOURS[:HARMONICS[:LABEL]]");
      }
      if (parts.size() > 2) c["label"] = parts[2];
      list.push_back(c);
    }
    cfg["components"] = list;
  }

  vbpbb_analysis* raw = nullptr;
  check(vbpbb_analysis_create(cfg.dump().c_str(), &raw), "config");
  AnalysisPtr analysis(raw);
  check(vbpbb_analysis_run(analysis.get()), "analysis");
  check(vbpbb_analysis_write(analysis.get(), nullptr), "writing outputs");

  std::size_t needed = 0;
  vbpbb_analysis_summary_json(analysis.get(), nullptr, 0, &needed);
  std::string text(needed, '\0');
  check(vbpbb_analysis_summary_json(analysis.get(), text.data(), text.size(), &needed), "summary");
  text.resize(needed - 1);
  const json summary = json::parse(text);

  std::printf("%-36s %12s %10s %12s\n", "component", "freq (1/h)", "signif.", "PBB/VBPBB");
  for (const auto& c : summary["components"]) {
    const auto ratio = c["width_ratio_vs_pbb"];
    std::printf("%-36s %12.6g %10s %12s\n", c["component"].get<std::string>().c_str(),
                c["frequency"].get<double>(), c["significant"].get<bool>() ? "yes" : "no",
                ratio.is_null() ? "-" : std::to_string(ratio.get<double>()).c_str());
  }
  if (!summary["combined"].is_null() && !summary["combined"]["r_squared"].is_null())
    std::printf("combined significant components: R^2 = %.4f\n",
                summary["combined"]["r_squared"].get<double>());
  std::printf("outputs written to %s\n", cfg.value("out_dir", std::string("vbpbb-out")).c_str());
  return 0;
}

// --- periodogram -----------------------------------------------------------

struct PeriodogramArgs {
  std::string input;
  std::string out = "periodogram.csv";
  CsvFlags csv;
};

int run_periodogram(const PeriodogramArgs& args) {
  json cfg = json::object();
  args.csv.merge_into(cfg);
  const auto series = read_series(args.input, cfg);
  check(vbpbb_periodogram_write_csv(series.get(), args.out.c_str()), "periodogram");
  std::printf("periodogram of %zu samples written to %s\n", vbpbb_series_length(series.get()),
              args.out.c_str());
  return 0;
}

// --- filter ----------------------------------------------------------------

struct FilterArgs {
  std::string input;
  std::string out = "component.csv";
  std::optional<double> period_hours, frequency;
  std::size_t harmonic = 1;
  std::size_t m = 0;
  std::size_t k = 1;
  bool center = false;
  CsvFlags csv;
};

int run_filter(const FilterArgs& args) {
  json cfg = json::object();
  args.csv.merge_into(cfg);
  auto series = read_series(args.input, cfg);
  const double step = vbpbb_series_step_hours(series.get());

  double v = 0.0;  // cycles/sample
  if (args.frequency)
    v = *args.frequency * step;
  else if (args.period_hours)
    v = static_cast<double>(args.harmonic) * step / *args.period_hours;
  else
    throw CliError("filter needs --period-hours or --frequency");

  if (args.center) {
    vbpbb_series* centered = nullptr;
    check(vbpbb_series_center(series.get(), &centered, nullptr), "centering");
    series.reset(centered);
  }
  vbpbb_series* raw = nullptr;
  check(vbpbb_kzft_filter(series.get(), args.m, args.k, v, &raw), "KZFT filter");
  SeriesPtr component(raw);
  check(vbpbb_series_write_csv(component.get(), args.out.c_str(), "component"), "writing " + args.out);
  std::printf("component at %.6g cycles/sample (m=%zu, k=%zu): %zu samples written to %s\n", v, args.m,
              args.k, vbpbb_series_length(component.get()), args.out.c_str());
  return 0;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::optional<std::string> config;
  std::optional<std::size_t> length;
  std::vector<std::string> components;
  std::optional<double> noise_sd, trend, step_hours;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> start;
  std::string out = "synthetic.csv";
};

int run_simulate(const SimulateArgs& args) {
  json spec = args.config ? load_json_file(*args.config) : json::object();
  if (spec.contains("synthetic")) {
    // Accept a whole analysis config and use its synthetic block.
    const double step = spec.value("step_hours", 1.0);
    spec = spec["synthetic"];
    if (!spec.contains("step_hours")) spec["step_hours"] = step;
  }
  if (args.length) spec["length_samples"] = *args.length;
  if (args.noise_sd) spec["noise_sd"] = *args.noise_sd;
  if (args.trend) spec["trend_slope"] = *args.trend;
  if (args.seed) spec["seed"] = *args.seed;
  if (args.start) spec["start_time"] = *args.start;
  if (args.step_hours) spec["step_hours"] = *args.step_hours;
  if (!args.components.empty()) {
    json list = json::array();
    for (const auto& text : args.components) {
      const auto parts = split(text, ':');
      if (parts.size() < 2 || parts.size() > 3) throw CliError("bad --component '" + text + "'");
      json c;
      try {
        c["period_samples"] = std::stod(parts[0]);
        c["amplitude"] = std::stod(parts[1]);
      } catch (const std::exception&) {
        throw CliError("bad --component '" + text + "', expected PERIOD:AMPLITUDE[:cosine|square]");
      }
      if (parts.size() == 3) c["waveform"] = parts[2];
      list.push_back(c);
    }
    spec["components"] = list;
  }
  vbpbb_series* raw = nullptr;
  check(vbpbb_series_simulate(spec.dump().c_str(), &raw), "simulate");
  SeriesPtr series(raw);
  check(vbpbb_series_write_csv(series.get(), args.out.c_str(), "value"), "writing " + args.out);
  std::printf("%zu samples written to %s\n", vbpbb_series_length(series.get()), args.out.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable bandpass periodic block bootstrap for periodically correlated series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vbpbb_version()));

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Run the full VBPBB/PBB analysis");
  cmd_analyze->add_option("--config", analyze.config, "JSON config file");
  cmd_analyze->add_option("--input", analyze.input, "Input CSV (overrides config)");
  cmd_analyze->add_option("--b", analyze.b, "Bootstrap replicates B");
  cmd_analyze->add_option("--seed", analyze.seed, "Random seed");
  cmd_analyze->add_option("--alpha", analyze.alpha, "Band level is 1 - alpha");
  cmd_analyze->add_option("--override-m", analyze.override_m, "Fixed odd KZFT window length");
  cmd_analyze->add_option("--pbb-mode", analyze.pbb_mode, "PBB comparison: per-component, fixed24 or off")
      ->check(CLI::IsMember({"per-component", "fixed24", "off"}));
  cmd_analyze->add_option("--out-dir", analyze.out_dir, "Output directory");
  cmd_analyze->add_option("--threads", analyze.threads, "Worker threads (0: all cores)");
  cmd_analyze->add_option("--component", analyze.components,
                          "Component family HOURS[:HARMONICS[:LABEL]], repeatable");
  cmd_analyze->add_flag("--plots", analyze.plots, "Write SVG band plots");
  cmd_analyze->add_flag("--periodogram", analyze.periodogram, "Write periodogram.csv");
  analyze.csv.add_to(cmd_analyze);

  PeriodogramArgs pgram;
  auto* cmd_pgram = app.add_subcommand("periodogram", "Write the periodogram of a series");
  cmd_pgram->add_option("--input", pgram.input, "Input CSV")->required();
  cmd_pgram->add_option("--out", pgram.out, "Output CSV");
  pgram.csv.add_to(cmd_pgram);

  FilterArgs filter;
  auto* cmd_filter = app.add_subcommand("filter", "Apply one KZFT bandpass filter");
  cmd_filter->add_option("--input", filter.input, "Input CSV")->required();
  cmd_filter->add_option("--out", filter.out, "Output CSV");
  cmd_filter->add_option("--period-hours", filter.period_hours, "Fundamental period in hours");
  cmd_filter->add_option("--harmonic", filter.harmonic, "Harmonic of the period (default 1)");
  cmd_filter->add_option("--frequency", filter.frequency, "Centre frequency in cycles/hour");
  cmd_filter->add_option("--m", filter.m, "Odd window length")->required();
  cmd_filter->add_option("--k", filter.k, "Iterations (default 1)");
  cmd_filter->add_flag("--center", filter.center, "Subtract the grand mean first");
  filter.csv.add_to(cmd_filter);

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Write a synthetic periodic series");
  cmd_sim->add_option("--config", sim.config, "JSON synthetic spec (or analysis config)");
  cmd_sim->add_option("--length", sim.length, "Number of samples");
  cmd_sim->add_option("--component", sim.components, "PERIOD_SAMPLES:AMPLITUDE[:cosine|square], repeatable");
  cmd_sim->add_option("--noise-sd", sim.noise_sd, "Gaussian noise standard deviation");
  cmd_sim->add_option("--trend", sim.trend, "Linear trend per sample");
  cmd_sim->add_option("--seed", sim.seed, "Random seed");
  cmd_sim->add_option("--start", sim.start, "Start timestamp (ISO-8601)");
  cmd_sim->add_option("--step-hours", sim.step_hours, "Sampling step in hours");
  cmd_sim->add_option("--out", sim.out, "Output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_analyze) return run_analyze(analyze);
    if (*cmd_pgram) return run_periodogram(pgram);
    if (*cmd_filter) return run_filter(filter);
    if (*cmd_sim) return run_simulate(sim);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vbpbb: %s\n", e.what());
    return 1;
  }
  return 1;
}
