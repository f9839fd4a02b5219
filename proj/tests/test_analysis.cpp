#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "vbpbb/analysis.hpp"
#include "vbpbb/error.hpp"
#include "vbpbb/ingest.hpp"

using namespace vbpbb;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SyntheticSpec daily_spec(double amplitude, double sd, std::size_t weeks, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.length_samples = weeks * 168;
  if (amplitude > 0) spec.components = {{24.0, Waveform::Cosine, amplitude}};
  spec.noise_sd = sd;
  spec.seed = seed;
  spec.start_time = *parse_timestamp("2023-01-02T00:00");
  return spec;
}

AnalysisConfig config_for(SyntheticSpec spec, std::vector<ComponentFamily> families) {
  AnalysisConfig cfg;
  cfg.synthetic = std::move(spec);
  cfg.components = std::move(families);
  return cfg;
}

double median_width(const CiBand& band) {
  std::vector<double> w;
  for (std::size_t s = 0; s < band.period_samples; ++s) w.push_back(band.width(s));
  return oracle::quantile(w, 0.5);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "vbpbb_test_analysis" / name;
  fs::remove_all(dir);
  return dir;
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("daily cosine in noise is significant and VBPBB is narrower") {
  const auto result = run_analysis(config_for(daily_spec(10, 5, 8, 1), {{"", 24.0, 1}}));
  REQUIRE(result.components.size() == 1);
  const auto& daily = result.components[0];
  CHECK(daily.spec.label == "daily");
  CHECK(daily.vbpbb.significant);
  REQUIRE(daily.pbb);
  CHECK(median_width(daily.vbpbb) < median_width(*daily.pbb));
  REQUIRE(daily.width_ratio_vs_pbb);
  CHECK(*daily.width_ratio_vs_pbb > 1.0);
  CHECK(result.bandwidth_rule == "dc-spacing");
  CHECK(result.plan.m == 49);
}

TEST_CASE("bands scale with the noise level") {
  auto cfg = config_for(daily_spec(0, 1, 10, 5), {{"", 24.0, 1}});
  cfg.replicates = 300;
  const auto unit = run_analysis(cfg);
  cfg.synthetic->noise_sd = 3;
  const auto tripled = run_analysis(cfg);
  const auto& a = unit.components[0];
  const auto& b = tripled.components[0];
  CHECK(a.vbpbb.significant == b.vbpbb.significant);
  for (std::size_t s = 0; s < 24; ++s) {
    CHECK(b.vbpbb.lower[s] == doctest::Approx(3 * a.vbpbb.lower[s]).epsilon(1e-9));
    CHECK(b.vbpbb.upper[s] == doctest::Approx(3 * a.vbpbb.upper[s]).epsilon(1e-9));
    CHECK(b.pbb->upper[s] == doctest::Approx(3 * a.pbb->upper[s]).epsilon(1e-9));
  }
}

TEST_CASE("pipeline structure with harmonics, families and the combined band") {
  SyntheticSpec spec;
  spec.length_samples = 12 * 168;
  spec.components = {{24.0, Waveform::Square, 8.0}, {168.0, Waveform::Cosine, 4.0}};
  spec.noise_sd = 3.0;
  spec.seed = 4;
  auto cfg = config_for(spec, {{"", 24.0, 3}, {"", 168.0, 2}});
  cfg.replicates = 400;
  cfg.write_periodogram = true;
  const auto result = run_analysis(cfg);

  REQUIRE(result.components.size() == 5);
  CHECK(result.components[0].spec.label == "daily");
  CHECK(result.components[1].spec.label == "daily (second harmonic)");
  CHECK(result.components[2].spec.label == "daily (third harmonic)");
  CHECK(result.components[4].spec.label == "weekly (second harmonic)");
  for (const auto& c : result.components) CHECK(c.vbpbb.period_samples == c.spec.period_samples);
  // 2 / (1/84 - 1/168) = 336.
  CHECK(result.plan.m == 337);
  CHECK(result.bandwidth_rule == "min-spacing");
  CHECK(std::abs(result.grand_mean) < 0.5);

  CHECK(result.components[0].vbpbb.significant);
  CHECK(result.components[2].vbpbb.significant);
  CHECK(result.components[3].vbpbb.significant);
  // The square wave has no even harmonics, so that profile stays small next to
  // the odd ones even though leakage from them is itself 24-periodic.
  const auto swing = [](const CiBand& b) {
    return *std::max_element(b.median.begin(), b.median.end()) - *std::min_element(b.median.begin(), b.median.end());
  };
  CHECK(swing(result.components[1].vbpbb) < 0.1 * swing(result.components[0].vbpbb));
  CHECK(swing(result.components[1].vbpbb) < 0.2 * swing(result.components[2].vbpbb));

  REQUIRE(result.families.size() == 2);
  CHECK(result.families[0].label == "daily");
  CHECK(result.families[0].period_samples == 24);
  CHECK(result.families[0].components.size() == 3);
  CHECK(result.families[1].period_samples == 168);
  REQUIRE(result.families[0].r_squared);
  REQUIRE(result.families[1].r_squared);
  CHECK(*result.families[0].r_squared > *result.families[1].r_squared);

  REQUIRE(result.combined);
  CHECK(result.combined->band.band.period_samples == 168);
  for (std::size_t i = 0; i < result.components.size(); ++i) {
    const auto& names = result.combined->band.contributing_components;
    const bool listed = std::find(names.begin(), names.end(), result.components[i].spec.label) != names.end();
    CHECK(listed == result.components[i].vbpbb.significant);
  }
  REQUIRE(result.combined->r_squared);
  // Deterministic variance shares: square wave 3 terms at 8, cosine at 4, noise 3.
  const double sq = 64.0 * 16.0 / (std::numbers::pi * std::numbers::pi) * (1 + 1.0 / 9 + 1.0 / 25) / 2;
  const double share = (sq + 8.0) / (sq + 8.0 + 9.0);
  CHECK(std::abs(*result.combined->r_squared - share) < 0.05);

  REQUIRE(result.periodogram);
  const auto& pg = *result.periodogram;
  const auto peak = std::max_element(pg.power.begin(), pg.power.end()) - pg.power.begin();
  CHECK(pg.frequencies[peak] == doctest::Approx(1.0 / 24));
}

TEST_CASE("noise-free round trip matches the filter transfer") {
  // A cos(2 pi f t) filtered at v and reconstructed is A (G(f - v) + G(f + v)) cos(2 pi f t)
  // with G the k = 1 Dirichlet transfer.
  SyntheticSpec spec;
  spec.length_samples = 10 * 168;
  spec.components = {{24.0, Waveform::Cosine, 10.0}, {168.0, Waveform::Cosine, 5.0}};
  auto cfg = config_for(spec, {{"", 24.0, 1}, {"", 168.0, 1}});
  cfg.replicates = 100;
  const auto result = run_analysis(cfg);
  const std::size_t m = result.plan.m;
  const std::size_t half = (m - 1) / 2;
  const auto gain = [m](double delta) {
    return std::sin(std::numbers::pi * m * delta) / (m * std::sin(std::numbers::pi * delta));
  };
  for (const auto& c : result.components) {
    const double v = c.spec.frequency();
    const std::size_t p = c.spec.period_samples;
    std::vector<double> sum(p, 0.0), count(p, 0.0);
    for (std::size_t t = half; t + half < spec.length_samples; ++t) {
      double y = 0;
      for (const auto& inj : spec.components) {
        const double f = 1.0 / inj.period_samples;
        const double g = (std::abs(f - v) < 1e-15 ? 1.0 : gain(f - v)) + gain(f + v);
        y += inj.amplitude * g * std::cos(kTwoPi * f * double(t));
      }
      sum[t % p] += y;
      count[t % p] += 1;
    }
    for (std::size_t s = 0; s < p; ++s) {
      const double predicted = sum[s] / count[s];
      INFO(c.spec.label << " phase " << s);
      CHECK(c.vbpbb.lower[s] <= predicted + 1e-9);
      CHECK(predicted <= c.vbpbb.upper[s] + 1e-9);
      if (p == 168) CHECK(c.vbpbb.median[s] == doctest::Approx(predicted).epsilon(1e-9).scale(5));
    }
  }
}

TEST_CASE("seeded round trip: injected profiles inside the bands" * doctest::should_fail()) {
  // Known shortfall: m = 57 leaves the weekly filter 40% gain at its own mirror
  // image, and daily blocks understate the spread of a series smoothed over
  // 57 hours, so the bands miss the injected curves.
  SyntheticSpec spec;
  spec.length_samples = 10 * 168;
  spec.components = {{24.0, Waveform::Cosine, 10.0}, {168.0, Waveform::Cosine, 5.0}};
  spec.noise_sd = 5.0;
  spec.seed = 1;
  const auto result = run_analysis(config_for(spec, {{"", 24.0, 1}, {"", 168.0, 1}}));
  for (const auto& c : result.components) {
    const double amp = c.spec.period_samples == 24 ? 10.0 : 5.0;
    std::size_t inside = 0;
    for (std::size_t s = 0; s < c.spec.period_samples; ++s) {
      const double truth = amp * std::cos(kTwoPi * s / c.spec.period_samples);
      inside += c.vbpbb.lower[s] <= truth && truth <= c.vbpbb.upper[s];
    }
    INFO(c.spec.label << ": " << inside << " of " << c.spec.period_samples);
    CHECK(inside >= 0.9 * c.spec.period_samples);
  }
}

TEST_CASE("pbb modes") {
  auto cfg = config_for(daily_spec(10, 5, 10, 2), {{"", 24.0, 2}, {"", 168.0, 1}});
  cfg.replicates = 200;

  cfg.pbb_mode = PbbMode::Off;
  auto off = run_analysis(cfg);
  for (const auto& c : off.components) {
    CHECK_FALSE(c.pbb);
    CHECK_FALSE(c.width_ratio_vs_pbb);
  }

  cfg.pbb_mode = PbbMode::Fixed24;
  auto fixed = run_analysis(cfg);
  REQUIRE(fixed.components[2].pbb);
  CHECK(fixed.components[2].pbb->period_samples == 168);
  // Projected 24 h band repeats every day.
  for (std::size_t s = 0; s < 168; ++s)
    CHECK(fixed.components[2].pbb->lower[s] == fixed.components[0].pbb->lower[s % 24]);
  REQUIRE(fixed.combined);
  CHECK(fixed.combined->width_ratio_vs_pbb);

  cfg.pbb_mode = PbbMode::PerComponent;
  auto per = run_analysis(cfg);
  CHECK(per.components[0].pbb->lower == fixed.components[0].pbb->lower);
  CHECK(per.components[2].pbb->period_samples == 168);
  CHECK_FALSE(per.combined->width_ratio_vs_pbb);
}

TEST_CASE("override_m is used verbatim") {
  auto cfg = config_for(daily_spec(10, 5, 10, 2), {{"", 24.0, 1}});
  cfg.replicates = 50;
  cfg.override_m = 101;
  const auto result = run_analysis(cfg);
  CHECK(result.plan.m == 101);
  CHECK(result.bandwidth_rule == "override");
  cfg.override_m = 100;
  CHECK_THROWS_AS(run_analysis(cfg), Error);
}

TEST_CASE("errors name the failing stage") {
  SyntheticSpec two_days = daily_spec(10, 5, 1, 2);
  two_days.length_samples = 48;
  auto cfg = config_for(two_days, {{"", 24.0, 1}});
  cfg.replicates = 20;
  try {
    run_analysis(cfg);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeriesShorterThanWindow);
    CHECK(e.message().find("stage 'VBPBB bootstrap (daily)'") != std::string::npos);
  }

  cfg = config_for(daily_spec(10, 5, 4, 2), {{"", 7.5, 1}});
  try {
    run_analysis(cfg);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.message().find("stage 'enumerate components'") != std::string::npos);
  }

  AnalysisConfig missing;
  missing.input = fs::temp_directory_path() / "vbpbb_missing_input.csv";
  missing.components = {{"", 24.0, 1}};
  try {
    run_analysis(missing);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
    CHECK(e.message().find("stage 'ingest'") != std::string::npos);
  }
}

TEST_CASE("outputs: files, row counts and summary round trip") {
  SyntheticSpec spec = daily_spec(10, 5, 10, 3);
  spec.components.push_back({168.0, Waveform::Cosine, 5.0});
  auto cfg = config_for(spec, {{"", 24.0, 2}, {"", 168.0, 1}});
  cfg.replicates = 300;
  cfg.plots = true;
  cfg.write_periodogram = true;
  const auto result = run_analysis(cfg);
  const auto dir = fresh_dir("outputs");
  emit_outputs(result, dir);

  for (const char* f : {"bands.csv", "families.csv", "combined.csv", "summary.json", "periodogram.csv",
                        "plots/daily.svg", "plots/daily-second-harmonic.svg", "plots/weekly.svg",
                        "plots/family-daily.svg"})
    CHECK_MESSAGE(fs::exists(dir / f), f);

  const auto bands = slurp(dir / "bands.csv");
  CHECK(bands.rfind("component,phase_index,phase_time_hours,lower,median,upper,method\n", 0) == 0);
  CHECK(line_count(bands) == 1 + 2 * (24 + 24 + 168));

  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["n_samples"] == 1680);
  CHECK(summary["filter"]["m"] == result.plan.m);
  CHECK(summary["grand_mean"].get<double>() == doctest::Approx(result.grand_mean));
  REQUIRE(summary["components"].size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = summary["components"][i];
    const auto& band = result.components[i].vbpbb;
    CHECK(row["significant"].get<bool>() == band.significant);
    CHECK(row["significant"].get<bool>() == (row["gap"].get<double>() > 0));
    CHECK(row["lower_range"][0].get<double>() == band.lower_range.first);
    CHECK(row["lower_range"][1].get<double>() == band.lower_range.second);
    CHECK(row["upper_range"][0].get<double>() == band.upper_range.first);
    CHECK(row["upper_range"][1].get<double>() == band.upper_range.second);
    CHECK(row["frequency"].get<double>() == doctest::Approx(result.components[i].spec.frequency()));
    CHECK(row["width_ratio_vs_pbb"].is_number());
  }
  CHECK(summary["combined"]["r_squared"].is_number());

  const auto svg = slurp(dir / "plots/daily.svg");
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("VBPBB") != std::string::npos);
  CHECK(svg.find("PBB<") != std::string::npos);
}

TEST_CASE("outputs: a two-sample period writes two rows per method") {
  SyntheticSpec spec;
  spec.length_samples = 400;
  spec.components = {{2.0, Waveform::Cosine, 3.0}};
  spec.noise_sd = 1.0;
  auto cfg = config_for(spec, {{"", 2.0, 1}});
  cfg.replicates = 50;
  cfg.override_m = 5;
  const auto dir = fresh_dir("period2");
  emit_outputs(run_analysis(cfg), dir);
  const auto bands = slurp(dir / "bands.csv");
  CHECK(line_count(bands) == 1 + 2 + 2);
  CHECK(std::count(bands.begin(), bands.end(), 'V') == 2);
}

TEST_CASE("outputs are byte identical across runs and thread counts") {
  SyntheticSpec spec = daily_spec(10, 5, 10, 8);
  auto cfg = config_for(spec, {{"", 24.0, 2}, {"", 168.0, 1}});
  cfg.replicates = 200;
  cfg.threads = 1;
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b"), c = fresh_dir("det_c");
  emit_outputs(run_analysis(cfg), a);
  emit_outputs(run_analysis(cfg), b);
  cfg.threads = 6;
  emit_outputs(run_analysis(cfg), c);
  for (const char* f : {"bands.csv", "summary.json", "families.csv", "combined.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK(slurp(a / f) == slurp(c / f));
  }
}

TEST_CASE("config parsing") {
  const auto cfg = parse_analysis_config(R"({
    "input": "load.csv", "timestamp_column": "Tarih", "value_column": "Tuketim",
    "decimal_comma": true, "delimiter": ";", "step_hours": 1,
    "components": [{"period_hours": 24, "n_harmonics": 4}, {"label": "year", "period_hours": 8736, "n_harmonics": 3}],
    "B": 500, "seed": 9, "alpha": 0.1, "override_m": 8760, "pbb_mode": "fixed24",
    "out_dir": "out", "plots": true, "periodogram": true, "threads": 4
  })");
  CHECK(cfg.input == fs::path("load.csv"));
  CHECK(cfg.csv.timestamp_column == "Tarih");
  CHECK(cfg.csv.delimiter == ';');
  CHECK(cfg.csv.decimal_comma);
  REQUIRE(cfg.components.size() == 2);
  CHECK(cfg.components[0].n_harmonics == 4);
  CHECK(cfg.components[1].label == "year");
  CHECK(cfg.replicates == 500);
  CHECK(cfg.seed == 9);
  CHECK(cfg.alpha == 0.1);
  CHECK(cfg.override_m == 8760u);
  CHECK(cfg.pbb_mode == PbbMode::Fixed24);
  CHECK(cfg.out_dir == fs::path("out"));
  CHECK(cfg.plots);
  CHECK(cfg.write_periodogram);
  CHECK(cfg.threads == 4);

  const auto syn = parse_analysis_config(R"({"synthetic": {"length_samples": 100,
    "components": [{"period_samples": 24, "amplitude": 2, "waveform": "square"}], "noise_sd": 1,
    "start_time": "2020-01-01T00:00"}, "components": [{"period_hours": 24}]})");
  REQUIRE(syn.synthetic);
  CHECK(syn.synthetic->components[0].waveform == Waveform::Square);
  CHECK(syn.synthetic->start_time == parse_timestamp("2020-01-01"));

  for (const char* bad : {R"({"components": [{"period_hours": 24}]})",
                          R"({"input": "x.csv"})",
                          R"({"input": "x.csv", "components": [{"period_hours": 24}], "bogus": 1})",
                          R"({"input": "x.csv", "components": [{"period_hours": 24}], "B": "many"})",
                          R"({"input": "x.csv", "components": [{"period_hours": 24}], "pbb_mode": "sometimes"})",
                          R"({"input": "x.csv", "components": [{"period_hours": 24}], "alpha": 1.5})",
                          R"([1, 2])", R"({not json)"}) {
    CAPTURE(bad);
    try {
      parse_analysis_config(bad);
      FAIL("accepted a bad config");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
  }
}

TEST_CASE("analysis of an ingested CSV matches the in-memory series") {
  const auto spec = daily_spec(10, 5, 10, 12);
  const auto series = synthesize(spec);
  const auto dir = fresh_dir("csv");
  fs::create_directories(dir);
  write_series_csv(series, dir / "in.csv", "value");

  AnalysisConfig cfg;
  cfg.input = dir / "in.csv";
  cfg.components = {{"", 24.0, 1}, {"", 168.0, 1}};
  cfg.replicates = 100;
  const auto from_file = run_analysis(cfg);
  const auto in_memory = run_analysis(cfg, ingest_csv(dir / "in.csv"));
  CHECK(summary_json(from_file) == summary_json(in_memory));
  CHECK(from_file.start_time == spec.start_time);
}
