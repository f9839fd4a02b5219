#include "vbpbb/analysis.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "vbpbb/error.hpp"
#include "vbpbb/kzft.hpp"

namespace vbpbb {

const char* to_string(PbbMode mode) noexcept {
  switch (mode) {
    case PbbMode::PerComponent: return "per-component";
    case PbbMode::Fixed24: return "fixed24";
    case PbbMode::Off: return "off";
  }
  return "off";
}

PbbMode parse_pbb_mode(const std::string& text) {
  if (text == "per-component") return PbbMode::PerComponent;
  if (text == "fixed24") return PbbMode::Fixed24;
  if (text == "off") return PbbMode::Off;
  throw Error(ErrorCode::InvalidArgument,
              "pbb mode must be per-component, fixed24 or off, got '" + text + "'");
}

void AnalysisConfig::validate() const {
  if (!input && !synthetic) throw Error(ErrorCode::InvalidArgument, "config needs an input file or a synthetic spec");
  if (components.empty()) throw Error(ErrorCode::InvalidArgument, "config lists no components");
  if (replicates < 2) throw Error(ErrorCode::InvalidArgument, "B must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (!(csv.step_hours > 0.0)) throw Error(ErrorCode::InvalidArgument, "step_hours must be positive");
  for (const auto& c : components) {
    if (!(c.period_hours > 0.0) || c.n_harmonics == 0)
      throw Error(ErrorCode::InvalidArgument, "component periods and harmonic counts must be positive");
  }
}

namespace {

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "stage '" + name + "': " + e.message());
  }
}

std::size_t samples_for_hours(double hours, double step_hours) {
  const double samples = hours / step_hours;
  const double rounded = std::round(samples);
  if (rounded < 1.0 || std::abs(samples - rounded) > 1e-9 * std::max(1.0, samples))
    throw Error(ErrorCode::InvalidArgument, "period of " + format_number(hours) +
                                                " h is not a whole number of " +
                                                format_number(step_hours) + " h samples");
  return static_cast<std::size_t>(rounded);
}

std::string family_label(const ComponentFamily& family) {
  if (!family.label.empty()) return family.label;
  const double h = family.period_hours;
  if (h == 24.0) return "daily";
  if (h == 168.0) return "weekly";
  if (h >= 8736.0 && h <= 8784.0) return "annual";
  if (h >= 672.0 && h <= 744.0) return "monthly";
  return "period " + format_number(h) + "h";
}

std::string component_label(const std::string& family, std::size_t harmonic) {
  if (harmonic == 1) return family;
  return family + " (" + harmonic_label(harmonic) + ")";
}

// Band with period `period`, looking `band` up at s mod band.period_samples.
std::optional<CiBand> project_band(const CiBand& band, std::size_t period) {
  if (period % band.period_samples != 0) return std::nullopt;
  if (period == band.period_samples) return band;
  CiBand out = band;
  out.period_samples = period;
  out.lower = tile_profile(band.lower, period);
  out.median = tile_profile(band.median, period);
  out.upper = tile_profile(band.upper, period);
  return out;
}

std::optional<double> try_width_ratio(const std::optional<CiBand>& pbb, const CiBand& vbpbb) {
  if (!pbb) return std::nullopt;
  try {
    return width_ratio(*pbb, vbpbb);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AllZeroWidths || e.code() == ErrorCode::IncomparableBands)
      return std::nullopt;
    throw;
  }
}

std::optional<double> try_r_squared(const TimeSeries& centered, const CiBand& band) {
  const TimeSeries fitted = centered.with_values(tile_profile(band.median, centered.size()));
  try {
    return coefficient_of_determination(centered, fitted);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroVariance) return std::nullopt;
    throw;
  }
}

struct PlannedComponent {
  ComponentSpec spec;
  std::string family;
  std::size_t family_index;
};

} // namespace

AnalysisResult run_analysis(const AnalysisConfig& config) {
  config.validate();
  if (config.input) {
    const auto series = stage("ingest", [&] { return ingest_csv(*config.input, config.csv); });
    return run_analysis(config, series);
  }
  auto spec = *config.synthetic;
  spec.step_hours = config.csv.step_hours;
  const auto series = stage("synthesize", [&] { return synthesize(spec); });
  return run_analysis(config, series);
}

AnalysisResult run_analysis(const AnalysisConfig& config, const TimeSeries& series) {
  if (config.components.empty()) throw Error(ErrorCode::InvalidArgument, "config lists no components");
  if (config.replicates < 2) throw Error(ErrorCode::InvalidArgument, "B must be at least 2");

  AnalysisResult result;
  result.config = config;
  result.n_samples = series.size();
  result.start_time = series.start_time();
  result.step_hours = series.step_hours();

  auto centered_pair = center(series);
  const TimeSeries& centered = centered_pair.series;
  result.grand_mean = centered_pair.grand_mean;

  // Components of every family, in config order.
  std::vector<PlannedComponent> planned;
  std::vector<std::string> family_names;
  stage("enumerate components", [&] {
    for (std::size_t f = 0; f < config.components.size(); ++f) {
      const auto& family = config.components[f];
      const std::size_t p = samples_for_hours(family.period_hours, series.step_hours());
      const std::string name = family_label(family);
      family_names.push_back(name);
      for (auto c : enumerate_harmonics(p, family.n_harmonics)) {
        c.label = component_label(name, c.harmonic);
        planned.push_back({c, name, f});
      }
    }
  });

  stage("plan bandwidth", [&] {
    std::vector<ComponentSpec> specs;
    for (const auto& c : planned) specs.push_back(c.spec);
    if (specs.size() == 1 && !config.override_m) {
      // A lone component is kept apart from the zero frequency instead.
      result.plan.components = specs;
      result.plan.m = smallest_odd_above(2.0 / specs.front().frequency());
      result.plan.k = 1;
      result.bandwidth_rule = "dc-spacing";
    } else {
      result.plan = plan_bandwidth(specs, config.override_m);
      result.bandwidth_rule = config.override_m ? "override" : "min-spacing";
    }
  });

  BootstrapConfig boot;
  boot.replicates = config.replicates;
  boot.threads = config.threads;
  const FilterOptions filter_options{FilterPath::Auto, config.threads};

  // PBB comparison bands on the centred raw series, keyed by period.
  std::map<std::size_t, CiBand> pbb_bands;
  auto pbb_band_at = [&](std::size_t period) -> const CiBand& {
    auto it = pbb_bands.find(period);
    if (it != pbb_bands.end()) return it->second;
    const std::string name = "PBB bootstrap (period " + std::to_string(period) + ")";
    return stage(name, [&]() -> const CiBand& {
      BootstrapConfig cfg = boot;
      cfg.block_samples = period;
      cfg.seed = derive_seed(config.seed, 2 * period);
      const auto ensemble = bootstrap_periodic_means(centered.values(), cfg, BootstrapMode::PBB,
                                                     "PBB period " + std::to_string(period));
      return pbb_bands.emplace(period, ci_band(ensemble, config.alpha)).first->second;
    });
  };
  std::optional<std::size_t> fixed_period;
  if (config.pbb_mode == PbbMode::Fixed24)
    fixed_period = stage("PBB setup", [&] { return samples_for_hours(24.0, series.step_hours()); });

  std::vector<std::unique_ptr<BootstrapEnsemble>> ensembles;
  for (std::size_t i = 0; i < planned.size(); ++i) {
    const auto& c = planned[i];
    BootstrapConfig cfg = boot;
    cfg.seed = derive_seed(config.seed, 2 * i + 1);
    ensembles.push_back(std::make_unique<BootstrapEnsemble>(stage(
        "VBPBB bootstrap (" + c.spec.label + ")",
        [&] { return vbpbb_component(centered, c.spec, result.plan.m, cfg, filter_options); })));

    ComponentResult cr{c.spec, c.family, ci_band(*ensembles.back(), config.alpha), {}, {}};
    cr.vbpbb.label = c.spec.label;
    if (config.pbb_mode == PbbMode::PerComponent)
      cr.pbb = pbb_band_at(c.spec.period_samples);
    else if (fixed_period)
      cr.pbb = project_band(pbb_band_at(*fixed_period), c.spec.period_samples);
    if (cr.pbb) cr.pbb->label = c.spec.label;
    cr.width_ratio_vs_pbb = try_width_ratio(cr.pbb, cr.vbpbb);
    result.components.push_back(std::move(cr));
  }

  stage("family bands", [&] {
    for (std::size_t f = 0; f < config.components.size(); ++f) {
      std::vector<const BootstrapEnsemble*> members;
      FamilyResult fr;
      fr.label = family_names[f];
      for (std::size_t i = 0; i < planned.size(); ++i) {
        if (planned[i].family_index != f) continue;
        members.push_back(ensembles[i].get());
        fr.components.push_back(planned[i].spec.label);
      }
      auto combined = combine_components(std::span<const BootstrapEnsemble* const>(members), config.alpha);
      fr.vbpbb = std::move(combined.band);
      fr.vbpbb.label = fr.label;
      fr.period_samples = fr.vbpbb.period_samples;
      if (config.pbb_mode == PbbMode::PerComponent)
        fr.pbb = pbb_band_at(fr.period_samples);
      else if (fixed_period)
        fr.pbb = project_band(pbb_band_at(*fixed_period), fr.period_samples);
      if (fr.pbb) fr.pbb->label = fr.label;
      fr.width_ratio_vs_pbb = try_width_ratio(fr.pbb, fr.vbpbb);
      fr.r_squared = try_r_squared(centered, fr.vbpbb);
      result.families.push_back(std::move(fr));
    }
  });

  stage("combined band", [&] {
    std::vector<const BootstrapEnsemble*> significant;
    for (std::size_t i = 0; i < planned.size(); ++i)
      if (result.components[i].vbpbb.significant) significant.push_back(ensembles[i].get());
    if (significant.empty()) return;
    CombinedResult cr;
    cr.band = combine_components(std::span<const BootstrapEnsemble* const>(significant), config.alpha);
    cr.r_squared = try_r_squared(centered, cr.band.band);
    if (fixed_period) {
      auto pbb = project_band(pbb_band_at(*fixed_period), cr.band.band.period_samples);
      cr.width_ratio_vs_pbb = try_width_ratio(pbb, cr.band.band);
    }
    result.combined = std::move(cr);
  });

  if (config.write_periodogram)
    result.periodogram = stage("periodogram", [&] { return periodogram(centered); });
  return result;
}

} // namespace vbpbb
