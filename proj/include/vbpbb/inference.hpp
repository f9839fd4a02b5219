#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vbpbb/bootstrap.hpp"
#include "vbpbb/timeseries.hpp"

namespace vbpbb {

// Empirical quantile of sorted data: linear interpolation at q * (B - 1),
// 0-indexed.
double sorted_quantile(std::span<const double> sorted, double q);

struct Significance {
  bool significant = false;
  // max(lower) - min(upper); positive when no flat line fits in the band.
  double gap = 0.0;
};

// Flat-line test: significant iff max(lower) > min(upper).
Significance significance(std::span<const double> lower, std::span<const double> upper);

// Per-phase confidence band of bootstrapped periodic means.
struct CiBand {
  std::string label;
  std::size_t period_samples = 0;
  double alpha = 0.05;
  std::vector<double> lower, median, upper;
  bool significant = false;
  double gap = 0.0;
  // (min, max) over phases of the lower and of the upper curve.
  std::pair<double, double> lower_range{}, upper_range{};
  // True when zero lies outside [lower, upper] at every phase.
  bool excludes_zero_everywhere = false;

  double width(std::size_t s) const noexcept { return upper[s] - lower[s]; }
};

struct CombinedBand {
  CiBand band;
  std::vector<std::string> contributing_components;
};

CiBand ci_band(const BootstrapEnsemble& ensemble, double alpha = 0.05);

// Sums replicate r of every ensemble over the LCM of their periods and takes
// per-phase quantiles of the sums.
CombinedBand combine_components(std::span<const BootstrapEnsemble* const> ensembles,
                                double alpha = 0.05);
CombinedBand combine_components(const std::vector<BootstrapEnsemble>& ensembles,
                                double alpha = 0.05);

// Median over phases of width_a / width_b, skipping phases where band b has
// zero width. Band a may have a shorter period that divides band b's, in
// which case it is looked up at s mod period_a.
double width_ratio(const CiBand& band_a, const CiBand& band_b);

// Repeats a profile over `length` samples, starting at phase `first_phase`.
std::vector<double> tile_profile(std::span<const double> profile, std::size_t length,
                                 std::size_t first_phase = 0);

// Squared Pearson correlation over the samples both series cover. The two
// series are aligned by start time and must share the sampling step.
double coefficient_of_determination(const TimeSeries& original, const TimeSeries& fitted);

} // namespace vbpbb
