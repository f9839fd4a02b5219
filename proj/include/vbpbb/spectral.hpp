#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbpbb/timeseries.hpp"

namespace vbpbb {

// Periodogram ordinates at the positive Fourier frequencies j/n, j = 1..n/2.
//
// Normalization: power[j] = |sum_t x_t exp(-2 pi i j t / n)|^2 / n on the
// mean-centered series, so that
//   sum_{0<j<n/2} 2 * power[j] + (n even ? power[n/2] : 0) = n * var(x)
// with var the population variance.
struct Spectrum {
  std::vector<double> frequencies;  // cycles/sample, strictly increasing in (0, 0.5]
  std::vector<double> power;
};

Spectrum periodogram(const TimeSeries& series);
Spectrum periodogram(std::span<const double> values);

// A periodic component: the j-th harmonic of a fundamental period p has
// frequency j/p cycles/sample. The profile and bootstrap block length of every
// harmonic is the fundamental period, which is the smallest integer period
// shared by the whole harmonic family.
struct ComponentSpec {
  std::string label;
  std::size_t period_samples = 0;
  std::size_t harmonic = 1;

  double frequency() const noexcept {
    return static_cast<double>(harmonic) / static_cast<double>(period_samples);
  }
};

std::string harmonic_label(std::size_t harmonic);

std::vector<ComponentSpec> enumerate_harmonics(std::size_t fundamental_period_samples,
                                               std::size_t n_harmonics);

struct FrequencyPlan {
  std::vector<ComponentSpec> components;
  std::size_t m = 0;
  std::size_t k = 1;
  // Minimum pairwise spacing of the planned frequencies; absent when m came
  // from an override with a single frequency.
  std::optional<double> min_spacing;
};

// Smallest odd integer strictly greater than x. Values within 1e-9 (relative)
// of an integer are snapped to it first so 2/(1/24 - 1/168) yields 57.
std::size_t smallest_odd_above(double x);

FrequencyPlan plan_bandwidth(std::span<const double> frequencies,
                             std::optional<std::size_t> override_m = std::nullopt);

// Same rule over components; the plan keeps them in order.
FrequencyPlan plan_bandwidth(std::vector<ComponentSpec> components,
                             std::optional<std::size_t> override_m = std::nullopt);

} // namespace vbpbb
