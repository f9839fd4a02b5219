#include "vbpbb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft.hpp"
#include "vbpbb/error.hpp"

namespace vbpbb {

Spectrum periodogram(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::SeriesTooShort, "periodogram needs at least 2 samples");

  const double mean = stable_sum(values) / static_cast<double>(n);
  std::vector<double> centered(values.begin(), values.end());
  for (double& v : centered) v -= mean;

  const auto transform = detail::real_forward_fft(centered);

  Spectrum spectrum;
  const std::size_t half = n / 2;
  spectrum.frequencies.reserve(half);
  spectrum.power.reserve(half);
  for (std::size_t j = 1; j <= half; ++j) {
    spectrum.frequencies.push_back(static_cast<double>(j) / static_cast<double>(n));
    spectrum.power.push_back(std::norm(transform[j]) / static_cast<double>(n));
  }
  return spectrum;
}

Spectrum periodogram(const TimeSeries& series) { return periodogram(series.values()); }

std::string harmonic_label(std::size_t harmonic) {
  static constexpr const char* kOrdinals[] = {"fundamental",      "second harmonic",
                                              "third harmonic",   "fourth harmonic",
                                              "fifth harmonic",   "sixth harmonic",
                                              "seventh harmonic", "eighth harmonic",
                                              "ninth harmonic",   "tenth harmonic"};
  if (harmonic >= 1 && harmonic <= std::size(kOrdinals)) return kOrdinals[harmonic - 1];
  return std::to_string(harmonic) + "th harmonic";
}

std::vector<ComponentSpec> enumerate_harmonics(std::size_t fundamental_period_samples,
                                               std::size_t n_harmonics) {
  if (fundamental_period_samples == 0 || n_harmonics == 0)
    throw Error(ErrorCode::InvalidArgument, "period and harmonic count must be positive");
  std::vector<ComponentSpec> out;
  out.reserve(n_harmonics);
  for (std::size_t j = 1; j <= n_harmonics; ++j) {
    if (2 * j > fundamental_period_samples)
      throw Error(ErrorCode::HarmonicAboveNyquist,
                  "harmonic " + std::to_string(j) + " of period " +
                      std::to_string(fundamental_period_samples) + " exceeds 0.5 cycles/sample");
    out.push_back({harmonic_label(j), fundamental_period_samples, j});
  }
  return out;
}

std::size_t smallest_odd_above(double x) {
  if (!std::isfinite(x) || x < 0.0)
    throw Error(ErrorCode::InvalidArgument, "bandwidth bound must be finite and non-negative");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) x = nearest;
  auto m = static_cast<std::size_t>(std::floor(x)) + 1;
  if (m % 2 == 0) ++m;
  return m;
}

namespace {

void check_override(std::size_t m) {
  if (m % 2 == 0) throw Error(ErrorCode::NotOdd, "override_m " + std::to_string(m) + " is even");
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "override_m must be at least 3");
}

void check_frequencies(std::span<const double> frequencies) {
  for (double v : frequencies) {
    if (!(v > 0.0 && v <= 0.5))
      throw Error(ErrorCode::InvalidArgument, "frequency outside (0, 0.5]");
  }
}

double min_pairwise_spacing(std::span<const double> frequencies) {
  std::vector<double> sorted(frequencies.begin(), frequencies.end());
  std::sort(sorted.begin(), sorted.end());
  double spacing = INFINITY;
  for (std::size_t i = 1; i < sorted.size(); ++i) spacing = std::min(spacing, sorted[i] - sorted[i - 1]);
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequencies must be distinct");
  return spacing;
}

} // namespace

FrequencyPlan plan_bandwidth(std::span<const double> frequencies,
                             std::optional<std::size_t> override_m) {
  check_frequencies(frequencies);
  FrequencyPlan plan;
  if (frequencies.size() >= 2) plan.min_spacing = min_pairwise_spacing(frequencies);

  if (override_m) {
    check_override(*override_m);
    plan.m = *override_m;
  } else {
    if (frequencies.size() < 2)
      throw Error(ErrorCode::NeedTwoFrequencies,
                  "bandwidth planning needs two frequencies or an explicit m");
    plan.m = smallest_odd_above(2.0 / *plan.min_spacing);
  }
  plan.k = 1;
  return plan;
}

FrequencyPlan plan_bandwidth(std::vector<ComponentSpec> components,
                             std::optional<std::size_t> override_m) {
  std::vector<double> frequencies;
  frequencies.reserve(components.size());
  for (const auto& c : components) frequencies.push_back(c.frequency());
  auto plan = plan_bandwidth(frequencies, override_m);
  plan.components = std::move(components);
  return plan;
}

} // namespace vbpbb
