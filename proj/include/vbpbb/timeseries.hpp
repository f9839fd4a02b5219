#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vbpbb {

using Timestamp = std::chrono::sys_seconds;

// Uniformly sampled real-valued series. Sample i sits at
// start_time + i * step_hours. Values are finite and non-empty; the
// constructor enforces both.
class TimeSeries {
public:
  explicit TimeSeries(std::vector<double> values, Timestamp start_time = Timestamp{},
             double step_hours = 1.0, std::string name = {});

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  Timestamp start_time() const noexcept { return start_time_; }
  double step_hours() const noexcept { return step_hours_; }
  const std::string& name() const noexcept { return name_; }

  // Timestamp of sample i, rounded to whole seconds.
  Timestamp time_at(std::size_t i) const noexcept;

  // Copy with the same sampling grid and new values.
  TimeSeries with_values(std::vector<double> values) const;

private:
  std::vector<double> values_;
  Timestamp start_time_;
  double step_hours_;
  std::string name_;
};

struct PeriodicMeanProfile {
  std::size_t period_samples = 0;
  std::vector<double> means;
  std::vector<std::size_t> counts;
};

struct CenteredSeries {
  TimeSeries series;
  double grand_mean;
};

// Compensated (Neumaier) sum.
double stable_sum(std::span<const double> values) noexcept;

CenteredSeries center(const TimeSeries& series);

// Per-phase averages at the given period. Partial final cycles count, so
// counts may differ by one across phases.
PeriodicMeanProfile periodic_mean(std::span<const double> values, std::size_t period_samples);
PeriodicMeanProfile periodic_mean(const TimeSeries& series, std::size_t period_samples);

constexpr std::size_t phase_of(std::size_t index, std::size_t period_samples) noexcept {
  return index % period_samples;
}

} // namespace vbpbb
