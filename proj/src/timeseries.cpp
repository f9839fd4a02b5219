#include "vbpbb/timeseries.hpp"

#include <cmath>

#include "vbpbb/error.hpp"

namespace vbpbb {

TimeSeries::TimeSeries(std::vector<double> values, Timestamp start_time, double step_hours,
                       std::string name)
    : values_(std::move(values)), start_time_(start_time), step_hours_(step_hours),
      name_(std::move(name)) {
  if (values_.empty()) throw Error(ErrorCode::InvalidArgument, "time series is empty");
  if (!(step_hours_ > 0.0) || !std::isfinite(step_hours_))
    throw Error(ErrorCode::InvalidArgument, "step_hours must be positive");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::InvalidArgument,
                  "non-finite value at index " + std::to_string(i));
  }
}

Timestamp TimeSeries::time_at(std::size_t i) const noexcept {
  const double seconds = static_cast<double>(i) * step_hours_ * 3600.0;
  return start_time_ + std::chrono::seconds(static_cast<long long>(std::llround(seconds)));
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
  return TimeSeries(std::move(values), start_time_, step_hours_, name_);
}

double stable_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

CenteredSeries center(const TimeSeries& series) {
  const auto values = series.values();
  const double mean = stable_sum(values) / static_cast<double>(values.size());
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v -= mean;
  return {series.with_values(std::move(out)), mean};
}

PeriodicMeanProfile periodic_mean(std::span<const double> values, std::size_t period_samples) {
  if (period_samples == 0) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  if (period_samples > values.size())
    throw Error(ErrorCode::PeriodExceedsLength,
                "period " + std::to_string(period_samples) + " exceeds series length " +
                    std::to_string(values.size()));

  PeriodicMeanProfile profile;
  profile.period_samples = period_samples;
  profile.means.assign(period_samples, 0.0);
  profile.counts.assign(period_samples, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t s = phase_of(i, period_samples);
    profile.means[s] += values[i];
    ++profile.counts[s];
  }
  for (std::size_t s = 0; s < period_samples; ++s)
    profile.means[s] /= static_cast<double>(profile.counts[s]);
  return profile;
}

PeriodicMeanProfile periodic_mean(const TimeSeries& series, std::size_t period_samples) {
  return periodic_mean(series.values(), period_samples);
}

} // namespace vbpbb
