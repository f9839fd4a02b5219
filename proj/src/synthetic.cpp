#include "vbpbb/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "vbpbb/error.hpp"
#include "vbpbb/rng.hpp"

namespace vbpbb {

void SyntheticSpec::validate() const {
  if (length_samples == 0) throw Error(ErrorCode::InvalidArgument, "synthetic length must be positive");
  if (!(noise_sd >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sd must be >= 0");
  if (!std::isfinite(trend_slope)) throw Error(ErrorCode::InvalidArgument, "trend must be finite");
  if (!(step_hours > 0.0)) throw Error(ErrorCode::InvalidArgument, "step_hours must be positive");
  for (const auto& c : components) {
    if (!(c.amplitude >= 0.0)) throw Error(ErrorCode::InvalidArgument, "amplitudes must be >= 0");
    if (!(c.period_samples > 0.0)) throw Error(ErrorCode::InvalidArgument, "periods must be positive");
    if (c.waveform == Waveform::Square && c.square_terms == 0)
      throw Error(ErrorCode::InvalidArgument, "square waveform needs at least one term");
  }
}

namespace {

double waveform_value(const SyntheticComponent& c, double angle) {
  if (c.waveform == Waveform::Cosine) return std::cos(angle);
  // Fourier series of a unit square wave aligned with cos.
  double sum = 0.0;
  for (std::size_t i = 0; i < c.square_terms; ++i) {
    const double j = static_cast<double>(2 * i + 1);
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::cos(j * angle) / j;
  }
  return 4.0 / std::numbers::pi * sum;
}

} // namespace

std::vector<double> deterministic_signal(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<double> values(spec.length_samples);
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double td = static_cast<double>(t);
    double v = spec.trend_slope * td;
    for (const auto& c : spec.components) {
      // Phase reduced mod 1 so long series keep full precision.
      const double cycles = std::fmod(td, c.period_samples) / c.period_samples;
      v += c.amplitude * waveform_value(c, 2.0 * std::numbers::pi * cycles);
    }
    values[t] = v;
  }
  return values;
}

TimeSeries synthesize(const SyntheticSpec& spec) {
  auto values = deterministic_signal(spec);
  if (spec.noise_sd > 0.0) {
    Rng rng = make_stream(spec.seed, 0);
    std::normal_distribution<double> noise(0.0, spec.noise_sd);
    for (double& v : values) v += noise(rng);
  }
  return TimeSeries(std::move(values), spec.start_time, spec.step_hours, spec.name);
}

} // namespace vbpbb
