#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vbpbb/timeseries.hpp"

namespace vbpbb {

enum class Waveform { Cosine, Square };

struct SyntheticComponent {
  double period_samples = 24.0;
  Waveform waveform = Waveform::Cosine;
  double amplitude = 1.0;
  // Odd harmonics summed for the square waveform (1, 3, 5, ... up to this many terms).
  std::size_t square_terms = 3;
};

struct SyntheticSpec {
  std::size_t length_samples = 0;
  std::vector<SyntheticComponent> components;
  double noise_sd = 0.0;
  double trend_slope = 0.0;
  std::uint64_t seed = 0;
  Timestamp start_time{};
  double step_hours = 1.0;
  std::string name = "synthetic";

  void validate() const;
};

// Noise-free part: trend * t + sum of the component waveforms.
std::vector<double> deterministic_signal(const SyntheticSpec& spec);

// deterministic_signal plus N(0, noise_sd^2) noise from a generator seeded by
// spec.seed.
TimeSeries synthesize(const SyntheticSpec& spec);

} // namespace vbpbb
