#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "vbpbb/timeseries.hpp"

namespace vbpbb {

// Kolmogorov-Zurbenko Fourier transform filter parameters: window length m
// (odd, >= 3), iterations k (>= 1), centre frequency v in cycles/sample.
struct KzftConfig {
  std::size_t m = 3;
  std::size_t k = 1;
  double v = 0.0;

  void validate() const;
  // Samples lost at each edge of the series.
  std::size_t half_width() const noexcept { return k * (m - 1) / 2; }
  std::size_t window_length() const noexcept { return k * (m - 1) + 1; }
};

// Complex filter output over the fully supported interior of the source.
// values[i] belongs to source index start_offset + i.
struct ComplexComponentSeries {
  std::vector<std::complex<double>> values;
  std::size_t start_offset = 0;
  std::size_t source_length = 0;
  Timestamp source_start{};
  double step_hours = 1.0;
  std::string name;
};

// Coefficients of (1 + z + ... + z^{m-1})^k, lowest power first. Computed in
// exact integer arithmetic while m^k < 2^53, in double precision beyond.
std::vector<double> kzft_coefficients(std::size_t m, std::size_t k);

enum class FilterPath { Auto, Direct, Fft };

struct FilterOptions {
  FilterPath path = FilterPath::Auto;
  // Worker threads for the direct path; 0 picks hardware concurrency.
  std::size_t threads = 1;
};

// out(t) = sum_u (a_u / m^k) exp(-i 2 pi v u) X(t + u), |u| <= k(m-1)/2, for
// every t whose window lies inside the series.
ComplexComponentSeries kzft_apply(const TimeSeries& series, const KzftConfig& config,
                                  const FilterOptions& options = {});

// Real component series: 2 Re(out) for 0 < v < 0.5, Re(out) at v = 0 or 0.5.
// The result starts start_offset samples after the source start.
TimeSeries reconstruct_real(const ComplexComponentSeries& component, double v);

// kzft_apply followed by reconstruct_real.
TimeSeries kzft_filter(const TimeSeries& series, const KzftConfig& config,
                       const FilterOptions& options = {});

} // namespace vbpbb
