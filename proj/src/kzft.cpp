#include "vbpbb/kzft.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "fft.hpp"
#include "parallel.hpp"
#include "vbpbb/error.hpp"

namespace vbpbb {

void KzftConfig::validate() const {
  if (m < 3 || m % 2 == 0)
    throw Error(m % 2 == 0 ? ErrorCode::NotOdd : ErrorCode::InvalidArgument,
                "KZFT window m must be odd and >= 3, got " + std::to_string(m));
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "KZFT iterations k must be >= 1");
  if (!(v >= 0.0 && v <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "KZFT frequency must lie in [0, 0.5]");
}

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

template <class T>
std::vector<T> convolve_ones(std::size_t m, std::size_t k) {
  std::vector<T> coefs(m, T{1});
  for (std::size_t iter = 1; iter < k; ++iter) {
    std::vector<T> next(coefs.size() + m - 1, T{0});
    // Sliding window sum: next[j] = sum_{i=j-m+1}^{j} coefs[i].
    for (std::size_t j = 0; j < next.size(); ++j) {
      const std::size_t lo = j + 1 >= m ? j + 1 - m : 0;
      const std::size_t hi = std::min(j, coefs.size() - 1);
      T acc{0};
      for (std::size_t i = lo; i <= hi; ++i) acc += coefs[i];
      next[j] = acc;
    }
    coefs = std::move(next);
  }
  return coefs;
}

// exp(-i 2 pi v u) weighted by a_u / m^k, indexed u + half_width.
std::vector<std::complex<double>> kernel(const KzftConfig& config) {
  const auto coefs = kzft_coefficients(config.m, config.k);
  const double norm = std::pow(static_cast<double>(config.m), static_cast<double>(config.k));
  const auto hw = static_cast<std::int64_t>(config.half_width());
  std::vector<std::complex<double>> h(coefs.size());
  for (std::int64_t u = -hw; u <= hw; ++u) {
    // Reduce v*u mod 1 before scaling by 2 pi to keep the phase accurate for
    // long windows.
    const double cycles = config.v * static_cast<double>(u);
    const double frac = cycles - std::round(cycles);
    const double phase = -2.0 * std::numbers::pi * frac;
    h[static_cast<std::size_t>(u + hw)] =
        std::polar(coefs[static_cast<std::size_t>(u + hw)] / norm, phase);
  }
  return h;
}

void apply_direct(std::span<const double> x, std::span<const std::complex<double>> h,
                  std::vector<std::complex<double>>& out, std::size_t threads) {
  const std::size_t window = h.size();
  parallel_for(out.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      std::complex<double> acc{0.0, 0.0};
      const double* xs = x.data() + t;
      for (std::size_t j = 0; j < window; ++j) acc += h[j] * xs[j];
      out[t] = acc;
    }
  });
}

std::size_t fft_size(std::size_t n) {
  std::size_t size = 1;
  while (size < n) size <<= 1;
  return size;
}

void apply_fft(std::span<const double> x, std::span<const std::complex<double>> h,
               std::vector<std::complex<double>>& out) {
  const std::size_t window = h.size();
  const std::size_t size = fft_size(x.size() + window - 1);
  std::vector<std::complex<double>> a(size), b(size);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  // Reversed kernel turns the correlation into a convolution.
  for (std::size_t j = 0; j < window; ++j) b[j] = h[window - 1 - j];
  detail::complex_fft(a, false);
  detail::complex_fft(b, false);
  for (std::size_t i = 0; i < size; ++i) a[i] *= b[i];
  detail::complex_fft(a, true);
  const double scale = 1.0 / static_cast<double>(size);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = a[t + window - 1] * scale;
}

} // namespace

std::vector<double> kzft_coefficients(std::size_t m, std::size_t k) {
  if (m < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "m and k must be positive");
  const double total = std::pow(static_cast<double>(m), static_cast<double>(k));
  if (total < kExactLimit) {
    const auto exact = convolve_ones<std::uint64_t>(m, k);
    return {exact.begin(), exact.end()};
  }
  return convolve_ones<double>(m, k);
}

ComplexComponentSeries kzft_apply(const TimeSeries& series, const KzftConfig& config,
                                  const FilterOptions& options) {
  config.validate();
  const std::size_t n = series.size();
  const std::size_t window = config.window_length();
  if (n < window)
    throw Error(ErrorCode::SeriesShorterThanWindow,
                "series of length " + std::to_string(n) + " is shorter than filter window " +
                    std::to_string(window));

  const auto h = kernel(config);
  ComplexComponentSeries result;
  result.values.resize(n - window + 1);
  result.start_offset = config.half_width();
  result.source_length = n;
  result.source_start = series.start_time();
  result.step_hours = series.step_hours();
  result.name = series.name();

  FilterPath path = options.path;
  if (path == FilterPath::Auto) path = window >= 256 ? FilterPath::Fft : FilterPath::Direct;
  if (path == FilterPath::Fft)
    apply_fft(series.values(), h, result.values);
  else
    apply_direct(series.values(), h, result.values, options.threads);
  return result;
}

TimeSeries reconstruct_real(const ComplexComponentSeries& component, double v) {
  const double factor = (v > 0.0 && v < 0.5) ? 2.0 : 1.0;
  std::vector<double> values;
  values.reserve(component.values.size());
  for (const auto& z : component.values) values.push_back(factor * z.real());
  const auto offset_seconds = std::llround(static_cast<double>(component.start_offset) *
                                           component.step_hours * 3600.0);
  return TimeSeries(std::move(values),
                    component.source_start + std::chrono::seconds(offset_seconds),
                    component.step_hours, component.name);
}

TimeSeries kzft_filter(const TimeSeries& series, const KzftConfig& config,
                       const FilterOptions& options) {
  return reconstruct_real(kzft_apply(series, config, options), config.v);
}

} // namespace vbpbb
