#include "fft.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace vbpbb::detail {
namespace {

// fftw_plan_* and fftw_destroy_plan are not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

// fftw_malloc keeps buffer alignment, and hence the selected codelets,
// identical from call to call.
template <class T>
FftwBuffer<T> allocate(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

void run(fftw_plan plan) {
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

} // namespace

std::vector<std::complex<double>> real_forward_fft(std::span<const double> input) {
  const std::size_t n = input.size();
  const std::size_t bins = n / 2 + 1;
  auto in = allocate<double>(n);
  auto out = allocate<fftw_complex>(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(input.begin(), input.end(), in.get());
  run(plan);

  std::vector<std::complex<double>> result(bins);
  for (std::size_t j = 0; j < bins; ++j) result[j] = {out[j][0], out[j][1]};
  return result;
}

void complex_fft(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  auto buf = allocate<fftw_complex>(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t j = 0; j < n; ++j) {
    buf[j][0] = data[j].real();
    buf[j][1] = data[j].imag();
  }
  run(plan);
  for (std::size_t j = 0; j < n; ++j) data[j] = {buf[j][0], buf[j][1]};
}

} // namespace vbpbb::detail
