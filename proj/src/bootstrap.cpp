#include "vbpbb/bootstrap.hpp"

#include <algorithm>

#include "parallel.hpp"
#include "vbpbb/error.hpp"

namespace vbpbb {

const char* to_string(BootstrapMode mode) noexcept {
  return mode == BootstrapMode::PBB ? "PBB" : "VBPBB";
}

BootstrapEnsemble::BootstrapEnsemble(std::size_t replicates, std::size_t period_samples,
                                     BootstrapMode mode, std::string label)
    : replicates_(replicates), period_(period_samples), mode_(mode), label_(std::move(label)),
      profiles_(replicates * period_samples, 0.0) {
  if (replicates_ == 0 || period_ == 0)
    throw Error(ErrorCode::InvalidArgument, "ensemble dimensions must be positive");
}

void BootstrapEnsemble::rotate_phases(std::size_t shift) {
  shift %= period_;
  if (shift == 0) return;
  for (std::size_t r = 0; r < replicates_; ++r) {
    auto row = profile(r);
    std::rotate(row.rbegin(), row.rbegin() + static_cast<std::ptrdiff_t>(shift), row.rend());
  }
}

namespace {

void check_resample_args(std::size_t n, std::size_t p) {
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "block length must be >= 1");
  if (p > n)
    throw Error(ErrorCode::PeriodExceedsLength, "period " + std::to_string(p) +
                                                    " exceeds series length " + std::to_string(n));
}

// Admissible source starts are 0, p, 2p, ... <= n - p; destination blocks all
// start at multiples of p.
class BlockSampler {
public:
  BlockSampler(std::size_t n, std::size_t p) : starts_((n - p) / p + 1), p_(p) {}

  std::size_t draw(Rng& rng) {
    return p_ * std::uniform_int_distribution<std::size_t>(0, starts_ - 1)(rng);
  }

private:
  std::size_t starts_;
  std::size_t p_;
};

} // namespace

std::vector<double> pbb_resample(std::span<const double> values, std::size_t period_samples,
                                 Rng& rng, std::vector<std::size_t>* source_indices) {
  const std::size_t n = values.size();
  const std::size_t p = period_samples;
  check_resample_args(n, p);

  BlockSampler sampler(n, p);
  std::vector<double> out(n);
  if (source_indices) source_indices->resize(n);
  for (std::size_t d = 0; d < n; d += p) {
    const std::size_t s = sampler.draw(rng);
    const std::size_t len = std::min(p, n - d);
    for (std::size_t j = 0; j < len; ++j) {
      out[d + j] = values[s + j];
      if (source_indices) (*source_indices)[d + j] = s + j;
    }
  }
  return out;
}

BootstrapEnsemble bootstrap_periodic_means(std::span<const double> values,
                                           const BootstrapConfig& config, BootstrapMode mode,
                                           std::string label) {
  const std::size_t n = values.size();
  const std::size_t p = config.block_samples;
  check_resample_args(n, p);
  if (config.replicates == 0) throw Error(ErrorCode::InvalidArgument, "B must be >= 1");

  std::vector<double> counts(p);
  for (std::size_t s = 0; s < p; ++s)
    counts[s] = static_cast<double>((n - s + p - 1) / p);

  BootstrapEnsemble ensemble(config.replicates, p, mode, std::move(label));
  parallel_for(config.replicates, config.threads, [&](std::size_t begin, std::size_t end) {
    BlockSampler sampler(n, p);
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng = make_stream(config.seed, r);
      auto sums = ensemble.profile(r);
      // Same per-phase summation order as periodic_mean(pbb_resample(...)).
      for (std::size_t d = 0; d < n; d += p) {
        const std::size_t s = sampler.draw(rng);
        const std::size_t len = std::min(p, n - d);
        for (std::size_t j = 0; j < len; ++j) sums[j] += values[s + j];
      }
      for (std::size_t s = 0; s < p; ++s) sums[s] /= counts[s];
    }
  });
  return ensemble;
}

BootstrapEnsemble vbpbb_component(const TimeSeries& series, const ComponentSpec& component,
                                  std::size_t filter_m, BootstrapConfig config,
                                  const FilterOptions& filter_options) {
  const KzftConfig kz{filter_m, 1, component.frequency()};
  const auto complex_series = kzft_apply(series, kz, filter_options);
  const TimeSeries filtered = reconstruct_real(complex_series, kz.v);

  const std::size_t p = component.period_samples;
  if (filtered.size() < p)
    throw Error(ErrorCode::PeriodExceedsLength,
                "component '" + component.label + "' period " + std::to_string(p) +
                    " exceeds filtered length " + std::to_string(filtered.size()) +
                    " (window m = " + std::to_string(filter_m) + ")");

  config.block_samples = p;
  auto ensemble =
      bootstrap_periodic_means(filtered.values(), config, BootstrapMode::VBPBB, component.label);
  // Filtered index i is source index i + start_offset.
  ensemble.rotate_phases(complex_series.start_offset % p);
  return ensemble;
}

} // namespace vbpbb
