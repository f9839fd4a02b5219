#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vbpbb/kzft.hpp"
#include "vbpbb/rng.hpp"
#include "vbpbb/spectral.hpp"
#include "vbpbb/timeseries.hpp"

namespace vbpbb {

struct BootstrapConfig {
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  std::size_t block_samples = 1;
  // Worker threads for replicates; 0 picks hardware concurrency. Output is
  // identical for every value.
  std::size_t threads = 1;
};

enum class BootstrapMode { PBB, VBPBB };

const char* to_string(BootstrapMode mode) noexcept;

// B x p matrix of replicate periodic-mean profiles, row-major by replicate.
class BootstrapEnsemble {
public:
  BootstrapEnsemble(std::size_t replicates, std::size_t period_samples, BootstrapMode mode,
                    std::string label);

  std::size_t replicates() const noexcept { return replicates_; }
  std::size_t period_samples() const noexcept { return period_; }
  BootstrapMode mode() const noexcept { return mode_; }
  const std::string& label() const noexcept { return label_; }

  std::span<const double> profile(std::size_t r) const noexcept {
    return {profiles_.data() + r * period_, period_};
  }
  std::span<double> profile(std::size_t r) noexcept {
    return {profiles_.data() + r * period_, period_};
  }
  double at(std::size_t r, std::size_t s) const noexcept { return profiles_[r * period_ + s]; }

  // Rotates every profile so that phase s moves to (s + shift) mod p.
  void rotate_phases(std::size_t shift);

private:
  std::size_t replicates_;
  std::size_t period_;
  BootstrapMode mode_;
  std::string label_;
  std::vector<double> profiles_;
};

// Periodic block bootstrap resample with blocks of exactly one period.
// Destination block d takes a source block starting at s = d (mod p) with
// s + p <= n; the final block is truncated when p does not divide n. When
// `source_indices` is non-null it receives the source index of every output
// position.
std::vector<double> pbb_resample(std::span<const double> values, std::size_t period_samples,
                                 Rng& rng, std::vector<std::size_t>* source_indices = nullptr);

// Replicate r resamples with make_stream(config.seed, r) and keeps the
// periodic mean of the resample at period config.block_samples.
BootstrapEnsemble bootstrap_periodic_means(std::span<const double> values,
                                           const BootstrapConfig& config,
                                           BootstrapMode mode = BootstrapMode::PBB,
                                           std::string label = {});

// Filters the series at the component frequency (window filter_m, k = 1),
// reconstructs the real component and bootstraps it with one-period blocks.
// Profiles are indexed by phase of the unfiltered series.
BootstrapEnsemble vbpbb_component(const TimeSeries& series, const ComponentSpec& component,
                                  std::size_t filter_m, BootstrapConfig config,
                                  const FilterOptions& filter_options = {});

} // namespace vbpbb
