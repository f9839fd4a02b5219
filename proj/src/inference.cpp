#include "vbpbb/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vbpbb/error.hpp"

namespace vbpbb {

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Significance significance(std::span<const double> lower, std::span<const double> upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw Error(ErrorCode::InvalidArgument, "band edges must be non-empty and equally long");
  const double max_lower = *std::max_element(lower.begin(), lower.end());
  const double min_upper = *std::min_element(upper.begin(), upper.end());
  const double gap = max_lower - min_upper;
  return {gap > 0.0, gap};
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
}

// Builds a band from per-phase replicate columns produced by `fill(s, column)`.
template <class Fill>
CiBand band_from_columns(std::size_t period, std::size_t replicates, double alpha, Fill&& fill) {
  CiBand band;
  band.period_samples = period;
  band.alpha = alpha;
  band.lower.resize(period);
  band.median.resize(period);
  band.upper.resize(period);
  std::vector<double> column(replicates);
  for (std::size_t s = 0; s < period; ++s) {
    fill(s, column);
    std::sort(column.begin(), column.end());
    band.lower[s] = sorted_quantile(column, alpha / 2.0);
    band.median[s] = sorted_quantile(column, 0.5);
    band.upper[s] = sorted_quantile(column, 1.0 - alpha / 2.0);
  }

  const auto sig = significance(band.lower, band.upper);
  band.significant = sig.significant;
  band.gap = sig.gap;
  const auto [lo_min, lo_max] = std::minmax_element(band.lower.begin(), band.lower.end());
  const auto [up_min, up_max] = std::minmax_element(band.upper.begin(), band.upper.end());
  band.lower_range = {*lo_min, *lo_max};
  band.upper_range = {*up_min, *up_max};
  band.excludes_zero_everywhere = true;
  for (std::size_t s = 0; s < period; ++s) {
    if (band.lower[s] <= 0.0 && 0.0 <= band.upper[s]) {
      band.excludes_zero_everywhere = false;
      break;
    }
  }
  return band;
}

} // namespace

CiBand ci_band(const BootstrapEnsemble& ensemble, double alpha) {
  check_alpha(alpha);
  const std::size_t B = ensemble.replicates();
  if (B < 2) throw Error(ErrorCode::DegenerateEnsemble, "confidence bands need B >= 2");
  auto band = band_from_columns(ensemble.period_samples(), B, alpha,
                                [&](std::size_t s, std::vector<double>& column) {
                                  for (std::size_t r = 0; r < B; ++r) column[r] = ensemble.at(r, s);
                                });
  band.label = ensemble.label();
  return band;
}

CombinedBand combine_components(std::span<const BootstrapEnsemble* const> ensembles,
                                double alpha) {
  check_alpha(alpha);
  if (ensembles.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to combine");
  const std::size_t B = ensembles.front()->replicates();
  std::size_t period = 1;
  for (const auto* e : ensembles) {
    if (e->replicates() != B)
      throw Error(ErrorCode::MismatchedB, "ensembles differ in replicate count");
    period = std::lcm(period, e->period_samples());
    if (period > (std::size_t{1} << 26))
      throw Error(ErrorCode::InvalidArgument, "combined period is too long");
  }
  if (B < 2) throw Error(ErrorCode::DegenerateEnsemble, "confidence bands need B >= 2");

  CombinedBand combined;
  combined.band = band_from_columns(period, B, alpha, [&](std::size_t s, std::vector<double>& column) {
    std::fill(column.begin(), column.end(), 0.0);
    for (const auto* e : ensembles) {
      const std::size_t phase = s % e->period_samples();
      for (std::size_t r = 0; r < B; ++r) column[r] += e->at(r, phase);
    }
  });
  std::string label;
  for (const auto* e : ensembles) {
    combined.contributing_components.push_back(e->label());
    label += (label.empty() ? "" : " + ") + e->label();
  }
  combined.band.label = label;
  return combined;
}

CombinedBand combine_components(const std::vector<BootstrapEnsemble>& ensembles, double alpha) {
  std::vector<const BootstrapEnsemble*> ptrs;
  ptrs.reserve(ensembles.size());
  for (const auto& e : ensembles) ptrs.push_back(&e);
  return combine_components(std::span<const BootstrapEnsemble* const>(ptrs), alpha);
}

double width_ratio(const CiBand& band_a, const CiBand& band_b) {
  const std::size_t pa = band_a.period_samples;
  const std::size_t pb = band_b.period_samples;
  if (pa == 0 || pb == 0 || pb % pa != 0)
    throw Error(ErrorCode::IncomparableBands,
                "band periods " + std::to_string(pa) + " and " + std::to_string(pb) +
                    " are not on a common phase grid");
  std::vector<double> ratios;
  ratios.reserve(pb);
  for (std::size_t s = 0; s < pb; ++s) {
    const double wb = band_b.width(s);
    if (wb == 0.0) continue;
    ratios.push_back(band_a.width(s % pa) / wb);
  }
  if (ratios.empty()) throw Error(ErrorCode::AllZeroWidths, "reference band has zero width everywhere");
  std::sort(ratios.begin(), ratios.end());
  return sorted_quantile(ratios, 0.5);
}

std::vector<double> tile_profile(std::span<const double> profile, std::size_t length,
                                 std::size_t first_phase) {
  if (profile.empty()) throw Error(ErrorCode::InvalidArgument, "empty profile");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = profile[(first_phase + i) % profile.size()];
  return out;
}

double coefficient_of_determination(const TimeSeries& original, const TimeSeries& fitted) {
  if (std::abs(original.step_hours() - fitted.step_hours()) > 1e-12 * original.step_hours())
    throw Error(ErrorCode::InvalidArgument, "series use different sampling steps");
  const double step_seconds = original.step_hours() * 3600.0;
  const double shift =
      static_cast<double>((fitted.start_time() - original.start_time()).count()) / step_seconds;
  const auto offset = static_cast<long long>(std::llround(shift));

  const long long n_orig = static_cast<long long>(original.size());
  const long long n_fit = static_cast<long long>(fitted.size());
  const long long begin = std::max(0LL, offset);
  const long long end = std::min(n_orig, offset + n_fit);
  if (end - begin < 2) throw Error(ErrorCode::NoOverlap, "series do not overlap");

  const auto count = static_cast<std::size_t>(end - begin);
  std::vector<double> x(count), y(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto t = static_cast<std::size_t>(begin) + i;
    x[i] = original[t];
    y[i] = fitted[static_cast<std::size_t>(static_cast<long long>(t) - offset)];
  }
  const double mx = stable_sum(x) / static_cast<double>(count);
  const double my = stable_sum(y) / static_cast<double>(count);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const auto negligible = [&](double ss, double mean) {
    return ss <= 1e-24 * static_cast<double>(count) * std::max(1.0, mean * mean);
  };
  if (negligible(sxx, mx) || negligible(syy, my))
    throw Error(ErrorCode::ZeroVariance, "an aligned series is constant");
  const double r2 = (sxy * sxy) / (sxx * syy);
  return std::clamp(r2, 0.0, 1.0);
}

} // namespace vbpbb
