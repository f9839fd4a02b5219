#pragma once

#include <complex>
#include <span>
#include <vector>

// Thin FFTW wrappers. Plans use FFTW_ESTIMATE so the chosen algorithm, and
// therefore the rounding, depends only on the transform size.
namespace vbpbb::detail {

// Non-redundant half of the DFT of a real sequence: n/2 + 1 bins.
std::vector<std::complex<double>> real_forward_fft(std::span<const double> input);

// Unnormalized in-place complex transform.
void complex_fft(std::vector<std::complex<double>>& data, bool inverse);

} // namespace vbpbb::detail
