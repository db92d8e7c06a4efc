#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gammasep::detail {

// Thin FFTW wrappers. Planning is serialized internally; execution uses
// FFTW_ESTIMATE plans so results do not depend on timing.

/// Forward real DFT, n/2 + 1 bins, unnormalized.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft for a length-n signal, including the 1/n factor.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

} // namespace gammasep::detail
