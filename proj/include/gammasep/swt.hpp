#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gammasep/signal.hpp"
#include "gammasep/wavelets.hpp"

namespace gammasep {

/// Raised when a coefficient set is internally inconsistent.
class InvalidStructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undecimated wavelet coefficients. Index 0 holds level 1.
///
/// Every sequence has `source_length` samples. The lag vectors give, per
/// level, the energy centroid of the equivalent analysis filter: a feature at
/// input sample t shows up near coefficient index t + lag.
struct WaveletCoefficients {
    std::vector<Samples> approximations;
    std::vector<Samples> details;
    std::size_t source_length = 0;
    std::vector<std::size_t> approximation_lags;
    std::vector<std::size_t> detail_lags;

    std::size_t levels() const { return details.size(); }
    const Samples& detail(std::size_t level) const { return details.at(level - 1); }
    const Samples& approximation(std::size_t level) const { return approximations.at(level - 1); }
    const Samples& deepest_approximation() const { return approximations.back(); }
    std::size_t detail_lag(std::size_t level) const { return detail_lags.at(level - 1); }
    std::size_t approximation_lag(std::size_t level) const {
        return approximation_lags.at(level - 1);
    }

    /// Throws InvalidStructureError when levels or lengths disagree.
    void validate() const;

    /// Same structure with every coefficient set to zero.
    WaveletCoefficients zeros_like() const;
};

/// À-trous dilation: 2^(level-1) - 1 zeros between consecutive taps.
std::vector<double> upsample_filter(std::span<const double> taps, int level);

/// y[n] = sum_k taps[k] * x[(n - stride*k) mod N], summed in ascending k.
Samples circular_convolve(std::span<const double> x, std::span<const double> taps,
                          std::size_t stride = 1);

/// One synthesis step of the undecimated inverse:
/// a_{j-1}[n] = (lo_part[n] + hi_part[n]) / 2 with each part a strided
/// circular filtering by the synthesis taps.
Samples synthesis_branch(std::span<const double> coeffs, std::span<const double> rec_taps,
                         std::size_t stride);
Samples combine_branches(std::span<const double> lo_part, std::span<const double> hi_part);

/// Stationary wavelet decomposition with periodic boundaries.
/// Requires levels >= 1 and 2^levels <= x.size().
WaveletCoefficients swt_decompose(std::span<const double> x, const FilterPair& filters,
                                  int levels);

/// Inverse transform using the details and the deepest approximation.
Samples iswt_reconstruct(const WaveletCoefficients& coeffs, const FilterPair& filters);

/// Smallest level j whose nominal detail band [fs/2^(j+1), fs/2^j) holds freq_hz.
int level_for_frequency(double freq_hz, double sample_rate_hz);

/// Energy centroid (in samples) of the level-j equivalent filter.
std::size_t equivalent_filter_lag(const FilterPair& filters, int level, bool detail);

} // namespace gammasep
