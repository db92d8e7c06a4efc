#pragma once

#include <optional>
#include <set>
#include <stdexcept>

#include "gammasep/signal.hpp"
#include "gammasep/swt.hpp"

namespace gammasep {

/// Raised when no oscillation can be located (e.g. all-zero coefficients).
class NoDetectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MaskGeometry {
    double duration_ms = 0.0;
    int n_scales = 0;
    bool operator==(const MaskGeometry&) const = default;
};

/// Time window × set of detail levels that keeps oscillatory coefficients.
///
/// The window is expressed in input-sample time; threshold_coeffs moves it
/// onto each level's coefficient grid using that level's filter lag.
class RectMask {
public:
    /// Throws std::invalid_argument for an empty window or empty scale set.
    RectMask(TimeWindow window, std::set<int> scales, double target_freq_hz);

    const TimeWindow& window() const { return window_; }
    const std::set<int>& scales() const { return scales_; }
    double target_freq_hz() const { return target_freq_hz_; }

private:
    TimeWindow window_;
    std::set<int> scales_;
    double target_freq_hz_;
};

struct SeparationResult {
    Samples oscillatory;
    Samples transient;
    RectMask mask_used;
    std::size_t detection_center_sample = 0;
};

struct ThresholdedCoefficients {
    WaveletCoefficients oscillatory;
    WaveletCoefficients transient;
};

struct SeparationOptions {
    int levels = 5;
    std::optional<double> duration_ms_override;
    std::optional<int> n_scales_override;
};

/// Mask duration and scale count for a target frequency: 45/55/85 Hz use the
/// reference table; other frequencies get 9 cycles and 2 scales.
MaskGeometry mask_geometry(double target_freq_hz);

/// The n_scales levels whose nominal bands lie closest to the target in
/// log-frequency, clamped to [1, levels].
std::set<int> mask_scales(double target_freq_hz, double sample_rate_hz, int n_scales, int levels);

/// Signal-time centre of the oscillation: argmax of the moving average
/// (width = mask duration) of squared details at the target's level.
/// Ties go to the earliest index. Throws NoDetectionError on all-zero input.
std::size_t detect_oscillation_center(const WaveletCoefficients& coeffs, double target_freq_hz,
                                      double sample_rate_hz);

/// Complementary split of coefficients by the mask indicator.
ThresholdedCoefficients threshold_coeffs(const WaveletCoefficients& coeffs, const RectMask& mask);

/// Mask of the given geometry centred at `center`, clamped inside [0, n).
RectMask centered_mask(std::size_t center, std::size_t n, double target_freq_hz,
                       double sample_rate_hz, int levels, const SeparationOptions& options = {});

/// Full despiking pipeline for one channel.
SeparationResult separate(std::span<const double> signal, double target_freq_hz,
                          double sample_rate_hz, const FilterPair& filters,
                          const SeparationOptions& options = {});

/// Applies the mask indicator to one coefficient row: kept values are copied,
/// everything else becomes 0. Shared with the dataflow model.
void apply_window(std::span<const double> row, std::size_t lag, const TimeWindow& window,
                  std::span<double> kept, std::span<double> rest);

} // namespace gammasep
