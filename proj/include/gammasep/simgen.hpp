#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gammasep/signal.hpp"

namespace gammasep {

enum class OverlapRegime { Separated, Overlapped, FullyOverlapped };

std::string to_string(OverlapRegime regime);
OverlapRegime overlap_regime_from_string(const std::string& text);

/// Parameters of the three-channel transient + gamma burst simulation.
struct SimConfig {
    double sample_rate_hz = 512.0;
    std::size_t n_samples = 5000;
    std::vector<double> burst_freqs_hz = {45.0, 55.0, 85.0};
    std::vector<OverlapRegime> overlap_regimes = {
        OverlapRegime::Separated, OverlapRegime::Overlapped, OverlapRegime::FullyOverlapped};
    /// Signal-to-noise ratio over the burst window; +inf disables noise.
    double snr_db = 5.0;
    std::size_t n_realizations = 200;
    std::uint64_t rng_seed = 1;
    double noise_exponent = 1.0;

    double burst_amplitude_uv = 50.0;
    double transient_amplitude_uv = 100.0;
    double transient_width_ms = 70.0;
    /// Empty means "use the mask duration of each frequency".
    std::vector<double> burst_durations_ms;
    /// Defaults to n_samples / 2 when unset.
    std::size_t burst_center_sample = 0;
    /// Gap between transient and burst in the Separated regime.
    double separation_gap_ms = 400.0;

    /// Throws std::invalid_argument when a field violates its constraint.
    void validate() const;
    double burst_duration_ms(std::size_t channel) const;
    std::size_t burst_center() const { return burst_center_sample ? burst_center_sample : n_samples / 2; }
};

struct ChannelTruth {
    TimeWindow burst_window;
    double burst_freq_hz = 0.0;
    TimeWindow transient_window;
    /// |transient ∩ burst| / |transient|.
    double overlap_fraction = 0.0;
    OverlapRegime regime = OverlapRegime::Separated;
    /// Scale applied to the unit-variance noise (0 when noise is disabled).
    double noise_gain = 0.0;
};

struct GroundTruth {
    std::size_t realization_index = 0;
    std::uint64_t seed = 0;
    std::vector<ChannelTruth> channels;
};

struct Realization {
    MultiChannelSignal signal;
    GroundTruth truth;
    /// Noise-free burst component per channel (same layout as the signal).
    std::vector<Samples> bursts;
    /// Noise-free transient component per channel.
    std::vector<Samples> transients;
};

/// Hann-tapered sinusoid at freq_hz, peak |value| == amplitude_uv.
Samples gen_gamma_burst(double freq_hz, double duration_ms, double amplitude_uv,
                        double sample_rate_hz);

/// Biphasic spike: first derivative of a Gaussian whose ±4σ support spans width_ms.
Samples gen_transient(double width_ms, double amplitude_uv, double sample_rate_hz);

/// Unit-variance zero-mean noise with power spectrum ∝ 1/f^exponent.
Samples gen_colored_noise(std::size_t n, double exponent, std::uint64_t rng_seed);

/// Per-realization seed: rng_seed XOR realization_index.
std::uint64_t realization_seed(const SimConfig& config, std::size_t realization_index);

Realization build_realization(const SimConfig& config, std::size_t realization_index);

} // namespace gammasep
