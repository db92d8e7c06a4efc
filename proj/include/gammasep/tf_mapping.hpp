#pragma once

#include <complex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gammasep/signal.hpp"

namespace gammasep {

using Complex = std::complex<double>;
using ComplexRow = std::vector<Complex>;

/// Frequency band in Hz, low < high.
struct Band {
    double low_hz = 0.0;
    double high_hz = 0.0;
    bool operator==(const Band&) const = default;
};

/// Analysis band paired with each target frequency: 45 → [40, 50],
/// 55 → [50, 60], 85 → [80, 90]; other targets get ±5 Hz.
Band band_for_target(double target_freq_hz);

/// Complex Morlet family. Time is measured in samples, so a wavelet at
/// dilation `a` has pseudo-frequency fs * w0 / (2π a).
struct MorletParams {
    double w0 = 6.0;
    double s = 1.0;
    std::vector<double> scales;
    double sample_rate_hz = 512.0;

    void validate() const;
    double pseudo_frequency(double a) const;
    double scale_for_frequency(double freq_hz) const;

    /// Same w0/s with one scale per `step_hz` from band.low_hz to band.high_hz.
    MorletParams for_band(const Band& band, double step_hz = 1.0) const;
};

/// Knobs of the map chain beyond the Morlet family.
struct MapSettings {
    std::size_t smoothing_width = 256;
    Band low_band{10.0, 15.0};
    double scale_step_hz = 1.0;
};

struct SpatioTemporalMap {
    std::vector<Samples> values;
    Band band;
    std::vector<std::string> channel_labels;
    double sample_rate_hz = 1.0;
    /// How far the centred smoother lets energy show up before it arrives.
    std::size_t lead_samples = 0;

    std::size_t channel_count() const { return values.size(); }
    std::size_t sample_count() const { return values.empty() ? 0 : values.front().size(); }
    double max_value() const;
};

struct BuildupDetection {
    std::set<std::size_t> channel_indices;
    std::size_t onset_sample = 0;
    double peak_energy = 0.0;
    double threshold = 0.0;

    bool detected() const { return !channel_indices.empty(); }
    bool operator==(const BuildupDetection&) const = default;
};

struct DetectorSettings {
    /// Floor on the spread estimate as a fraction of (max - median); keeps the
    /// threshold meaningful on sparse maps whose MAD is zero.
    double mad_floor_fraction = 0.1;
    std::size_t min_run_samples = 64;
    double channel_window_ms = 500.0;
};

/// Ψ(t) = (1/a) exp(i w0 t/a) exp(-(t/a)² / (2 s²)), sampled at integer t
/// around the centre and truncated where the envelope drops below 1e-6.
ComplexRow morlet_kernel(const MorletParams& params, double a);

/// One row per scale: same-length, zero-padded convolution with the kernel.
std::vector<ComplexRow> morlet_transform(std::span<const double> x, const MorletParams& params);

/// Linear-phase Hamming windowed-sinc band-pass taps (odd length) with 5 Hz
/// transitions centred 2.5 Hz outside the band and zero DC gain.
std::vector<double> design_bandpass(const Band& band, double sample_rate_hz);

/// Zero-phase band-pass, output length preserved.
Samples bandpass(std::span<const double> x, const Band& band, double sample_rate_hz);

/// Centred moving average; the window shrinks at the edges.
Samples envelope_smooth(std::span<const double> x, std::size_t width_samples);

/// Mean |C|² over the Morlet scales covering `band`, after band-passing x.
Samples band_energy(std::span<const double> x, const Band& band, const MorletParams& params,
                    const MapSettings& settings = {});

/// band_energy followed by envelope_smooth.
Samples band_envelope(std::span<const double> x, const Band& band, const MorletParams& params,
                      const MapSettings& settings = {});

/// band_env / (low_env + ε) where low_env is the smoothed low-band envelope
/// of x_original and ε = 1e-12 · max(low_env).
Samples normalize_by_low_band(std::span<const double> band_env, std::span<const double> x_original,
                              double sample_rate_hz, const MorletParams& params = {},
                              const MapSettings& settings = {});

/// Channel × time map of normalized band energy.
///
/// `reference`, when given, supplies the recording used for the low-band
/// normalization (e.g. the raw recording when `signal` has been despiked);
/// otherwise the signal normalizes itself.
SpatioTemporalMap spatiotemporal_map(const MultiChannelSignal& signal, const Band& band,
                                     const MorletParams& params, const MapSettings& settings = {},
                                     const MultiChannelSignal* reference = nullptr);

/// Threshold = median + k·max(MAD, floor·(max - median)). Onset is the first
/// sample of the earliest run of `min_run_samples` supra-threshold values on
/// any channel, moved forward by the map's smoother lead. Channels crossing
/// within the following window are reported.
BuildupDetection detect_buildup(const SpatioTemporalMap& map, double k_sigma,
                                const DetectorSettings& settings = {});

} // namespace gammasep
