#include "gammasep/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gammasep/despiker.hpp"
#include "spectrum.hpp"

namespace gammasep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Samples scale_to_peak(Samples s, double amplitude) {
    const double peak = max_abs(s);
    if (peak == 0.0 || amplitude == 0.0) {
        std::fill(s.begin(), s.end(), 0.0);
        return s;
    }
    const double g = amplitude / peak;
    for (auto& v : s) v *= g;
    return s;
}

void place(Samples& dst, const Samples& src, std::size_t start) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[start + i] += src[i];
}

double mean_square(std::span<const double> x, const TimeWindow& w) {
    double s = 0.0;
    for (std::size_t i = w.start_sample; i < w.end(); ++i) s += x[i] * x[i];
    return s / static_cast<double>(w.length_samples);
}

} // namespace

std::string to_string(OverlapRegime regime) {
    switch (regime) {
    case OverlapRegime::Separated: return "separated";
    case OverlapRegime::Overlapped: return "overlapped";
    case OverlapRegime::FullyOverlapped: return "fully_overlapped";
    }
    return "unknown";
}

OverlapRegime overlap_regime_from_string(const std::string& text) {
    if (text == "separated") return OverlapRegime::Separated;
    if (text == "overlapped") return OverlapRegime::Overlapped;
    if (text == "fully_overlapped") return OverlapRegime::FullyOverlapped;
    throw std::invalid_argument("unknown overlap regime '" + text + "'");
}

void SimConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample_rate_hz must be positive");
    if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    if (n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
    if (burst_freqs_hz.empty()) throw std::invalid_argument("at least one burst frequency needed");
    if (overlap_regimes.size() != burst_freqs_hz.size())
        throw std::invalid_argument("one overlap regime per channel is required");
    if (!burst_durations_ms.empty() && burst_durations_ms.size() != burst_freqs_hz.size())
        throw std::invalid_argument("burst_durations_ms must be empty or one per channel");
    for (double f : burst_freqs_hz)
        if (!(f > 0.0) || !(f < sample_rate_hz / 2.0))
            throw std::invalid_argument("burst frequency " + std::to_string(f) +
                                        " Hz must lie below Nyquist");
    if (!(transient_width_ms > 0.0)) throw std::invalid_argument("transient width must be > 0");
    if (std::isnan(snr_db)) throw std::invalid_argument("snr_db is NaN");
    if (separation_gap_ms < 0.0) throw std::invalid_argument("separation gap must be >= 0");
}

double SimConfig::burst_duration_ms(std::size_t ch) const {
    if (!burst_durations_ms.empty()) return burst_durations_ms.at(ch);
    return mask_geometry(burst_freqs_hz.at(ch)).duration_ms;
}

Samples gen_gamma_burst(double freq_hz, double duration_ms, double amplitude_uv,
                        double sample_rate_hz) {
    if (!(freq_hz > 0.0) || !(freq_hz < sample_rate_hz / 2.0))
        throw std::invalid_argument("gen_gamma_burst: frequency must be in (0, Nyquist)");
    if (!(duration_ms > 0.0)) throw std::invalid_argument("gen_gamma_burst: duration must be > 0");
    const std::size_t len = ms_to_samples(duration_ms, sample_rate_hz);
    if (len == 0) throw std::invalid_argument("gen_gamma_burst: duration rounds to zero samples");
    Samples s(len);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t t = 0; t < len; ++t) {
        const double taper =
            0.5 - 0.5 * std::cos(two_pi * (static_cast<double>(t) + 0.5) / static_cast<double>(len));
        s[t] = taper * std::sin(two_pi * freq_hz * static_cast<double>(t) / sample_rate_hz);
    }
    return scale_to_peak(std::move(s), amplitude_uv);
}

Samples gen_transient(double width_ms, double amplitude_uv, double sample_rate_hz) {
    if (!(width_ms > 0.0)) throw std::invalid_argument("gen_transient: width must be > 0");
    const std::size_t len = ms_to_samples(width_ms, sample_rate_hz);
    if (len < 2) throw std::invalid_argument("gen_transient: width shorter than two samples");
    const double sigma = static_cast<double>(len) / 8.0;
    const double center = static_cast<double>(len - 1) / 2.0;
    Samples s(len);
    for (std::size_t t = 0; t < len; ++t) {
        const double u = static_cast<double>(t) - center;
        s[t] = -u * std::exp(-u * u / (2.0 * sigma * sigma));
    }
    return scale_to_peak(std::move(s), amplitude_uv);
}

Samples gen_colored_noise(std::size_t n, double exponent, std::uint64_t rng_seed) {
    if (n == 0) throw std::invalid_argument("gen_colored_noise: n must be positive");
    if (n == 1) return {0.0};
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Samples white(n);
    for (auto& v : white) v = gauss(rng);

    auto spectrum = detail::rfft(white);
    spectrum[0] = 0.0;
    for (std::size_t k = 1; k < spectrum.size(); ++k)
        spectrum[k] *= std::pow(static_cast<double>(k), -exponent / 2.0);
    Samples shaped = detail::irfft(spectrum, n);

    double mean = 0.0;
    for (double v : shaped) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (auto& v : shaped) {
        v -= mean;
        var += v * v;
    }
    var /= static_cast<double>(n);
    const double g = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    for (auto& v : shaped) v *= g;
    return shaped;
}

std::uint64_t realization_seed(const SimConfig& config, std::size_t realization_index) {
    return config.rng_seed ^ static_cast<std::uint64_t>(realization_index);
}

Realization build_realization(const SimConfig& config, std::size_t realization_index) {
    config.validate();
    if (realization_index >= config.n_realizations)
        throw std::invalid_argument("realization index " + std::to_string(realization_index) +
                                    " out of range (" + std::to_string(config.n_realizations) +
                                    " realizations)");
    const std::size_t n = config.n_samples;
    const double fs = config.sample_rate_hz;
    const std::uint64_t seed = realization_seed(config, realization_index);

    Realization out;
    out.truth.realization_index = realization_index;
    out.truth.seed = seed;
    std::vector<std::string> labels;
    std::vector<Samples> rows;

    const Samples spike = gen_transient(config.transient_width_ms, config.transient_amplitude_uv, fs);
    const std::size_t ls = spike.size();
    const std::size_t gap = static_cast<std::size_t>(std::llround(config.separation_gap_ms * fs / 1000.0));

    for (std::size_t ch = 0; ch < config.burst_freqs_hz.size(); ++ch) {
        const double f = config.burst_freqs_hz[ch];
        const Samples burst = gen_gamma_burst(f, config.burst_duration_ms(ch), config.burst_amplitude_uv, fs);
        const std::size_t lb = burst.size();
        const std::size_t center = config.burst_center();
        if (center < lb / 2 || center - lb / 2 + lb > n)
            throw std::invalid_argument("burst window does not fit inside the recording");
        const std::size_t bs = center - lb / 2;

        const OverlapRegime regime = config.overlap_regimes[ch];
        long long ts = 0;
        switch (regime) {
        case OverlapRegime::Separated:
            ts = static_cast<long long>(bs) - static_cast<long long>(gap + ls);
            if (ts < 0) ts = static_cast<long long>(bs + lb + gap);
            break;
        case OverlapRegime::Overlapped: {
            const double frac = config.n_realizations > 1
                                    ? static_cast<double>(realization_index) /
                                          static_cast<double>(config.n_realizations - 1)
                                    : 0.5;
            ts = static_cast<long long>(bs) - static_cast<long long>(ls) +
                 std::llround(frac * static_cast<double>(ls));
            break;
        }
        case OverlapRegime::FullyOverlapped:
            ts = static_cast<long long>(bs) + (static_cast<long long>(lb) - static_cast<long long>(ls)) / 2;
            break;
        }
        if (ts < 0 || static_cast<std::size_t>(ts) + ls > n)
            throw std::invalid_argument("transient window does not fit inside the recording");

        ChannelTruth truth;
        truth.regime = regime;
        truth.burst_freq_hz = f;
        truth.burst_window = {bs, lb};
        truth.transient_window = {static_cast<std::size_t>(ts), ls};
        truth.overlap_fraction = static_cast<double>(overlap_length(truth.burst_window, truth.transient_window)) /
                                 static_cast<double>(ls);

        Samples burst_row(n, 0.0), spike_row(n, 0.0);
        place(burst_row, burst, bs);
        place(spike_row, spike, truth.transient_window.start_sample);
        Samples row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = burst_row[i] + spike_row[i];

        if (std::isfinite(config.snr_db)) {
            const Samples noise = gen_colored_noise(n, config.noise_exponent, splitmix64(seed ^ (0x51ed27ULL * (ch + 1))));
            const double p_clean = mean_square(row, truth.burst_window);
            const double p_noise = mean_square(noise, truth.burst_window);
            const double gain = p_noise > 0.0 ? std::sqrt(p_clean / (std::pow(10.0, config.snr_db / 10.0) * p_noise)) : 0.0;
            truth.noise_gain = gain;
            for (std::size_t i = 0; i < n; ++i) row[i] += gain * noise[i];
        }

        labels.push_back("ch" + std::to_string(ch + 1));
        rows.push_back(std::move(row));
        out.bursts.push_back(std::move(burst_row));
        out.transients.push_back(std::move(spike_row));
        out.truth.channels.push_back(truth);
    }
    out.signal = MultiChannelSignal(fs, std::move(labels), std::move(rows));
    return out;
}

} // namespace gammasep
