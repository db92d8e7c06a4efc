#include "gammasep/tf_mapping.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

namespace gammasep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

void check_band(const Band& band, double sample_rate_hz) {
    if (!(band.low_hz > 0.0) || !(band.low_hz < band.high_hz) ||
        !(band.high_hz < sample_rate_hz / 2.0))
        throw std::invalid_argument("band [" + std::to_string(band.low_hz) + ", " +
                                    std::to_string(band.high_hz) +
                                    "] Hz must satisfy 0 < low < high < Nyquist");
}

} // namespace

Band band_for_target(double target_freq_hz) {
    if (!(target_freq_hz > 0.0)) throw std::invalid_argument("target frequency must be positive");
    if (std::abs(target_freq_hz - 45.0) < 1e-9) return {40.0, 50.0};
    if (std::abs(target_freq_hz - 55.0) < 1e-9) return {50.0, 60.0};
    if (std::abs(target_freq_hz - 85.0) < 1e-9) return {80.0, 90.0};
    return {std::max(target_freq_hz - 5.0, target_freq_hz / 2.0), target_freq_hz + 5.0};
}

void MorletParams::validate() const {
    if (!(w0 > 0.0)) throw std::invalid_argument("Morlet w0 must be positive");
    if (!(s > 0.0)) throw std::invalid_argument("Morlet spread s must be positive");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
    if (scales.empty()) throw std::invalid_argument("Morlet scales must not be empty");
    for (double a : scales)
        if (!(a > 0.0)) throw std::invalid_argument("Morlet scales must be positive");
}

double MorletParams::pseudo_frequency(double a) const {
    return sample_rate_hz * w0 / (kTwoPi * a);
}

double MorletParams::scale_for_frequency(double freq_hz) const {
    if (!(freq_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
    return sample_rate_hz * w0 / (kTwoPi * freq_hz);
}

MorletParams MorletParams::for_band(const Band& band, double step_hz) const {
    if (!(step_hz > 0.0)) throw std::invalid_argument("scale step must be positive");
    MorletParams p = *this;
    p.scales.clear();
    const auto count = static_cast<std::size_t>(std::floor((band.high_hz - band.low_hz) / step_hz + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
        p.scales.push_back(scale_for_frequency(band.low_hz + static_cast<double>(i) * step_hz));
    return p;
}

double SpatioTemporalMap::max_value() const {
    double m = 0.0;
    for (const auto& row : values)
        for (double v : row) m = std::max(m, v);
    return m;
}

ComplexRow morlet_kernel(const MorletParams& params, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("Morlet dilation must be positive");
    if (!(params.s > 0.0) || !(params.w0 > 0.0))
        throw std::invalid_argument("Morlet w0 and s must be positive");
    // exp(-u²/(2 s²)) >= 1e-6  <=>  |u| <= s·sqrt(2 ln 1e6)
    const double reach = a * params.s * std::sqrt(2.0 * std::log(1e6));
    const auto half = static_cast<std::ptrdiff_t>(std::floor(reach));
    ComplexRow k(static_cast<std::size_t>(2 * half + 1));
    for (std::ptrdiff_t t = -half; t <= half; ++t) {
        const double u = static_cast<double>(t) / a;
        const double env = std::exp(-u * u / (2.0 * params.s * params.s)) / a;
        k[static_cast<std::size_t>(t + half)] = env * Complex(std::cos(params.w0 * u), std::sin(params.w0 * u));
    }
    return k;
}

namespace {

// Same-length convolution of a real signal with a centred complex kernel.
ComplexRow convolve_same(std::span<const double> x, const ComplexRow& kernel) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    std::vector<double> re(x.size(), 0.0), im(x.size(), 0.0);
    // out[i] = sum_j x[i - j] * k[j + half], j ascending.
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
        const Complex kv = kernel[static_cast<std::size_t>(j + half)];
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, j);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, n + j);
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            re[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i - j)] * kv.real();
            im[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i - j)] * kv.imag();
        }
    }
    ComplexRow out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {re[i], im[i]};
    return out;
}

} // namespace

std::vector<ComplexRow> morlet_transform(std::span<const double> x, const MorletParams& params) {
    params.validate();
    if (x.empty()) throw std::invalid_argument("morlet_transform: empty input");
    std::vector<ComplexRow> rows;
    rows.reserve(params.scales.size());
    for (double a : params.scales) rows.push_back(convolve_same(x, morlet_kernel(params, a)));
    return rows;
}

std::vector<double> design_bandpass(const Band& band, double sample_rate_hz) {
    check_band(band, sample_rate_hz);
    constexpr double kTransitionHz = 5.0;
    // Hamming main-lobe transition ≈ 3.3 / N cycles per sample.
    auto taps = static_cast<std::size_t>(std::ceil(3.3 * sample_rate_hz / kTransitionHz));
    if (taps % 2 == 0) ++taps;
    const double f1 = std::max(0.0, band.low_hz - kTransitionHz / 2.0) / sample_rate_hz;
    const double f2 = std::min(sample_rate_hz / 2.0, band.high_hz + kTransitionHz / 2.0) / sample_rate_hz;
    const auto mid = static_cast<std::ptrdiff_t>(taps / 2);
    std::vector<double> h(taps), w(taps);
    double h_sum = 0.0, w_sum = 0.0;
    for (std::size_t i = 0; i < taps; ++i) {
        const double m = static_cast<double>(static_cast<std::ptrdiff_t>(i) - mid);
        w[i] = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(taps - 1));
        h[i] = (2.0 * f2 * sinc(2.0 * f2 * m) - 2.0 * f1 * sinc(2.0 * f1 * m)) * w[i];
        h_sum += h[i];
        w_sum += w[i];
    }
    if (f1 > 0.0)
        for (std::size_t i = 0; i < taps; ++i) h[i] -= h_sum * w[i] / w_sum;
    return h;
}

Samples bandpass(std::span<const double> x, const Band& band, double sample_rate_hz) {
    const std::vector<double> h = design_bandpass(band, sample_rate_hz);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t mid = static_cast<std::ptrdiff_t>(h.size() / 2);
    Samples y(x.size(), 0.0);
    // y[i] = sum_k h[k] x[i + mid - k]
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(h.size()); ++k) {
        const std::ptrdiff_t off = mid - k;
        const double hk = h[static_cast<std::size_t>(k)];
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -off);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, n - off);
        for (std::ptrdiff_t i = lo; i < hi; ++i)
            y[static_cast<std::size_t>(i)] += hk * x[static_cast<std::size_t>(i + off)];
    }
    return y;
}

Samples envelope_smooth(std::span<const double> x, std::size_t width_samples) {
    if (width_samples < 1) throw std::invalid_argument("envelope_smooth: width must be >= 1");
    const std::size_t n = x.size();
    Samples y(n);
    const std::size_t half = width_samples / 2;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t first = t >= half ? t - half : 0;
        const std::size_t last = std::min(n, t + (width_samples - half));
        double s = 0.0;
        for (std::size_t i = first; i < last; ++i) s += x[i];
        y[t] = s / static_cast<double>(last - first);
    }
    return y;
}

Samples band_energy(std::span<const double> x, const Band& band, const MorletParams& params,
                    const MapSettings& settings) {
    const Samples filtered = bandpass(x, band, params.sample_rate_hz);
    const MorletParams in_band = params.for_band(band, settings.scale_step_hz);
    Samples acc(x.size(), 0.0);
    for (double a : in_band.scales) {
        const ComplexRow c = convolve_same(filtered, morlet_kernel(in_band, a));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(c[i]);
    }
    const double inv = 1.0 / static_cast<double>(in_band.scales.size());
    for (auto& v : acc) v *= inv;
    return acc;
}

Samples band_envelope(std::span<const double> x, const Band& band, const MorletParams& params,
                      const MapSettings& settings) {
    return envelope_smooth(band_energy(x, band, params, settings), settings.smoothing_width);
}

Samples normalize_by_low_band(std::span<const double> band_env, std::span<const double> x_original,
                              double sample_rate_hz, const MorletParams& params,
                              const MapSettings& settings) {
    if (band_env.size() != x_original.size())
        throw std::invalid_argument("normalize_by_low_band: inputs must have the same length");
    MorletParams p = params;
    p.sample_rate_hz = sample_rate_hz;
    const Samples low = band_envelope(x_original, settings.low_band, p, settings);
    double low_max = 0.0;
    for (double v : low) low_max = std::max(low_max, v);
    const double eps = 1e-12 * low_max;
    Samples out(band_env.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double den = low[i] + eps;
        out[i] = den > 0.0 ? band_env[i] / den : 0.0;
    }
    return out;
}

SpatioTemporalMap spatiotemporal_map(const MultiChannelSignal& signal, const Band& band,
                                     const MorletParams& params, const MapSettings& settings,
                                     const MultiChannelSignal* reference) {
    const double fs = signal.sample_rate_hz();
    check_band(band, fs);
    check_band(settings.low_band, fs);
    if (reference && (reference->channel_count() != signal.channel_count() ||
                      reference->sample_count() != signal.sample_count()))
        throw std::invalid_argument("normalization reference must match the signal's shape");
    MorletParams p = params;
    p.sample_rate_hz = fs;

    // Channels are independent; each row is computed sequentially inside its task.
    std::vector<std::future<Samples>> rows;
    for (std::size_t ch = 0; ch < signal.channel_count(); ++ch) {
        rows.push_back(std::async(std::launch::async, [&, ch] {
            const auto x = signal.channel(ch);
            const auto ref = reference ? reference->channel(ch) : x;
            const Samples env = band_envelope(x, band, p, settings);
            return normalize_by_low_band(env, ref, fs, p, settings);
        }));
    }
    SpatioTemporalMap map;
    map.band = band;
    map.channel_labels = signal.channel_labels();
    map.sample_rate_hz = fs;
    map.lead_samples = settings.smoothing_width / 2;
    for (auto& r : rows) map.values.push_back(r.get());
    return map;
}

BuildupDetection detect_buildup(const SpatioTemporalMap& map, double k_sigma,
                                const DetectorSettings& settings) {
    if (map.values.empty() || map.sample_count() == 0)
        throw std::invalid_argument("detect_buildup: empty map");
    if (!(k_sigma >= 0.0)) throw std::invalid_argument("detect_buildup: k_sigma must be >= 0");
    std::vector<double> all;
    all.reserve(map.channel_count() * map.sample_count());
    for (const auto& row : map.values) {
        if (row.size() != map.sample_count())
            throw std::invalid_argument("detect_buildup: ragged map");
        all.insert(all.end(), row.begin(), row.end());
    }
    const double max_v = *std::max_element(all.begin(), all.end());
    const double med = median_of(all);
    for (auto& v : all) v = std::abs(v - med);
    const double mad = median_of(std::move(all));
    const double spread = std::max(mad, settings.mad_floor_fraction * (max_v - med));

    BuildupDetection det;
    det.threshold = med + k_sigma * spread;
    const std::size_t n = map.sample_count();
    const std::size_t run = std::max<std::size_t>(settings.min_run_samples, 1);

    std::size_t onset = n;
    for (const auto& row : map.values) {
        std::size_t length = 0;
        for (std::size_t t = 0; t < n && t < onset; ++t) {
            length = row[t] > det.threshold ? length + 1 : 0;
            if (length == run) {
                onset = std::min(onset, t + 1 - run);
                break;
            }
        }
    }
    if (onset == n) return det;

    const std::size_t window = ms_to_samples(settings.channel_window_ms, map.sample_rate_hz);
    const std::size_t stop = std::min(n, onset + window);
    for (std::size_t ch = 0; ch < map.channel_count(); ++ch) {
        for (std::size_t t = onset; t < stop; ++t) {
            if (map.values[ch][t] > det.threshold) {
                det.channel_indices.insert(ch);
                det.peak_energy = std::max(det.peak_energy, *std::max_element(
                    map.values[ch].begin() + static_cast<std::ptrdiff_t>(onset),
                    map.values[ch].begin() + static_cast<std::ptrdiff_t>(stop)));
                break;
            }
        }
    }
    det.onset_sample = std::min(n - 1, onset + map.lead_samples);
    return det;
}

} // namespace gammasep
