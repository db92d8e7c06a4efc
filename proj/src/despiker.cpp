#include "gammasep/despiker.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace gammasep {

RectMask::RectMask(TimeWindow window, std::set<int> scales, double target_freq_hz)
    : window_(window), scales_(std::move(scales)), target_freq_hz_(target_freq_hz) {
    if (window_.length_samples == 0) throw std::invalid_argument("mask window must not be empty");
    if (scales_.empty()) throw std::invalid_argument("mask must select at least one scale");
    if (*scales_.begin() < 1) throw std::invalid_argument("mask scales must be >= 1");
}

MaskGeometry mask_geometry(double target_freq_hz) {
    if (!(target_freq_hz > 0.0)) throw std::invalid_argument("target frequency must be positive");
    struct Entry {
        double freq;
        MaskGeometry geometry;
    };
    static constexpr Entry kTable[] = {
        {45.0, {200.0, 3}},
        {55.0, {180.0, 2}},
        {85.0, {150.0, 2}},
    };
    for (const auto& e : kTable)
        if (std::abs(e.freq - target_freq_hz) < 1e-9) return e.geometry;
    return {9.0 * 1000.0 / target_freq_hz, 2};
}

std::set<int> mask_scales(double target_freq_hz, double sample_rate_hz, int n_scales, int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    if (n_scales < 1) throw std::invalid_argument("n_scales must be >= 1");
    const double target = std::log2(target_freq_hz);
    std::vector<std::pair<double, int>> ranked;
    for (int j = 1; j <= levels; ++j) {
        const double band_center = std::log2(sample_rate_hz) - j - 0.5;
        ranked.emplace_back(std::abs(target - band_center), j);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::set<int> out;
    for (int i = 0; i < std::min(n_scales, levels); ++i) out.insert(ranked[i].second);
    return out;
}

std::size_t detect_oscillation_center(const WaveletCoefficients& coeffs, double target_freq_hz,
                                      double sample_rate_hz) {
    coeffs.validate();
    const int level = level_for_frequency(target_freq_hz, sample_rate_hz);
    if (static_cast<std::size_t>(level) > coeffs.levels())
        throw std::invalid_argument("coefficients stop at level " +
                                    std::to_string(coeffs.levels()) + " but " +
                                    std::to_string(target_freq_hz) + " Hz needs level " +
                                    std::to_string(level));
    const Samples& d = coeffs.detail(level);
    const std::size_t n = d.size();
    const std::size_t width =
        std::clamp<std::size_t>(ms_to_samples(mask_geometry(target_freq_hz).duration_ms, sample_rate_hz), 1, n);

    std::vector<double> sq(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = d[i] * d[i];
        peak = std::max(peak, sq[i]);
    }
    if (peak == 0.0) throw NoDetectionError("no oscillatory energy near " + std::to_string(target_freq_hz) + " Hz");

    // Circular centred moving sum; each output sums its window in index order.
    const std::size_t half = width / 2;
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t first = (t + n - half % n) % n;
        double s = 0.0;
        for (std::size_t k = 0; k < width; ++k) s += sq[(first + k) % n];
        if (s > best_value) {
            best_value = s;
            best = t;
        }
    }
    const std::size_t lag = coeffs.detail_lag(level) % n;
    return (best + n - lag) % n;
}

void apply_window(std::span<const double> row, std::size_t lag, const TimeWindow& window,
                  std::span<double> kept, std::span<double> rest) {
    const std::size_t n = row.size();
    for (std::size_t i = 0; i < n; ++i) {
        kept[i] = 0.0;
        rest[i] = row[i];
    }
    for (std::size_t i = 0; i < window.length_samples; ++i) {
        const std::size_t idx = (window.start_sample + lag + i) % n;
        kept[idx] = row[idx];
        rest[idx] = 0.0;
    }
}

ThresholdedCoefficients threshold_coeffs(const WaveletCoefficients& coeffs, const RectMask& mask) {
    coeffs.validate();
    const std::size_t n = coeffs.source_length;
    if (mask.window().end() > n)
        throw std::invalid_argument("mask window [" + std::to_string(mask.window().start_sample) +
                                    ", " + std::to_string(mask.window().end()) +
                                    ") exceeds signal length " + std::to_string(n));
    if (*mask.scales().rbegin() > static_cast<int>(coeffs.levels()))
        throw std::invalid_argument("mask selects a level deeper than the decomposition");

    ThresholdedCoefficients out{coeffs, coeffs};
    for (std::size_t j = 1; j <= coeffs.levels(); ++j) {
        auto& osc_d = out.oscillatory.details[j - 1];
        auto& tr_d = out.transient.details[j - 1];
        if (mask.scales().contains(static_cast<int>(j))) {
            apply_window(coeffs.detail(j), coeffs.detail_lag(j), mask.window(), osc_d, tr_d);
        } else {
            std::fill(osc_d.begin(), osc_d.end(), 0.0);
        }
        // Only the deepest approximation feeds the inverse; shallower levels are
        // split the same way so the two halves remain complementary everywhere.
        apply_window(coeffs.approximation(j), coeffs.approximation_lag(j), mask.window(),
                     out.oscillatory.approximations[j - 1], out.transient.approximations[j - 1]);
    }
    return out;
}

RectMask centered_mask(std::size_t center, std::size_t n, double target_freq_hz,
                       double sample_rate_hz, int levels, const SeparationOptions& options) {
    MaskGeometry g = mask_geometry(target_freq_hz);
    if (options.duration_ms_override) g.duration_ms = *options.duration_ms_override;
    if (options.n_scales_override) g.n_scales = *options.n_scales_override;
    std::size_t len = ms_to_samples(g.duration_ms, sample_rate_hz);
    if (len == 0) throw std::invalid_argument("mask duration rounds to zero samples");
    len = std::min(len, n);
    std::size_t start = center >= len / 2 ? center - len / 2 : 0;
    if (start + len > n) start = n - len;
    return RectMask({start, len}, mask_scales(target_freq_hz, sample_rate_hz, g.n_scales, levels),
                    target_freq_hz);
}

SeparationResult separate(std::span<const double> signal, double target_freq_hz,
                          double sample_rate_hz, const FilterPair& filters,
                          const SeparationOptions& options) {
    const WaveletCoefficients coeffs = swt_decompose(signal, filters, options.levels);
    const std::size_t center = detect_oscillation_center(coeffs, target_freq_hz, sample_rate_hz);
    RectMask mask = centered_mask(center, signal.size(), target_freq_hz, sample_rate_hz,
                                  options.levels, options);
    const ThresholdedCoefficients split = threshold_coeffs(coeffs, mask);
    return {iswt_reconstruct(split.oscillatory, filters), iswt_reconstruct(split.transient, filters),
            std::move(mask), center};
}

} // namespace gammasep
