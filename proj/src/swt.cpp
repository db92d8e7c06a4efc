#include "gammasep/swt.hpp"

#include <cmath>
#include <string>

namespace gammasep {

namespace {

// acc[n] += w * x[(n + offset) mod N] for all n, split into two contiguous runs.
void accumulate_rotated(Samples& acc, std::span<const double> x, double w, std::size_t offset) {
    const std::size_t n = x.size();
    const std::size_t head = n - offset;
    for (std::size_t i = 0; i < head; ++i) acc[i] += w * x[i + offset];
    for (std::size_t i = head; i < n; ++i) acc[i] += w * x[i - head];
}

std::vector<double> full_convolve(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
    return out;
}

} // namespace

void WaveletCoefficients::validate() const {
    if (details.empty()) throw InvalidStructureError("coefficients must have at least one level");
    if (approximations.size() != details.size())
        throw InvalidStructureError("approximation and detail level counts differ");
    if (approximation_lags.size() != details.size() || detail_lags.size() != details.size())
        throw InvalidStructureError("lag table does not match level count");
    for (std::size_t j = 0; j < details.size(); ++j) {
        if (details[j].size() != source_length || approximations[j].size() != source_length)
            throw InvalidStructureError("level " + std::to_string(j + 1) + " has length " +
                                        std::to_string(details[j].size()) + ", expected " +
                                        std::to_string(source_length));
    }
}

WaveletCoefficients WaveletCoefficients::zeros_like() const {
    WaveletCoefficients z = *this;
    for (auto& row : z.approximations) std::fill(row.begin(), row.end(), 0.0);
    for (auto& row : z.details) std::fill(row.begin(), row.end(), 0.0);
    return z;
}

std::vector<double> upsample_filter(std::span<const double> taps, int level) {
    if (level < 1) throw std::invalid_argument("upsample_filter: level must be >= 1");
    if (taps.empty()) return {};
    const std::size_t step = std::size_t{1} << (level - 1);
    std::vector<double> out((taps.size() - 1) * step + 1, 0.0);
    for (std::size_t k = 0; k < taps.size(); ++k) out[k * step] = taps[k];
    return out;
}

Samples circular_convolve(std::span<const double> x, std::span<const double> taps,
                          std::size_t stride) {
    const std::size_t n = x.size();
    Samples y(n, 0.0);
    if (n == 0) return y;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        // x[(i - stride*k) mod n] == x[(i + n - (stride*k mod n)) mod n]
        const std::size_t back = (stride * k) % n;
        accumulate_rotated(y, x, taps[k], (n - back) % n);
    }
    return y;
}

Samples synthesis_branch(std::span<const double> coeffs, std::span<const double> rec_taps,
                         std::size_t stride) {
    const std::size_t n = coeffs.size();
    Samples y(n, 0.0);
    if (n == 0) return y;
    const std::size_t len = rec_taps.size();
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t ahead = (stride * (len - 1 - k)) % n;
        accumulate_rotated(y, coeffs, rec_taps[k], ahead);
    }
    return y;
}

Samples combine_branches(std::span<const double> lo_part, std::span<const double> hi_part) {
    Samples out(lo_part.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (lo_part[i] + hi_part[i]);
    return out;
}

WaveletCoefficients swt_decompose(std::span<const double> x, const FilterPair& filters,
                                  int levels) {
    filters.validate();
    if (levels < 1) throw std::invalid_argument("swt_decompose: levels must be >= 1");
    if (levels >= 63 || (std::size_t{1} << levels) > x.size())
        throw std::invalid_argument("swt_decompose: signal of length " +
                                    std::to_string(x.size()) + " is shorter than 2^" +
                                    std::to_string(levels));
    WaveletCoefficients c;
    c.source_length = x.size();
    Samples current(x.begin(), x.end());
    for (int j = 1; j <= levels; ++j) {
        const std::size_t stride = std::size_t{1} << (j - 1);
        c.details.push_back(circular_convolve(current, filters.dec_hi, stride));
        current = circular_convolve(current, filters.dec_lo, stride);
        c.approximations.push_back(current);
        c.detail_lags.push_back(equivalent_filter_lag(filters, j, true));
        c.approximation_lags.push_back(equivalent_filter_lag(filters, j, false));
    }
    return c;
}

Samples iswt_reconstruct(const WaveletCoefficients& coeffs, const FilterPair& filters) {
    coeffs.validate();
    filters.validate();
    Samples approx = coeffs.deepest_approximation();
    for (std::size_t j = coeffs.levels(); j >= 1; --j) {
        const std::size_t stride = std::size_t{1} << (j - 1);
        const Samples lo = synthesis_branch(approx, filters.rec_lo, stride);
        const Samples hi = synthesis_branch(coeffs.detail(j), filters.rec_hi, stride);
        approx = combine_branches(lo, hi);
    }
    return approx;
}

int level_for_frequency(double freq_hz, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
    if (!(freq_hz > 0.0) || !(freq_hz < sample_rate_hz / 2.0))
        throw std::invalid_argument("frequency " + std::to_string(freq_hz) +
                                    " Hz is outside (0, Nyquist)");
    int j = 1;
    while (!(sample_rate_hz / std::ldexp(1.0, j + 1) <= freq_hz)) ++j;
    return j;
}

std::size_t equivalent_filter_lag(const FilterPair& filters, int level, bool detail) {
    if (level < 1) throw std::invalid_argument("equivalent_filter_lag: level must be >= 1");
    std::vector<double> eq = {1.0};
    for (int i = 1; i < level; ++i) eq = full_convolve(eq, upsample_filter(filters.dec_lo, i));
    eq = full_convolve(eq, upsample_filter(detail ? filters.dec_hi : filters.dec_lo, level));
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < eq.size(); ++m) {
        num += static_cast<double>(m) * eq[m] * eq[m];
        den += eq[m] * eq[m];
    }
    return den > 0.0 ? static_cast<std::size_t>(std::llround(num / den)) : 0;
}

} // namespace gammasep
