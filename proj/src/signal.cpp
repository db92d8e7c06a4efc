#include "gammasep/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gammasep {

std::size_t overlap_length(const TimeWindow& a, const TimeWindow& b) {
    const std::size_t lo = std::max(a.start_sample, b.start_sample);
    const std::size_t hi = std::min(a.end(), b.end());
    return hi > lo ? hi - lo : 0;
}

MultiChannelSignal::MultiChannelSignal(double sample_rate_hz, std::vector<std::string> labels,
                                       std::vector<Samples> data)
    : sample_rate_hz_(sample_rate_hz), labels_(std::move(labels)), data_(std::move(data)) {
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
        throw std::invalid_argument("sample rate must be positive");
    if (labels_.size() != data_.size())
        throw std::invalid_argument("channel label count " + std::to_string(labels_.size()) +
                                    " does not match channel count " +
                                    std::to_string(data_.size()));
    for (const auto& row : data_) {
        if (row.size() != data_.front().size())
            throw std::invalid_argument("all channels must have the same length");
    }
}

std::span<const double> MultiChannelSignal::channel(std::size_t index) const {
    if (index >= data_.size())
        throw std::out_of_range("channel index " + std::to_string(index) + " out of range (" +
                                std::to_string(data_.size()) + " channels)");
    return data_[index];
}

MultiChannelSignal MultiChannelSignal::scaled(double factor) const {
    auto rows = data_;
    for (auto& row : rows)
        for (auto& v : row) v *= factor;
    return {sample_rate_hz_, labels_, std::move(rows)};
}

std::size_t ms_to_samples(double duration_ms, double sample_rate_hz) {
    if (!(duration_ms > 0.0) || !(sample_rate_hz > 0.0))
        throw std::invalid_argument("ms_to_samples: duration and rate must be positive");
    return static_cast<std::size_t>(std::llround(duration_ms * sample_rate_hz / 1000.0));
}

std::span<const double> channel(const MultiChannelSignal& signal, std::size_t index) {
    return signal.channel(index);
}

double energy(std::span<const double> x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("correlation: sequences must be non-empty and equal length");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

Samples circular_shift(std::span<const double> x, std::size_t shift) {
    const std::size_t n = x.size();
    Samples out(n);
    if (n == 0) return out;
    shift %= n;
    for (std::size_t i = 0; i < n; ++i) out[(i + shift) % n] = x[i];
    return out;
}

} // namespace gammasep
