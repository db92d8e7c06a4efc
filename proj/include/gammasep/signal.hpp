#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gammasep {

using Samples = std::vector<double>;

/// Half-open sample range [start, start + length).
struct TimeWindow {
    std::size_t start_sample = 0;
    std::size_t length_samples = 0;

    std::size_t end() const { return start_sample + length_samples; }
    bool contains(std::size_t i) const { return i >= start_sample && i < end(); }
    bool operator==(const TimeWindow&) const = default;
};

/// Number of samples shared by two windows.
std::size_t overlap_length(const TimeWindow& a, const TimeWindow& b);

/// Uniformly sampled multichannel recording, channel-major, amplitudes in microvolts.
///
/// Immutable once built: every channel has the same length, the rate is
/// positive and there is one label per channel.
class MultiChannelSignal {
public:
    MultiChannelSignal() = default;
    MultiChannelSignal(double sample_rate_hz, std::vector<std::string> labels,
                       std::vector<Samples> data);

    double sample_rate_hz() const { return sample_rate_hz_; }
    const std::vector<std::string>& channel_labels() const { return labels_; }
    const std::vector<Samples>& data() const { return data_; }

    std::size_t channel_count() const { return data_.size(); }
    std::size_t sample_count() const { return data_.empty() ? 0 : data_.front().size(); }

    /// Row view of one channel; throws std::out_of_range for a bad index.
    std::span<const double> channel(std::size_t index) const;

    /// Copy with every sample multiplied by `factor`.
    MultiChannelSignal scaled(double factor) const;

    bool operator==(const MultiChannelSignal&) const = default;

private:
    double sample_rate_hz_ = 1.0;
    std::vector<std::string> labels_;
    std::vector<Samples> data_;
};

/// round(duration_ms * rate / 1000); both arguments must be positive.
std::size_t ms_to_samples(double duration_ms, double sample_rate_hz);

/// Free-function form of MultiChannelSignal::channel.
std::span<const double> channel(const MultiChannelSignal& signal, std::size_t index);

double energy(std::span<const double> x);
double max_abs(std::span<const double> x);

/// Pearson correlation; zero when either input has no variance.
double correlation(std::span<const double> a, std::span<const double> b);

/// Right circular shift: out[(i + shift) mod n] = x[i].
Samples circular_shift(std::span<const double> x, std::size_t shift);

} // namespace gammasep
