#pragma once

// Small seeded generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gammasep/signal.hpp"

namespace testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double gauss() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    std::vector<double> signal(std::size_t n, double scale = 1.0) {
        std::vector<double> x(n);
        for (auto& v : x) v = scale * gauss();
        return x;
    }

    gammasep::MultiChannelSignal multichannel(std::size_t channels, std::size_t n, double rate) {
        std::vector<std::string> labels;
        std::vector<gammasep::Samples> data;
        for (std::size_t c = 0; c < channels; ++c) {
            labels.push_back("c" + std::to_string(c));
            data.push_back(signal(n, uniform(0.1, 100.0)));
        }
        return {rate, labels, data};
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace testgen
