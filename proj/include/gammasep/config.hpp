#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gammasep/despiker.hpp"
#include "gammasep/simgen.hpp"
#include "gammasep/tf_mapping.hpp"

namespace gammasep {

struct BenchSettings {
    std::size_t repetitions = 600;
    std::vector<int> accelerators = {0, 2};
    bool quantize_input = false;
};

/// Every tunable of the toolkit. Loaded from JSON; missing keys keep their
/// defaults and unknown keys are rejected.
struct RunConfig {
    SimConfig sim;
    std::string wavelet = "db4";
    SeparationOptions separation;
    MorletParams morlet;
    MapSettings map;
    std::optional<Band> band;
    double k_sigma = 3.0;
    DetectorSettings detector;
    BenchSettings bench;
    std::string output_dir = "out";
    std::size_t image_time_step = 8;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

RunConfig parse_run_config(const std::string& json_text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// "lo:hi" → Band.
Band parse_band(const std::string& text);

} // namespace gammasep
