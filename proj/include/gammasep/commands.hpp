#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gammasep/config.hpp"
#include "gammasep/dataflow.hpp"
#include "gammasep/tf_mapping.hpp"

namespace gammasep {

/// realization_NNN.csv + realization_NNN.truth.txt per realization.
/// Returns the number of realizations written.
std::size_t cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

struct DespikeSummary {
    std::vector<TimeWindow> mask_windows;
    std::vector<std::size_t> centers;
    /// max |osc + trans - input| over all channels.
    double max_split_error = 0.0;
};

/// Splits every channel of `input` at `target_freq_hz` and writes
/// oscillatory.csv, transient.csv and mask.txt.
DespikeSummary cmd_despike(const std::filesystem::path& input, double target_freq_hz,
                           const RunConfig& config, const std::filesystem::path& out_dir);

/// Writes map.csv, detection.txt and map.pgm. `reference` is the recording
/// used for the low-band normalization (normally the raw input of despike).
BuildupDetection cmd_map(const std::filesystem::path& input, const Band& band, const RunConfig& config,
                         const std::filesystem::path& out_dir,
                         const std::optional<std::filesystem::path>& reference = std::nullopt);

/// Writes bench.txt and bench.csv. The workload is `workload` if given,
/// otherwise the first simulated realization of the config.
BenchReport cmd_bench(const RunConfig& config, const std::filesystem::path& out_dir,
                      const std::optional<std::filesystem::path>& workload = std::nullopt);

} // namespace gammasep
