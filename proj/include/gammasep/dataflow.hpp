#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gammasep/despiker.hpp"
#include "gammasep/signal.hpp"
#include "gammasep/tf_mapping.hpp"
#include "gammasep/wavelets.hpp"

namespace gammasep {

/// One multiply/accumulate stage of the modeled correlation bloc.
struct StageSpec {
    std::string name;
    std::size_t items = 0; ///< outputs produced
    std::size_t taps = 0;  ///< multiply-adds per output
    int parallel_group = -1; ///< stages sharing a group id >= 0 may run concurrently
    std::string memory;      ///< memory receiving the stage output
};

enum class PipelineKind { Separation, Mapping };

std::string to_string(PipelineKind kind);

struct PipelineConfig {
    PipelineKind kind = PipelineKind::Separation;
    int accelerators = 0;
    bool quantize_input = false;
    std::size_t capacity = 5000; ///< data-vector length
    int levels = 5;              ///< decomposition depth (separation only)
    std::vector<StageSpec> stages;
    std::vector<std::string> memory_names;

    /// Throws std::invalid_argument on accelerators outside {0, 2}, an empty
    /// stage list, duplicate stage names or a stage writing to an unknown memory.
    void validate() const;
};

struct TickReport {
    std::uint64_t total_ticks = 0;
    std::map<std::string, std::uint64_t> per_stage_ticks;
    std::map<std::string, std::uint64_t> per_memory_writes;
    std::uint64_t output_checksum = 0;
    bool operator==(const TickReport&) const = default;
};

/// Amplitude range and step of the stored data vector: 250 levels over
/// [-100, 150] µV.
inline constexpr double kQuantLow = -100.0;
inline constexpr double kQuantHigh = 150.0;
inline constexpr double kQuantLevels = 250.0;
inline constexpr double kQuantStep = (kQuantHigh - kQuantLow) / kQuantLevels;

Samples quantize(std::span<const double> x);

/// FNV-1a over the bit patterns of the samples.
std::uint64_t checksum(std::span<const double> x);

/// Tick total of a stage list. Without accelerators every stage runs in
/// sequence; with two, each parallel group costs its two-lane makespan
/// (longest-processing-time assignment), so a low/high pair costs the max.
std::uint64_t schedule_ticks(const std::vector<StageSpec>& stages, int accelerators,
                             std::map<std::string, std::uint64_t>* per_stage = nullptr);

/// Stages of the SWT + mask + inverse datapath for one channel:
/// filter upsampling (Msa/Msd), decomposition (Ma/Md), thresholding
/// (Mat/Mdt) and reconstruction into external memory.
PipelineConfig separation_pipeline(const FilterPair& filters, int levels, int accelerators,
                                   std::size_t capacity = 5000, bool quantize_input = false);

/// Stages of the band-pass, Morlet, smoothing and normalization chain
/// (Mb, Mw, Ms, Mn) for one channel and one band.
PipelineConfig mapping_pipeline(const Band& band, const MorletParams& params, int accelerators,
                                std::size_t capacity = 5000, const MapSettings& settings = {},
                                bool quantize_input = false);

struct PipelineOutput {
    Samples output;
    TickReport report;
};

/// Oscillatory branch of the masked SWT split, costed by `config`.
/// Arithmetic is that of swt_decompose/threshold_coeffs/iswt_reconstruct, so
/// the output matches separate() for the same mask and never depends on
/// the accelerator setting.
PipelineOutput run_pipeline(std::span<const double> x, const PipelineConfig& config,
                            const FilterPair& filters, const RectMask& mask);

/// Normalized band-energy row of one channel (self-referenced), costed by `config`.
PipelineOutput run_mapping_pipeline(std::span<const double> x, const PipelineConfig& config,
                                    const MorletParams& params, const Band& band = {80.0, 90.0},
                                    const MapSettings& settings = {});

struct BenchOptions {
    std::size_t repetitions = 600;
    /// Target frequency per workload channel (cycled if shorter).
    std::vector<double> target_freqs_hz = {45.0, 55.0, 85.0};
    std::string wavelet = "db4";
    /// Band of the mapping configs, shared by every channel like a map row.
    Band map_band{80.0, 90.0};
    MorletParams morlet;
    MapSettings map_settings;
};

struct BenchReport {
    std::string text;
    std::string csv;
    /// Measured time of the plain software despiker over the workload, one pass.
    /// Kept out of text/csv so the report files stay reproducible.
    double software_seconds_per_pass = 0.0;
};

/// Runs every config over every workload channel and summarizes ticks per
/// invocation, per workload pass and per repetition sweep. Accelerator ratios
/// are listed for each pipeline kind that has both a 0- and a 2-accelerator config.
BenchReport benchmark_report(const std::vector<PipelineConfig>& configs,
                             const MultiChannelSignal& workload, const BenchOptions& options = {});

} // namespace gammasep
