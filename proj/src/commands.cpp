#include "gammasep/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "gammasep/io.hpp"
#include "gammasep/simgen.hpp"
#include "gammasep/wavelets.hpp"

namespace gammasep {

namespace {

std::string realization_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "realization_%03zu", index);
    return buf;
}

// Runs body(i) for i in [0, count) on a few worker threads; the first
// exception is rethrown once all workers stop.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace

std::size_t cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    ensure_directory(out_dir);
    const std::size_t count = config.sim.n_realizations;
    parallel_for(count, [&](std::size_t i) {
        const Realization r = build_realization(config.sim, i);
        const std::string stem = realization_stem(i);
        save_signal_csv(out_dir / (stem + ".csv"), r.signal);
        write_text_file(out_dir / (stem + ".truth.txt"),
                        format_truth_manifest(r.truth, config.sim.sample_rate_hz));
    });
    return count;
}

DespikeSummary cmd_despike(const std::filesystem::path& input, double target_freq_hz,
                           const RunConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    const MultiChannelSignal signal = load_signal_csv(input);
    const FilterPair filters = wavelet_by_name(config.wavelet);
    const double fs = signal.sample_rate_hz();
    const std::size_t nch = signal.channel_count();

    std::vector<std::optional<SeparationResult>> results(nch);
    parallel_for(nch, [&](std::size_t c) {
        results[c] = separate(signal.channel(c), target_freq_hz, fs, filters, config.separation);
    });

    DespikeSummary summary;
    std::vector<Samples> osc, trans;
    std::ostringstream report;
    report << "input=" << input.filename().string() << '\n';
    report << "target_freq_hz=" << format_double(target_freq_hz) << '\n';
    report << "wavelet=" << filters.name << '\n';
    report << "levels=" << config.separation.levels << '\n';
    for (std::size_t c = 0; c < nch; ++c) {
        const SeparationResult& r = *results[c];
        const auto x = signal.channel(c);
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            err = std::max(err, std::abs(r.oscillatory[i] + r.transient[i] - x[i]));
        summary.max_split_error = std::max(summary.max_split_error, err);
        summary.mask_windows.push_back(r.mask_used.window());
        summary.centers.push_back(r.detection_center_sample);

        const std::string p = signal.channel_labels()[c] + ".";
        report << p << "detection_center=" << r.detection_center_sample << '\n';
        report << p << "mask_start=" << r.mask_used.window().start_sample << '\n';
        report << p << "mask_length=" << r.mask_used.window().length_samples << '\n';
        report << p << "mask_scales=";
        bool first = true;
        for (int s : r.mask_used.scales()) {
            report << (first ? "" : ",") << s;
            first = false;
        }
        report << '\n';
        report << p << "split_error=" << format_double(err) << '\n';
        osc.push_back(r.oscillatory);
        trans.push_back(r.transient);
    }
    report << "split_ok=" << (summary.max_split_error <= 1e-9 ? "true" : "false") << '\n';

    ensure_directory(out_dir);
    save_signal_csv(out_dir / "oscillatory.csv", MultiChannelSignal(fs, signal.channel_labels(), std::move(osc)));
    save_signal_csv(out_dir / "transient.csv", MultiChannelSignal(fs, signal.channel_labels(), std::move(trans)));
    write_text_file(out_dir / "mask.txt", report.str());
    return summary;
}

BuildupDetection cmd_map(const std::filesystem::path& input, const Band& band, const RunConfig& config,
                         const std::filesystem::path& out_dir,
                         const std::optional<std::filesystem::path>& reference) {
    config.validate();
    const MultiChannelSignal signal = load_signal_csv(input);
    std::optional<MultiChannelSignal> ref;
    if (reference) ref = load_signal_csv(*reference);
    MorletParams params = config.morlet;
    params.sample_rate_hz = signal.sample_rate_hz();
    const SpatioTemporalMap map =
        spatiotemporal_map(signal, band, params, config.map, ref ? &*ref : nullptr);
    const BuildupDetection det = detect_buildup(map, config.k_sigma, config.detector);

    ensure_directory(out_dir);
    std::ostringstream csv;
    write_map_csv(csv, map);
    write_text_file(out_dir / "map.csv", csv.str());
    write_text_file(out_dir / "detection.txt", format_detection(det, map));
    write_text_file(out_dir / "map.pgm", format_map_pgm(map, config.image_time_step));
    return det;
}

BenchReport cmd_bench(const RunConfig& config, const std::filesystem::path& out_dir,
                      const std::optional<std::filesystem::path>& workload) {
    config.validate();
    const MultiChannelSignal signal =
        workload ? load_signal_csv(*workload) : build_realization(config.sim, 0).signal;
    const FilterPair filters = wavelet_by_name(config.wavelet);
    MorletParams params = config.morlet;
    params.sample_rate_hz = signal.sample_rate_hz();

    BenchOptions options;
    options.repetitions = config.bench.repetitions;
    options.wavelet = config.wavelet;
    options.morlet = params;
    options.map_settings = config.map;
    if (config.band) options.map_band = *config.band;
    if (!workload) options.target_freqs_hz = config.sim.burst_freqs_hz;

    std::vector<PipelineConfig> configs;
    for (int a : config.bench.accelerators)
        configs.push_back(separation_pipeline(filters, config.separation.levels, a, signal.sample_count(),
                                              config.bench.quantize_input));
    for (int a : config.bench.accelerators)
        configs.push_back(mapping_pipeline(options.map_band, params, a, signal.sample_count(), config.map,
                                           config.bench.quantize_input));
    BenchReport report = benchmark_report(configs, signal, options);

    ensure_directory(out_dir);
    write_text_file(out_dir / "bench.txt", report.text);
    write_text_file(out_dir / "bench.csv", report.csv);
    return report;
}

} // namespace gammasep
