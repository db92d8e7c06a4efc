#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gammasep/commands.hpp"
#include "gammasep/config.hpp"
#include "gammasep/despiker.hpp"
#include "gammasep/io.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNoDetection = 3;
constexpr int kExitIo = 1;

} // namespace

int main(int argc, char** argv) {
    using namespace gammasep;

    CLI::App app{"Transient/oscillation separation, band-energy mapping and pipeline cost model"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_option("--out", out_dir, "output directory (overrides the config)");

    auto* sim = app.add_subcommand("simulate", "write simulated realizations and their ground truth");

    auto* despike = app.add_subcommand("despike", "split each channel into oscillatory and transient parts");
    std::string despike_input;
    double despike_freq = 85.0;
    despike->add_option("input", despike_input, "signal CSV")->required()->check(CLI::ExistingFile);
    despike->add_option("--freq", despike_freq, "target oscillation frequency in Hz");

    auto* map = app.add_subcommand("map", "band-energy map and build-up detection");
    std::string map_input, map_reference, band_text;
    std::optional<double> map_freq;
    map->add_option("input", map_input, "signal CSV")->required()->check(CLI::ExistingFile);
    map->add_option("--band", band_text, "analysis band lo:hi in Hz");
    map->add_option("--freq", map_freq, "pick the band paired with this frequency");
    map->add_option("--reference", map_reference, "recording used for low-band normalization")
        ->check(CLI::ExistingFile);

    auto* bench = app.add_subcommand("bench", "tick-cost benchmark of the modeled datapath");
    std::vector<int> accel;
    std::string workload;
    bench->add_option("--accel", accel, "accelerator count(s) to model")->check(CLI::IsMember({0, 2}));
    bench->add_option("--workload", workload, "signal CSV to run instead of a simulated realization")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed) config.sim.rng_seed = *seed;
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (!accel.empty()) config.bench.accelerators = accel;
        config.validate();
        const std::filesystem::path out = config.output_dir;

        if (*sim) {
            const std::size_t n = cmd_simulate(config, out);
            std::cout << "wrote " << n << " realization(s) to " << out.string() << '\n';
        } else if (*despike) {
            const DespikeSummary s = cmd_despike(despike_input, despike_freq, config, out);
            std::cout << "split error " << format_double(s.max_split_error)
                      << (s.max_split_error <= 1e-9 ? " (ok)" : " (exceeds 1e-9)") << '\n';
            for (std::size_t c = 0; c < s.mask_windows.size(); ++c)
                std::cout << "channel " << c + 1 << ": mask [" << s.mask_windows[c].start_sample << ", "
                          << s.mask_windows[c].end() << ")\n";
        } else if (*map) {
            Band band = band_for_target(map_freq.value_or(85.0));
            if (config.band) band = *config.band;
            if (!band_text.empty()) band = parse_band(band_text);
            std::optional<std::filesystem::path> ref;
            if (!map_reference.empty()) ref = map_reference;
            const BuildupDetection det = cmd_map(map_input, band, config, out, ref);
            if (det.detected()) {
                std::cout << "build-up at sample " << det.onset_sample << " on channel(s)";
                for (auto c : det.channel_indices) std::cout << ' ' << c + 1;
                std::cout << '\n';
            } else {
                std::cout << "no build-up detected\n";
            }
        } else if (*bench) {
            std::optional<std::filesystem::path> w;
            if (!workload.empty()) w = workload;
            const BenchReport r = cmd_bench(config, out, w);
            std::cout << r.text;
            std::printf("software despiker wall-clock: %.6f s per pass\n", r.software_seconds_per_pass);
        }
    } catch (const NoDetectionError& e) {
        std::cerr << "no detection: " << e.what() << '\n';
        return kExitNoDetection;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
