#include "gammasep/dataflow.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gammasep/swt.hpp"

namespace gammasep {

namespace {

std::uint64_t stage_cost(const StageSpec& s) {
    constexpr std::uint64_t kUnits = 1;
    const std::uint64_t work = static_cast<std::uint64_t>(s.items) * static_cast<std::uint64_t>(s.taps);
    return (work + kUnits - 1) / kUnits;
}

std::uint64_t two_lane_makespan(std::vector<std::uint64_t> costs) {
    std::stable_sort(costs.begin(), costs.end(), std::greater<>());
    std::array<std::uint64_t, 2> lanes{0, 0};
    for (auto c : costs) {
        auto& lane = lanes[0] <= lanes[1] ? lanes[0] : lanes[1];
        lane += c;
    }
    return std::max(lanes[0], lanes[1]);
}

void check_input(std::span<const double> x, const PipelineConfig& config, PipelineKind kind) {
    config.validate();
    if (config.kind != kind)
        throw std::invalid_argument("pipeline config is for " + to_string(config.kind) +
                                    ", not " + to_string(kind));
    if (x.size() != config.capacity)
        throw std::invalid_argument("input has " + std::to_string(x.size()) +
                                    " samples but the data vector holds " +
                                    std::to_string(config.capacity));
}

TickReport account(const PipelineConfig& config, std::span<const double> output) {
    TickReport r;
    r.total_ticks = schedule_ticks(config.stages, config.accelerators, &r.per_stage_ticks);
    for (const auto& m : config.memory_names) r.per_memory_writes[m] = 0;
    for (const auto& s : config.stages) r.per_memory_writes[s.memory] += s.items;
    r.output_checksum = checksum(output);
    return r;
}

} // namespace

std::string to_string(PipelineKind kind) {
    return kind == PipelineKind::Separation ? "separation" : "mapping";
}

void PipelineConfig::validate() const {
    if (accelerators != 0 && accelerators != 2)
        throw std::invalid_argument("accelerators must be 0 or 2, got " + std::to_string(accelerators));
    if (stages.empty()) throw std::invalid_argument("pipeline has no stages");
    if (capacity == 0) throw std::invalid_argument("data-vector capacity must be positive");
    std::set<std::string> names;
    const std::set<std::string> memories(memory_names.begin(), memory_names.end());
    for (const auto& s : stages) {
        if (!names.insert(s.name).second)
            throw std::invalid_argument("duplicate stage name '" + s.name + "'");
        if (!memories.contains(s.memory))
            throw std::invalid_argument("stage '" + s.name + "' writes to unknown memory '" +
                                        s.memory + "'");
    }
}

Samples quantize(std::span<const double> x) {
    Samples q(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        q[i] = std::clamp(kQuantLow + kQuantStep * std::round((x[i] - kQuantLow) / kQuantStep),
                          kQuantLow, kQuantHigh);
    return q;
}

std::uint64_t checksum(std::span<const double> x) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : x) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::uint64_t schedule_ticks(const std::vector<StageSpec>& stages, int accelerators,
                             std::map<std::string, std::uint64_t>* per_stage) {
    std::uint64_t total = 0;
    std::map<int, std::vector<std::uint64_t>> groups;
    for (const auto& s : stages) {
        const std::uint64_t c = stage_cost(s);
        if (per_stage) (*per_stage)[s.name] = c;
        if (accelerators == 0 || s.parallel_group < 0)
            total += c;
        else
            groups[s.parallel_group].push_back(c);
    }
    for (auto& [id, costs] : groups) total += two_lane_makespan(std::move(costs));
    return total;
}

PipelineConfig separation_pipeline(const FilterPair& filters, int levels, int accelerators,
                                   std::size_t capacity, bool quantize_input) {
    filters.validate();
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    PipelineConfig c;
    c.kind = PipelineKind::Separation;
    c.accelerators = accelerators;
    c.quantize_input = quantize_input;
    c.capacity = capacity;
    c.levels = levels;
    c.memory_names = {"Msa", "Msd", "Ma", "Md", "Mat", "Mdt", "external"};
    const std::size_t taps = filters.length();
    int group = 0;
    for (int j = 1; j <= levels; ++j) {
        const std::string lv = std::to_string(j);
        const std::size_t up_len = (taps - 1) * (std::size_t{1} << (j - 1)) + 1;
        c.stages.push_back({"upsample_lo_" + lv, up_len, 1, group, "Msa"});
        c.stages.push_back({"upsample_hi_" + lv, up_len, 1, group++, "Msd"});
        c.stages.push_back({"decompose_lo_" + lv, capacity, taps, group, "Ma"});
        c.stages.push_back({"decompose_hi_" + lv, capacity, taps, group++, "Md"});
        c.stages.push_back({"threshold_approx_" + lv, capacity, 1, group, "Mat"});
        c.stages.push_back({"threshold_detail_" + lv, capacity, 1, group++, "Mdt"});
    }
    for (int j = levels; j >= 1; --j) {
        const std::string lv = std::to_string(j);
        c.stages.push_back({"reconstruct_lo_" + lv, capacity, taps, group, "external"});
        c.stages.push_back({"reconstruct_hi_" + lv, capacity, taps, group++, "external"});
        c.stages.push_back({"combine_" + lv, capacity, 1, -1, "external"});
    }
    return c;
}

PipelineConfig mapping_pipeline(const Band& band, const MorletParams& params, int accelerators,
                                std::size_t capacity, const MapSettings& settings,
                                bool quantize_input) {
    const double fs = params.sample_rate_hz;
    PipelineConfig c;
    c.kind = PipelineKind::Mapping;
    c.accelerators = accelerators;
    c.quantize_input = quantize_input;
    c.capacity = capacity;
    c.memory_names = {"Mb", "Mw", "Ms", "Mn"};
    c.stages.push_back({"bandpass_band", capacity, design_bandpass(band, fs).size(), 0, "Mb"});
    c.stages.push_back({"bandpass_low", capacity, design_bandpass(settings.low_band, fs).size(), 0, "Mb"});
    // Complex kernels: one real and one imaginary multiply-add per tap.
    auto add_scales = [&](const Band& b, const std::string& prefix) {
        const MorletParams p = params.for_band(b, settings.scale_step_hz);
        for (std::size_t i = 0; i < p.scales.size(); ++i)
            c.stages.push_back({prefix + std::to_string(i), capacity,
                                2 * morlet_kernel(p, p.scales[i]).size(), 1, "Mw"});
    };
    add_scales(band, "morlet_band_");
    add_scales(settings.low_band, "morlet_low_");
    c.stages.push_back({"smooth_band", capacity, settings.smoothing_width, 2, "Ms"});
    c.stages.push_back({"smooth_low", capacity, settings.smoothing_width, 2, "Ms"});
    c.stages.push_back({"normalize", capacity, 1, -1, "Mn"});
    return c;
}

PipelineOutput run_pipeline(std::span<const double> x, const PipelineConfig& config,
                            const FilterPair& filters, const RectMask& mask) {
    check_input(x, config, PipelineKind::Separation);
    const Samples input = config.quantize_input ? quantize(x) : Samples(x.begin(), x.end());
    const WaveletCoefficients coeffs = swt_decompose(input, filters, config.levels);
    const ThresholdedCoefficients split = threshold_coeffs(coeffs, mask);
    PipelineOutput out;
    out.output = iswt_reconstruct(split.oscillatory, filters);
    out.report = account(config, out.output);
    return out;
}

PipelineOutput run_mapping_pipeline(std::span<const double> x, const PipelineConfig& config,
                                    const MorletParams& params, const Band& band,
                                    const MapSettings& settings) {
    check_input(x, config, PipelineKind::Mapping);
    const Samples input = config.quantize_input ? quantize(x) : Samples(x.begin(), x.end());
    const Samples env = band_envelope(input, band, params, settings);
    PipelineOutput out;
    out.output = normalize_by_low_band(env, input, params.sample_rate_hz, params, settings);
    out.report = account(config, out.output);
    return out;
}

BenchReport benchmark_report(const std::vector<PipelineConfig>& configs,
                             const MultiChannelSignal& workload, const BenchOptions& options) {
    if (configs.empty()) throw std::invalid_argument("benchmark needs at least one config");
    if (options.target_freqs_hz.empty()) throw std::invalid_argument("no target frequencies");
    const FilterPair filters = wavelet_by_name(options.wavelet);
    const double fs = workload.sample_rate_hz();
    MorletParams morlet = options.morlet;
    morlet.sample_rate_hz = fs;
    const std::size_t nch = workload.channel_count();
    auto target = [&](std::size_t ch) { return options.target_freqs_hz[ch % options.target_freqs_hz.size()]; };

    // Software reference path; it also supplies the masks for the separation configs.
    std::vector<RectMask> masks;
    int levels = 5;
    for (const auto& c : configs)
        if (c.kind == PipelineKind::Separation) levels = c.levels;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t ch = 0; ch < nch; ++ch) {
        const auto x = workload.channel(ch);
        SeparationOptions so;
        so.levels = levels;
        try {
            masks.push_back(separate(x, target(ch), fs, filters, so).mask_used);
        } catch (const NoDetectionError&) {
            masks.push_back(centered_mask(x.size() / 2, x.size(), target(ch), fs, levels, so));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    struct Row {
        std::uint64_t pass_ticks = 0;
        std::uint64_t checksum = 0xcbf29ce484222325ULL;
        std::vector<std::uint64_t> channel_ticks;
    };
    std::vector<Row> rows;
    for (const auto& c : configs) {
        Row row;
        for (std::size_t ch = 0; ch < nch; ++ch) {
            const auto x = workload.channel(ch);
            PipelineOutput r;
            if (c.kind == PipelineKind::Separation) {
                r = run_pipeline(x, c, filters, masks[ch]);
            } else {
                r = run_mapping_pipeline(x, c, morlet, options.map_band, options.map_settings);
            }
            row.pass_ticks += r.report.total_ticks;
            row.channel_ticks.push_back(r.report.total_ticks);
            row.checksum = (row.checksum ^ r.report.output_checksum) * 0x100000001b3ULL;
        }
        rows.push_back(std::move(row));
    }

    std::ostringstream text, csv;
    csv << "record,kind,accelerators,quantize_input,ticks_per_pass,sweep_ticks,checksum,ratio\n";
    text << "workload: " << nch << " channel(s) x " << workload.sample_count() << " samples, "
         << options.repetitions << " repetitions\n\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto& c = configs[i];
        const std::uint64_t sweep = rows[i].pass_ticks * options.repetitions;
        text << "config " << i << ": " << to_string(c.kind) << ", " << c.accelerators
             << " accelerator(s)" << (c.quantize_input ? ", quantized input" : "") << "\n";
        text << "  ticks per invocation:";
        for (auto t : rows[i].channel_ticks) text << ' ' << t;
        text << "\n  ticks per pass: " << rows[i].pass_ticks << "\n  ticks per sweep: " << sweep
             << "\n  output checksum: " << std::hex << rows[i].checksum << std::dec << "\n";
        csv << "config" << i << ',' << to_string(c.kind) << ',' << c.accelerators << ','
            << (c.quantize_input ? 1 : 0) << ',' << rows[i].pass_ticks << ',' << sweep << ','
            << std::hex << rows[i].checksum << std::dec << ",\n";
    }
    bool header = false;
    for (PipelineKind kind : {PipelineKind::Separation, PipelineKind::Mapping}) {
        const PipelineConfig* base = nullptr;
        const PipelineConfig* accel = nullptr;
        std::size_t bi = 0, ai = 0;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            if (configs[i].kind != kind) continue;
            if (configs[i].accelerators == 0 && !base) base = &configs[i], bi = i;
            if (configs[i].accelerators == 2 && !accel) accel = &configs[i], ai = i;
        }
        if (!base || !accel) continue;
        const double ratio = static_cast<double>(rows[bi].pass_ticks) / static_cast<double>(rows[ai].pass_ticks);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", ratio);
        if (!header) {
            text << "\naccelerator speedup (0 / 2 accelerators):\n";
            header = true;
        }
        text << "  " << to_string(kind) << ": " << buf << "\n";
        csv << "ratio," << to_string(kind) << ",,,,,," << buf << "\n";
    }
    return {text.str(), csv.str(), seconds};
}

} // namespace gammasep
