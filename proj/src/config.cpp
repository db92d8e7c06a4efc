#include "gammasep/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gammasep/io.hpp"
#include "gammasep/wavelets.hpp"

namespace gammasep {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
    if (!obj.is_object()) throw std::invalid_argument(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!known.contains(key)) throw std::invalid_argument("unknown key '" + where + "." + key + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& dst, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(where + "." + key + " has the wrong type");
    }
}

Band read_band(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(where + " must be [low, high]");
    return {j[0].get<double>(), j[1].get<double>()};
}

void read_sim(const json& j, SimConfig& s) {
    const std::string w = "sim";
    reject_unknown(j, w, {"sample_rate_hz", "n_samples", "burst_freqs_hz", "overlap_regimes", "snr_db",
                          "n_realizations", "rng_seed", "noise_exponent", "burst_amplitude_uv",
                          "transient_amplitude_uv", "transient_width_ms", "burst_durations_ms",
                          "burst_center_sample", "separation_gap_ms"});
    read(j, "sample_rate_hz", s.sample_rate_hz, w);
    read(j, "n_samples", s.n_samples, w);
    read(j, "burst_freqs_hz", s.burst_freqs_hz, w);
    if (j.contains("overlap_regimes")) {
        std::vector<std::string> names;
        read(j, "overlap_regimes", names, w);
        s.overlap_regimes.clear();
        for (const auto& n : names) s.overlap_regimes.push_back(overlap_regime_from_string(n));
    }
    // null means noise-free
    if (j.contains("snr_db") && j.at("snr_db").is_null())
        s.snr_db = std::numeric_limits<double>::infinity();
    else
        read(j, "snr_db", s.snr_db, w);
    read(j, "n_realizations", s.n_realizations, w);
    read(j, "rng_seed", s.rng_seed, w);
    read(j, "noise_exponent", s.noise_exponent, w);
    read(j, "burst_amplitude_uv", s.burst_amplitude_uv, w);
    read(j, "transient_amplitude_uv", s.transient_amplitude_uv, w);
    read(j, "transient_width_ms", s.transient_width_ms, w);
    read(j, "burst_durations_ms", s.burst_durations_ms, w);
    read(j, "burst_center_sample", s.burst_center_sample, w);
    read(j, "separation_gap_ms", s.separation_gap_ms, w);
}

} // namespace

void RunConfig::validate() const {
    sim.validate();
    (void)wavelet_by_name(wavelet);
    if (separation.levels < 1 || separation.levels > 12)
        throw std::invalid_argument("levels must be in [1, 12]");
    if ((std::size_t{1} << separation.levels) > sim.n_samples)
        throw std::invalid_argument("2^levels exceeds the simulated signal length");
    if (separation.duration_ms_override && !(*separation.duration_ms_override > 0.0))
        throw std::invalid_argument("mask.duration_ms must be positive");
    if (separation.n_scales_override && *separation.n_scales_override < 1)
        throw std::invalid_argument("mask.n_scales must be >= 1");
    if (!(morlet.w0 > 0.0) || !(morlet.s > 0.0))
        throw std::invalid_argument("morlet.w0 and morlet.s must be positive");
    if (map.smoothing_width < 1) throw std::invalid_argument("map.smoothing_width must be >= 1");
    if (!(map.scale_step_hz > 0.0)) throw std::invalid_argument("map.scale_step_hz must be positive");
    if (!(map.low_band.low_hz > 0.0) || !(map.low_band.low_hz < map.low_band.high_hz))
        throw std::invalid_argument("map.low_band must satisfy 0 < low < high");
    if (band && !(band->low_hz > 0.0 && band->low_hz < band->high_hz))
        throw std::invalid_argument("band must satisfy 0 < low < high");
    if (!(k_sigma >= 0.0)) throw std::invalid_argument("detector.k_sigma must be >= 0");
    if (!(detector.mad_floor_fraction >= 0.0))
        throw std::invalid_argument("detector.mad_floor_fraction must be >= 0");
    if (detector.min_run_samples < 1) throw std::invalid_argument("detector.min_run_samples must be >= 1");
    if (!(detector.channel_window_ms > 0.0))
        throw std::invalid_argument("detector.channel_window_ms must be positive");
    if (bench.repetitions < 1) throw std::invalid_argument("bench.repetitions must be >= 1");
    if (bench.accelerators.empty()) throw std::invalid_argument("bench.accelerators must not be empty");
    for (int a : bench.accelerators)
        if (a != 0 && a != 2) throw std::invalid_argument("bench.accelerators entries must be 0 or 2");
    if (image_time_step < 1) throw std::invalid_argument("image_time_step must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
}

RunConfig parse_run_config(const std::string& json_text, const std::string& source) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(source + ": invalid JSON: " + e.what());
    }
    RunConfig c;
    const std::string w = "config";
    reject_unknown(j, w, {"sim", "seed", "wavelet", "levels", "mask", "morlet", "map", "band",
                          "detector", "bench", "output_dir", "image_time_step"});
    if (j.contains("sim")) read_sim(j.at("sim"), c.sim);
    read(j, "seed", c.sim.rng_seed, w);
    read(j, "wavelet", c.wavelet, w);
    read(j, "levels", c.separation.levels, w);
    if (j.contains("mask")) {
        const auto& m = j.at("mask");
        reject_unknown(m, "mask", {"duration_ms", "n_scales"});
        if (m.contains("duration_ms")) {
            double d = 0.0;
            read(m, "duration_ms", d, "mask");
            c.separation.duration_ms_override = d;
        }
        if (m.contains("n_scales")) {
            int k = 0;
            read(m, "n_scales", k, "mask");
            c.separation.n_scales_override = k;
        }
    }
    if (j.contains("morlet")) {
        const auto& m = j.at("morlet");
        reject_unknown(m, "morlet", {"w0", "s"});
        read(m, "w0", c.morlet.w0, "morlet");
        read(m, "s", c.morlet.s, "morlet");
    }
    if (j.contains("map")) {
        const auto& m = j.at("map");
        reject_unknown(m, "map", {"smoothing_width", "low_band", "scale_step_hz"});
        read(m, "smoothing_width", c.map.smoothing_width, "map");
        read(m, "scale_step_hz", c.map.scale_step_hz, "map");
        if (m.contains("low_band")) c.map.low_band = read_band(m.at("low_band"), "map.low_band");
    }
    if (j.contains("band")) c.band = read_band(j.at("band"), "band");
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        reject_unknown(d, "detector", {"k_sigma", "mad_floor_fraction", "min_run_samples", "channel_window_ms"});
        read(d, "k_sigma", c.k_sigma, "detector");
        read(d, "mad_floor_fraction", c.detector.mad_floor_fraction, "detector");
        read(d, "min_run_samples", c.detector.min_run_samples, "detector");
        read(d, "channel_window_ms", c.detector.channel_window_ms, "detector");
    }
    if (j.contains("bench")) {
        const auto& b = j.at("bench");
        reject_unknown(b, "bench", {"repetitions", "accelerators", "quantize_input"});
        read(b, "repetitions", c.bench.repetitions, "bench");
        read(b, "accelerators", c.bench.accelerators, "bench");
        read(b, "quantize_input", c.bench.quantize_input, "bench");
    }
    read(j, "output_dir", c.output_dir, w);
    read(j, "image_time_step", c.image_time_step, w);
    c.morlet.sample_rate_hz = c.sim.sample_rate_hz;
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.string());
}

Band parse_band(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("band must look like lo:hi, got '" + text + "'");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_text = text.substr(0, colon), hi_text = text.substr(colon + 1);
        const Band b{std::stod(lo_text, &used_lo), std::stod(hi_text, &used_hi)};
        if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("");
        if (!(b.low_hz > 0.0 && b.low_hz < b.high_hz)) throw std::invalid_argument("");
        return b;
    } catch (const std::exception&) {
        throw std::invalid_argument("band must look like lo:hi with 0 < lo < hi, got '" + text + "'");
    }
}

} // namespace gammasep
