#include "gammasep/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gammasep {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

bool parse_number(std::string_view text, double& value) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

} // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_signal_csv(std::ostream& out, const MultiChannelSignal& signal) {
    out << "# rate=" << format_double(signal.sample_rate_hz()) << '\n';
    const auto& labels = signal.channel_labels();
    for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
    out << '\n';
    for (std::size_t t = 0; t < signal.sample_count(); ++t) {
        for (std::size_t c = 0; c < signal.channel_count(); ++c)
            out << (c ? "," : "") << format_double(signal.data()[c][t]);
        out << '\n';
    }
}

MultiChannelSignal read_signal_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(source, line_no, "empty input");
    std::string_view head = trim(line);
    constexpr std::string_view kRate = "# rate=";
    if (!head.starts_with(kRate)) throw ParseError(source, line_no, "expected '# rate=<Hz>' header");
    double rate = 0.0;
    if (!parse_number(trim(head.substr(kRate.size())), rate) || !(rate > 0.0))
        throw ParseError(source, line_no, "sample rate must be a positive number");

    ++line_no;
    if (!std::getline(in, line)) throw ParseError(source, line_no, "missing channel label line");
    std::vector<std::string> labels;
    for (auto l : split(trim(line), ',')) {
        if (l.empty()) throw ParseError(source, line_no, "empty channel label");
        labels.emplace_back(l);
    }

    std::vector<Samples> data(labels.size());
    bool trailing_blank = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) {
            trailing_blank = true;
            continue;
        }
        if (trailing_blank) throw ParseError(source, line_no - 1, "blank line inside data");
        const auto fields = split(row, ',');
        if (fields.size() != labels.size())
            throw ParseError(source, line_no, "expected " + std::to_string(labels.size()) +
                                                  " values, found " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_number(fields[c], v))
                throw ParseError(source, line_no, "not a finite number: '" + std::string(fields[c]) + "'");
            data[c].push_back(v);
        }
    }
    if (data.empty() || data.front().empty()) throw ParseError(source, line_no, "no samples");
    return MultiChannelSignal(rate, std::move(labels), std::move(data));
}

void save_signal_csv(const std::filesystem::path& path, const MultiChannelSignal& signal) {
    std::ostringstream out;
    write_signal_csv(out, signal);
    write_text_file(path, out.str());
}

MultiChannelSignal load_signal_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_signal_csv(in, path.string());
}

std::string format_truth_manifest(const GroundTruth& truth, double sample_rate_hz) {
    std::ostringstream out;
    out << "realization=" << truth.realization_index << '\n';
    out << "seed=" << truth.seed << '\n';
    out << "sample_rate_hz=" << format_double(sample_rate_hz) << '\n';
    out << "channels=" << truth.channels.size() << '\n';
    for (std::size_t c = 0; c < truth.channels.size(); ++c) {
        const auto& ch = truth.channels[c];
        const std::string p = "ch" + std::to_string(c + 1) + ".";
        out << p << "burst_freq_hz=" << format_double(ch.burst_freq_hz) << '\n';
        out << p << "burst_start=" << ch.burst_window.start_sample << '\n';
        out << p << "burst_length=" << ch.burst_window.length_samples << '\n';
        out << p << "transient_start=" << ch.transient_window.start_sample << '\n';
        out << p << "transient_length=" << ch.transient_window.length_samples << '\n';
        out << p << "overlap_fraction=" << format_double(ch.overlap_fraction) << '\n';
        out << p << "regime=" << to_string(ch.regime) << '\n';
        out << p << "noise_gain=" << format_double(ch.noise_gain) << '\n';
    }
    return out.str();
}

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#') continue;
        const std::size_t eq = row.find('=');
        if (eq == std::string_view::npos || eq == 0) throw ParseError(source, line_no, "expected key=value");
        kv[std::string(trim(row.substr(0, eq)))] = std::string(trim(row.substr(eq + 1)));
    }
    return kv;
}

std::map<std::string, std::string> load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_key_values(in, path.string());
}

std::string format_map_pgm(const SpatioTemporalMap& map, std::size_t time_step) {
    if (time_step == 0) throw std::invalid_argument("image time step must be positive");
    const std::size_t n = map.sample_count();
    const std::size_t width = std::max<std::size_t>(1, (n + time_step - 1) / time_step);
    const std::size_t height = map.channel_count();
    const double peak = map.max_value();
    std::ostringstream out;
    out << "P5\n" << width << ' ' << height << "\n255\n";
    std::string pixels(width * height, '\0');
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t col = 0; col < width; ++col) {
            const std::size_t first = col * time_step;
            const std::size_t last = std::min(n, first + time_step);
            double s = 0.0;
            for (std::size_t t = first; t < last; ++t) s += map.values[r][t];
            const double mean = last > first ? s / static_cast<double>(last - first) : 0.0;
            const double level = peak > 0.0 ? std::clamp(mean / peak, 0.0, 1.0) * 255.0 : 0.0;
            pixels[r * width + col] = static_cast<char>(static_cast<unsigned char>(std::lround(level)));
        }
    }
    out << pixels;
    return out.str();
}

void write_map_csv(std::ostream& out, const SpatioTemporalMap& map) {
    out << "# rate=" << format_double(map.sample_rate_hz) << " band=" << format_double(map.band.low_hz)
        << ':' << format_double(map.band.high_hz) << '\n';
    for (std::size_t c = 0; c < map.channel_count(); ++c) {
        out << map.channel_labels.at(c);
        for (double v : map.values[c]) out << ',' << format_double(v);
        out << '\n';
    }
}

std::string format_detection(const BuildupDetection& det, const SpatioTemporalMap& map) {
    std::ostringstream out;
    out << "detected=" << (det.detected() ? "true" : "false") << '\n';
    out << "channels=";
    bool first = true;
    for (auto c : det.channel_indices) {
        out << (first ? "" : ",") << map.channel_labels.at(c);
        first = false;
    }
    out << '\n';
    out << "channel_indices=";
    first = true;
    for (auto c : det.channel_indices) {
        out << (first ? "" : ",") << c;
        first = false;
    }
    out << '\n';
    if (det.detected()) {
        out << "onset_sample=" << det.onset_sample << '\n';
        out << "onset_ms=" << format_double(1000.0 * static_cast<double>(det.onset_sample) / map.sample_rate_hz) << '\n';
    }
    out << "peak_energy=" << format_double(det.peak_energy) << '\n';
    out << "threshold=" << format_double(det.threshold) << '\n';
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

} // namespace gammasep
