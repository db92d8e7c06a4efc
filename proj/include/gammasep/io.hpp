#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gammasep/signal.hpp"
#include "gammasep/simgen.hpp"
#include "gammasep/tf_mapping.hpp"

namespace gammasep {

/// Malformed input text; `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened, written or created.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest text that round-trips the double exactly.
std::string format_double(double v);

/// Signal CSV: `# rate=<Hz>`, a line of channel labels, then one
/// comma-separated row per sample.
void write_signal_csv(std::ostream& out, const MultiChannelSignal& signal);
MultiChannelSignal read_signal_csv(std::istream& in, const std::string& source = "<stream>");

void save_signal_csv(const std::filesystem::path& path, const MultiChannelSignal& signal);
MultiChannelSignal load_signal_csv(const std::filesystem::path& path);

/// Flat `key=value` lines, one per fact, channel keys prefixed `chN.`.
std::string format_truth_manifest(const GroundTruth& truth, double sample_rate_hz);
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source = "<stream>");
std::map<std::string, std::string> load_key_values(const std::filesystem::path& path);

/// Binary PGM, one row per channel, `time_step` samples averaged per column,
/// gray level linear over [0, max value]; an all-zero map is black.
std::string format_map_pgm(const SpatioTemporalMap& map, std::size_t time_step);

/// Map as CSV: `# rate=<Hz> band=<lo>:<hi>`, then `<label>,v0,v1,...` per channel.
void write_map_csv(std::ostream& out, const SpatioTemporalMap& map);

std::string format_detection(const BuildupDetection& det, const SpatioTemporalMap& map);

/// Writes `content` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Creates `dir` (and parents), throwing IoError with the path on failure.
void ensure_directory(const std::filesystem::path& dir);

} // namespace gammasep
