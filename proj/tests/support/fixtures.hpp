#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "gammasep/io.hpp"

namespace testfix {

inline std::filesystem::path fixture_dir() { return GAMMASEP_FIXTURE_DIR; }

/// Frozen values from the calibration pilot.
inline double calibration(const std::string& key) {
    static const auto kv = gammasep::load_key_values(fixture_dir() / "calibration.txt");
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("calibration key missing: " + key);
    return std::stod(it->second);
}

} // namespace testfix
