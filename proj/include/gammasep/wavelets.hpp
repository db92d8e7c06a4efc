#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gammasep {

/// Analysis and synthesis filters of an orthogonal two-channel filter bank.
///
/// The analysis taps are applied by circular convolution. Synthesis taps are
/// the time reverse of the analysis taps for the orthogonal families shipped
/// here; the undecimated reconstruction uses them with a factor 1/2 per level.
struct FilterPair {
    std::string name;
    std::vector<double> dec_lo;
    std::vector<double> dec_hi;
    std::vector<double> rec_lo;
    std::vector<double> rec_hi;

    std::size_t length() const { return dec_lo.size(); }

    /// Throws std::invalid_argument on empty, non-finite or mismatched taps.
    void validate() const;

    /// Builds the full bank from an orthonormal scaling filter:
    /// hi[k] = (-1)^k lo[L-1-k], synthesis = reversed analysis.
    static FilterPair from_scaling(std::string name, std::vector<double> lo);
};

/// "haar" (alias "db1") or "db2" through "db8". Throws std::invalid_argument otherwise.
FilterPair wavelet_by_name(std::string_view name);

std::vector<std::string> available_wavelets();

} // namespace gammasep
