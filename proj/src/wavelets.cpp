#include "gammasep/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gammasep {

namespace {

// Daubechies scaling filters, unit L2 norm, in convolution order.
const std::vector<double> kHaar = {0.7071067811865476, 0.7071067811865476};

const std::vector<double> kDb2 = {-0.12940952255126037, 0.2241438680420134, 0.8365163037378079,
                                  0.48296291314453416};

const std::vector<double> kDb3 = {0.03522629188570953,  -0.08544127388202666,
                                  -0.13501102001025458, 0.45987750211849154,
                                  0.8068915093110925,   0.33267055295008263};

const std::vector<double> kDb4 = {-0.010597401785069032, 0.0328830116668852,
                                  0.030841381835560764,  -0.18703481171909309,
                                  -0.027983769416859854, 0.6308807679298589,
                                  0.7148465705529157,    0.2303778133088965};

const std::vector<double> kDb5 = {0.0033357252854737712, -0.012580751999081999,
                                  -0.006241490212798274, 0.07757149384004572,
                                  -0.032244869584638375, -0.24229488706638203,
                                  0.13842814590132074,   0.7243085284377729,
                                  0.6038292697971896,    0.16010239797419293};

const std::vector<double> kDb6 = {-0.0010773010853084796, 0.004777257510945511,
                                  0.0005538422011614961,  -0.03158203931748603,
                                  0.027522865530305727,   0.09750160558732304,
                                  -0.12976686756726194,   -0.22626469396543983,
                                  0.31525035170919763,    0.7511339080210954,
                                  0.49462389039845306,    0.11154074335010947};

const std::vector<double> kDb7 = {0.00035371379997452024, -0.0018016407040474908,
                                  0.0004295779729213665,  0.01255099855609984,
                                  -0.01657454163066688,   -0.03802993693501441,
                                  0.08061260915108308,    0.07130921926683026,
                                  -0.22403618499387498,   -0.14390600392856498,
                                  0.4697822874051931,     0.7291320908462351,
                                  0.3965393194819173,     0.07785205408500918};

const std::vector<double> kDb8 = {-0.00011747678412476953, 0.0006754494064505693,
                                  -0.00039174037337694705, -0.004870352993451574,
                                  0.008746094047405777,    0.013981027917398282,
                                  -0.044088253930794755,   -0.017369301001807547,
                                  0.12874742662047847,     0.0004724845739132828,
                                  -0.2840155429615469,     -0.015829105256349306,
                                  0.5853546836542067,      0.6756307362972898,
                                  0.31287159091429995,     0.05441584224310401};

} // namespace

void FilterPair::validate() const {
    const auto check = [](const std::vector<double>& taps, const char* what) {
        if (taps.empty()) throw std::invalid_argument(std::string("empty filter: ") + what);
        for (double t : taps)
            if (!std::isfinite(t))
                throw std::invalid_argument(std::string("non-finite tap in ") + what);
    };
    check(dec_lo, "dec_lo");
    check(dec_hi, "dec_hi");
    check(rec_lo, "rec_lo");
    check(rec_hi, "rec_hi");
    const std::size_t n = dec_lo.size();
    if (dec_hi.size() != n || rec_lo.size() != n || rec_hi.size() != n)
        throw std::invalid_argument("filter bank taps must all have the same length");
}

FilterPair FilterPair::from_scaling(std::string name, std::vector<double> lo) {
    FilterPair fp;
    fp.name = std::move(name);
    const std::size_t n = lo.size();
    fp.dec_hi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        fp.dec_hi[k] = sign * lo[n - 1 - k];
    }
    fp.rec_lo.assign(lo.rbegin(), lo.rend());
    fp.rec_hi.assign(fp.dec_hi.rbegin(), fp.dec_hi.rend());
    fp.dec_lo = std::move(lo);
    fp.validate();
    return fp;
}

FilterPair wavelet_by_name(std::string_view name) {
    if (name == "haar" || name == "db1") return FilterPair::from_scaling("haar", kHaar);
    if (name == "db2") return FilterPair::from_scaling("db2", kDb2);
    if (name == "db3") return FilterPair::from_scaling("db3", kDb3);
    if (name == "db4") return FilterPair::from_scaling("db4", kDb4);
    if (name == "db5") return FilterPair::from_scaling("db5", kDb5);
    if (name == "db6") return FilterPair::from_scaling("db6", kDb6);
    if (name == "db7") return FilterPair::from_scaling("db7", kDb7);
    if (name == "db8") return FilterPair::from_scaling("db8", kDb8);
    throw std::invalid_argument("unknown wavelet '" + std::string(name) + "'");
}

std::vector<std::string> available_wavelets() {
    return {"haar", "db2", "db3", "db4", "db5", "db6", "db7", "db8"};
}

} // namespace gammasep
