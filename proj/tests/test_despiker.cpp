#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gammasep/despiker.hpp"
#include "gammasep/simgen.hpp"
#include "gammasep/wavelets.hpp"
#include "support/generators.hpp"

using namespace gammasep;

namespace {

const FilterPair& db4() {
    static const FilterPair f = wavelet_by_name("db4");
    return f;
}

SimConfig clean_config() {
    SimConfig c;
    c.snr_db = std::numeric_limits<double>::infinity();
    c.n_realizations = 10;
    return c;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TEST_SUITE("despiker") {

TEST_CASE("mask geometry table") {
    CHECK(mask_geometry(45.0) == MaskGeometry{200.0, 3});
    CHECK(mask_geometry(55.0) == MaskGeometry{180.0, 2});
    CHECK(mask_geometry(85.0) == MaskGeometry{150.0, 2});
    const MaskGeometry other = mask_geometry(60.0);
    CHECK(other.duration_ms == doctest::Approx(150.0));
    CHECK(other.n_scales == 2);
    CHECK_THROWS_AS(mask_geometry(0.0), std::invalid_argument);
}

TEST_CASE("mask scales sit around the target band") {
    CHECK(mask_scales(45.0, 512.0, 3, 5) == std::set<int>{2, 3, 4});
    CHECK(mask_scales(55.0, 512.0, 2, 5) == std::set<int>{2, 3});
    CHECK(mask_scales(85.0, 512.0, 2, 5) == std::set<int>{2, 3});
    CHECK(mask_scales(85.0, 512.0, 9, 5).size() == 5);
    for (double f : {45.0, 55.0, 85.0})
        CHECK(mask_scales(f, 512.0, 2, 5).contains(level_for_frequency(f, 512.0)));
}

TEST_CASE("detection of a clean burst centred at 2500") {
    for (double f : {45.0, 55.0, 85.0}) {
        Samples x(5000, 0.0);
        const Samples b = gen_gamma_burst(f, mask_geometry(f).duration_ms, 50.0, 512.0);
        const std::size_t start = 2500 - b.size() / 2;
        std::copy(b.begin(), b.end(), x.begin() + static_cast<std::ptrdiff_t>(start));
        const auto c = swt_decompose(x, db4(), 5);
        const auto center = detect_oscillation_center(c, f, 512.0);
        CHECK(std::abs(static_cast<long>(center) - 2500L) <= 10);
    }
}

TEST_CASE("all-zero input has nothing to detect") {
    const auto c = swt_decompose(Samples(1024, 0.0), db4(), 5);
    CHECK_THROWS_AS(detect_oscillation_center(c, 45.0, 512.0), NoDetectionError);
    CHECK_THROWS_AS(separate(Samples(1024, 0.0), 45.0, 512.0, db4()), NoDetectionError);
}

TEST_CASE("two identical bursts: the earlier one wins") {
    Samples x(4096, 0.0);
    const Samples b = gen_gamma_burst(85.0, 150.0, 10.0, 512.0);
    for (std::size_t at : {1000UL, 3000UL})
        std::copy(b.begin(), b.end(), x.begin() + static_cast<std::ptrdiff_t>(at));
    const auto c = swt_decompose(x, db4(), 5);
    const auto center = detect_oscillation_center(c, 85.0, 512.0);
    CHECK(std::abs(static_cast<long>(center) - static_cast<long>(1000 + b.size() / 2)) <= 10);
}

TEST_CASE("mask validation") {
    CHECK_THROWS_AS(RectMask({10, 0}, {2}, 85.0), std::invalid_argument);
    CHECK_THROWS_AS(RectMask({10, 5}, {}, 85.0), std::invalid_argument);
    CHECK_THROWS_AS(RectMask({10, 5}, {0, 2}, 85.0), std::invalid_argument);
    testgen::Gen g(1);
    const auto c = swt_decompose(g.signal(256), db4(), 3);
    CHECK_THROWS_AS(threshold_coeffs(c, RectMask({250, 10}, {2}, 85.0)), std::invalid_argument);
    CHECK_THROWS_AS(threshold_coeffs(c, RectMask({0, 10}, {4}, 85.0)), std::invalid_argument);
}

TEST_CASE("full-coverage mask keeps everything") {
    testgen::Gen g(2);
    const auto c = swt_decompose(g.signal(512), db4(), 4);
    const auto split = threshold_coeffs(c, RectMask({0, 512}, {1, 2, 3, 4}, 85.0));
    for (std::size_t j = 1; j <= 4; ++j) {
        CHECK(split.oscillatory.detail(j) == c.detail(j));
        CHECK(split.oscillatory.approximation(j) == c.approximation(j));
        for (double v : split.transient.detail(j)) CHECK(v == 0.0);
        for (double v : split.transient.approximation(j)) CHECK(v == 0.0);
    }
}

TEST_CASE("property: the two halves of any mask add back exactly") {
    testgen::Gen g(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = g.index(64, 1500);
        const auto c = swt_decompose(g.signal(n), db4(), 5);
        const std::size_t len = g.index(1, n);
        const std::size_t start = g.index(0, n - len);
        std::set<int> scales;
        for (int j = 1; j <= 5; ++j)
            if (g.index(0, 1)) scales.insert(j);
        if (scales.empty()) scales.insert(3);
        const auto split = threshold_coeffs(c, RectMask({start, len}, scales, 85.0));
        CHECK_NOTHROW(split.oscillatory.validate());
        CHECK_NOTHROW(split.transient.validate());
        for (std::size_t j = 1; j <= 5; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(split.oscillatory.detail(j)[i] + split.transient.detail(j)[i] == c.detail(j)[i]);
                CHECK(split.oscillatory.approximation(j)[i] + split.transient.approximation(j)[i] ==
                      c.approximation(j)[i]);
            }
        }
    }
}

TEST_CASE("property: separate splits every input additively") {
    testgen::Gen g(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = g.index(256, 3000);
        const Samples x = g.signal(n, g.uniform(0.1, 200.0));
        const double f = std::vector{45.0, 55.0, 85.0}[g.index(0, 2)];
        const auto r = separate(x, f, 512.0, db4());
        CHECK(r.mask_used.window().length_samples == std::min(n, ms_to_samples(mask_geometry(f).duration_ms, 512.0)));
        CHECK(r.mask_used.window().end() <= n);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(r.oscillatory[i] + r.transient[i] - x[i]));
        CHECK(err <= 1e-9 * max_abs(x));
    }
}

TEST_CASE("clean separated 45 Hz realization") {
    const SimConfig c = clean_config();
    for (std::size_t idx = 0; idx < c.n_realizations; ++idx) {
        const Realization r = build_realization(c, idx);
        const auto res = separate(r.signal.channel(0), 45.0, 512.0, db4());
        CHECK(correlation(res.oscillatory, r.bursts[0]) >= 0.95);
        const auto& tw = r.truth.channels[0].transient_window;
        double residue = 0.0;
        for (std::size_t i = tw.start_sample; i < tw.end(); ++i) residue = std::max(residue, std::abs(res.oscillatory[i]));
        CHECK(residue <= 0.10 * c.transient_amplitude_uv);
    }
}

TEST_CASE("a spike-free sinusoid burst leaves little in the transient branch") {
    for (double f : {45.0, 55.0, 85.0}) {
        // The mask spans one burst length, so the sinusoid is gated to that duration.
        const Samples gate = gen_gamma_burst(f, mask_geometry(f).duration_ms, 30.0, 512.0);
        Samples burst(5000, 0.0);
        std::copy(gate.begin(), gate.end(), burst.begin() + 2000);
        const auto res = separate(burst, f, 512.0, db4());
        CHECK(energy(res.transient) <= 0.05 * energy(burst));
    }
}

TEST_CASE("property: circular shifts carry through separation") {
    testgen::Gen g(5);
    const SimConfig c = clean_config();
    for (int trial = 0; trial < 8; ++trial) {
        const Realization r = build_realization(c, g.index(0, c.n_realizations - 1));
        const std::size_t ch = g.index(0, 2);
        const double f = c.burst_freqs_hz[ch];
        const auto x = r.signal.channel(ch);
        const std::size_t s = g.index(0, 1500);
        const auto a = separate(x, f, 512.0, db4());
        const auto b = separate(circular_shift(x, s), f, 512.0, db4());
        // Windows well inside the record are not clamped, so the shift is exact.
        CHECK(b.detection_center_sample == (a.detection_center_sample + s) % x.size());
        CHECK(testgen::max_abs_diff(b.oscillatory, circular_shift(a.oscillatory, s)) < 1e-9);
        CHECK(testgen::max_abs_diff(b.transient, circular_shift(a.transient, s)) < 1e-9);
    }
}

TEST_CASE("property: a wider mask keeps at least as much oscillatory energy") {
    const SimConfig c = [] {
        SimConfig s;
        s.n_realizations = 10;
        return s;
    }();
    for (std::size_t idx = 0; idx < c.n_realizations; ++idx) {
        const Realization r = build_realization(c, idx);
        for (std::size_t ch = 0; ch < 3; ++ch) {
            const double f = c.burst_freqs_hz[ch];
            const auto x = r.signal.channel(ch);
            const auto coeffs = swt_decompose(x, db4(), 5);
            const std::size_t center = detect_oscillation_center(coeffs, f, 512.0);
            double previous = -1.0;
            for (double ms : {50.0, 100.0, 150.0, 200.0, 400.0, 800.0}) {
                SeparationOptions o;
                o.duration_ms_override = ms;
                const RectMask m = centered_mask(center, x.size(), f, 512.0, 5, o);
                const double e = energy(iswt_reconstruct(threshold_coeffs(coeffs, m).oscillatory, db4()));
                CHECK(e >= previous * (1.0 - 1e-12));
                previous = e;
            }
        }
    }
}

TEST_CASE("overlap makes separation harder") {
    SimConfig sep;
    sep.n_realizations = 200;
    SimConfig full = sep;
    sep.overlap_regimes = {OverlapRegime::Separated, OverlapRegime::Separated, OverlapRegime::Separated};
    full.overlap_regimes = {OverlapRegime::FullyOverlapped, OverlapRegime::FullyOverlapped,
                            OverlapRegime::FullyOverlapped};
    std::vector<std::vector<double>> cs(3), cf(3);
    for (std::size_t idx = 0; idx < sep.n_realizations; ++idx) {
        const Realization a = build_realization(sep, idx);
        const Realization b = build_realization(full, idx);
        for (std::size_t ch = 0; ch < 3; ++ch) {
            const double f = sep.burst_freqs_hz[ch];
            cs[ch].push_back(correlation(separate(a.signal.channel(ch), f, 512.0, db4()).oscillatory, a.bursts[ch]));
            cf[ch].push_back(correlation(separate(b.signal.channel(ch), f, 512.0, db4()).oscillatory, b.bursts[ch]));
        }
    }
    for (std::size_t ch = 0; ch < 3; ++ch) CHECK(median(cf[ch]) < median(cs[ch]));
}

}
