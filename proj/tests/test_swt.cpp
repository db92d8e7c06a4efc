#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gammasep/swt.hpp"
#include "gammasep/wavelets.hpp"
#include "oracle/reference.hpp"
#include "support/generators.hpp"

using namespace gammasep;

namespace {

double max_abs_of(const Samples& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST_SUITE("swt") {

TEST_CASE("upsample_filter inserts 2^(j-1)-1 zeros") {
    const double a = 1.5, b = -2.0, c = 0.25;
    CHECK(upsample_filter(std::vector{a, b}, 1) == std::vector{a, b});
    CHECK(upsample_filter(std::vector{a, b}, 2) == std::vector{a, 0.0, b});
    CHECK(upsample_filter(std::vector{a, b, c}, 3) ==
          std::vector{a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, c});
    CHECK_THROWS_AS(upsample_filter(std::vector{a}, 0), std::invalid_argument);
}

TEST_CASE("wavelet table") {
    for (const auto& name : available_wavelets()) {
        const FilterPair f = wavelet_by_name(name);
        CHECK_NOTHROW(f.validate());
        double sum = 0.0, sq = 0.0;
        for (double t : f.dec_lo) {
            sum += t;
            sq += t * t;
        }
        CHECK(sum == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
        CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(wavelet_by_name("db4").length() == 8);
    CHECK(wavelet_by_name("haar").length() == 2);
    CHECK_THROWS_AS(wavelet_by_name("sym99"), std::invalid_argument);
}

TEST_CASE("zero input gives zero coefficients") {
    const auto c = swt_decompose(Samples(256, 0.0), wavelet_by_name("db4"), 4);
    for (std::size_t j = 1; j <= 4; ++j) {
        CHECK(max_abs_of(c.detail(j)) == 0.0);
        CHECK(max_abs_of(c.approximation(j)) == 0.0);
    }
}

TEST_CASE("Haar on a constant") {
    const double cval = 3.25;
    const auto c = swt_decompose(Samples(64, cval), wavelet_by_name("haar"), 1);
    for (double v : c.approximation(1)) CHECK(v == doctest::Approx(cval * std::numbers::sqrt2).epsilon(1e-15));
    for (double v : c.detail(1)) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("impulse response equals the high-pass taps placed circularly") {
    for (const auto& name : available_wavelets()) {
        const FilterPair f = wavelet_by_name(name);
        const std::size_t n = 32, pos = 29;
        Samples x(n, 0.0);
        x[pos] = 1.0;
        const auto c = swt_decompose(x, f, 1);
        const auto expected = oracle::circular_filter(x, f.dec_hi);
        for (std::size_t k = 0; k < f.length(); ++k) CHECK(expected[(pos + k) % n] == f.dec_hi[k]);
        CHECK(testgen::max_abs_diff(c.detail(1), expected) == 0.0);
    }
}

TEST_CASE("perfect reconstruction, db4, 5 levels, n = 5000") {
    testgen::Gen g(5);
    const FilterPair f = wavelet_by_name("db4");
    for (int trial = 0; trial < 5; ++trial) {
        const Samples x = g.signal(5000, g.uniform(0.01, 1000.0));
        const Samples y = iswt_reconstruct(swt_decompose(x, f, 5), f);
        CHECK(testgen::max_abs_diff(x, y) < 1e-9 * max_abs_of(x));
    }
}

TEST_CASE("perfect reconstruction for every filter pair") {
    testgen::Gen g(6);
    for (const auto& name : available_wavelets()) {
        const FilterPair f = wavelet_by_name(name);
        const Samples x = g.signal(512);
        const Samples y = iswt_reconstruct(swt_decompose(x, f, 4), f);
        CHECK(testgen::max_abs_diff(x, y) < 1e-9 * max_abs_of(x));
    }
}

TEST_CASE("all-zero coefficients reconstruct to zero") {
    const FilterPair f = wavelet_by_name("db4");
    testgen::Gen g(7);
    const auto c = swt_decompose(g.signal(128), f, 3).zeros_like();
    CHECK(max_abs_of(iswt_reconstruct(c, f)) == 0.0);
}

TEST_CASE("detail-only and approximation-only reconstructions sum to the input") {
    const FilterPair f = wavelet_by_name("db4");
    testgen::Gen g(8);
    const Samples x = g.signal(1024, 20.0);
    const auto c = swt_decompose(x, f, 5);
    auto approx_only = c;
    for (auto& row : approx_only.details) std::fill(row.begin(), row.end(), 0.0);
    auto details_only = c;
    for (auto& row : details_only.approximations) std::fill(row.begin(), row.end(), 0.0);
    const Samples a = iswt_reconstruct(approx_only, f);
    const Samples d = iswt_reconstruct(details_only, f);
    Samples sum(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] = a[i] + d[i];
    CHECK(testgen::max_abs_diff(sum, x) < 1e-9 * max_abs_of(x));

    // the same partial reconstructions from the adjoint-operator oracle
    const oracle::Vec lo(f.dec_lo.begin(), f.dec_lo.end()), hi(f.dec_hi.begin(), f.dec_hi.end());
    const oracle::Vec a_ref = oracle::brute_iswt(std::vector<oracle::Vec>(5, oracle::Vec(x.size(), 0.0)),
                                                 c.deepest_approximation(), lo, hi);
    CHECK(testgen::max_abs_diff(a, a_ref) < 1e-9 * max_abs_of(x));
}

TEST_CASE("malformed coefficient sets are rejected") {
    const FilterPair f = wavelet_by_name("db4");
    testgen::Gen g(9);
    auto c = swt_decompose(g.signal(64), f, 3);
    auto shorter = c;
    shorter.details[1].pop_back();
    CHECK_THROWS_AS(iswt_reconstruct(shorter, f), InvalidStructureError);
    auto missing = c;
    missing.approximations.pop_back();
    CHECK_THROWS_AS(iswt_reconstruct(missing, f), InvalidStructureError);
    CHECK_THROWS_AS(swt_decompose(g.signal(31), f, 5), std::invalid_argument);
    CHECK_NOTHROW(swt_decompose(g.signal(32), f, 5));
    CHECK_THROWS_AS(swt_decompose(g.signal(32), f, 0), std::invalid_argument);
}

TEST_CASE("level_for_frequency") {
    CHECK(level_for_frequency(85.0, 512.0) == 2);
    CHECK(level_for_frequency(45.0, 512.0) == 3);
    CHECK(level_for_frequency(55.0, 512.0) == 3);
    CHECK(level_for_frequency(255.9, 512.0) == 1);
    CHECK(level_for_frequency(128.0, 512.0) == 1);
    CHECK(level_for_frequency(127.99, 512.0) == 2);
    CHECK_THROWS_AS(level_for_frequency(256.0, 512.0), std::invalid_argument);
    CHECK_THROWS_AS(level_for_frequency(0.0, 512.0), std::invalid_argument);
    CHECK_THROWS_AS(level_for_frequency(-3.0, 512.0), std::invalid_argument);
}

TEST_CASE("property: circular shifts commute with the transform bit-exactly") {
    testgen::Gen g(10);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = g.index(64, 700);
        const int levels = static_cast<int>(g.index(1, 5));
        const auto& names = available_wavelets();
        const FilterPair f = wavelet_by_name(names[g.index(0, names.size() - 1)]);
        const Samples x = g.signal(n);
        const std::size_t s = g.index(0, n - 1);
        const auto a = swt_decompose(x, f, levels);
        const auto b = swt_decompose(circular_shift(x, s), f, levels);
        for (int j = 1; j <= levels; ++j) {
            CHECK(b.detail(j) == circular_shift(a.detail(j), s));
            CHECK(b.approximation(j) == circular_shift(a.approximation(j), s));
        }
    }
}

TEST_CASE("property: linearity") {
    testgen::Gen g(12);
    const FilterPair f = wavelet_by_name("db4");
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = g.index(32, 600);
        const Samples x = g.signal(n), y = g.signal(n);
        const double a = g.uniform(-5, 5), b = g.uniform(-5, 5);
        Samples z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i];
        const auto cx = swt_decompose(x, f, 4), cy = swt_decompose(y, f, 4), cz = swt_decompose(z, f, 4);
        for (std::size_t j = 1; j <= 4; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(cz.detail(j)[i] - (a * cx.detail(j)[i] + b * cy.detail(j)[i])) < 1e-9);
                CHECK(std::abs(cz.approximation(j)[i] -
                               (a * cx.approximation(j)[i] + b * cy.approximation(j)[i])) < 1e-9);
            }
        }
    }
}

TEST_CASE("a 45 Hz sinusoid concentrates in the level-3 detail") {
    const double fs = 512.0;
    Samples x(4096);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * 45.0 * i / fs);
    const auto c = swt_decompose(x, wavelet_by_name("db4"), 5);
    const double e3 = energy(c.detail(3));
    for (std::size_t j = 1; j <= 5; ++j)
        if (j != 3) CHECK(e3 > energy(c.detail(j)));
}

TEST_CASE("property: agreement with the brute-force definition on short signals") {
    testgen::Gen g(13);
    for (const auto& name : available_wavelets()) {
        const FilterPair f = wavelet_by_name(name);
        const oracle::Vec lo(f.dec_lo.begin(), f.dec_lo.end()), hi(f.dec_hi.begin(), f.dec_hi.end());
        for (int trial = 0; trial < 4; ++trial) {
            const std::size_t n = g.index(8, 64);
            int levels = 1;
            while ((std::size_t{1} << (levels + 1)) <= n && levels < 5) ++levels;
            const Samples x = g.signal(n);
            const auto c = swt_decompose(x, f, levels);
            const auto ref = oracle::brute_swt(x, lo, hi, levels);
            for (int j = 1; j <= levels; ++j) {
                CHECK(testgen::max_abs_diff(c.detail(j), ref.details[j - 1]) < 1e-12);
                CHECK(testgen::max_abs_diff(c.approximation(j), ref.approximations[j - 1]) < 1e-12);
            }
            const auto inv = oracle::brute_iswt(ref.details, ref.approximations.back(), lo, hi);
            CHECK(testgen::max_abs_diff(iswt_reconstruct(c, f), inv) < 1e-12);
        }
    }
}

TEST_CASE("filter lag is the energy centroid of the equivalent filter") {
    const FilterPair f = wavelet_by_name("db4");
    const oracle::Vec lo(f.dec_lo.begin(), f.dec_lo.end()), hi(f.dec_hi.begin(), f.dec_hi.end());
    for (int j = 1; j <= 5; ++j) {
        CHECK(equivalent_filter_lag(f, j, true) == oracle::centroid(oracle::equivalent_filter(lo, hi, j, true)));
        CHECK(equivalent_filter_lag(f, j, false) == oracle::centroid(oracle::equivalent_filter(lo, hi, j, false)));
    }
}

}
