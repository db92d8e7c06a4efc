#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "gammasep/io.hpp"
#include "support/cli.hpp"

using namespace gammasep;
using testcli::quote;
namespace fs = std::filesystem;

namespace {

fs::path write_config(const fs::path& dir, const std::string& json) {
    const auto p = dir / "config.json";
    write_text_file(p, json);
    return p;
}

std::map<std::string, std::string> key_values(const fs::path& p) { return load_key_values(p); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes one file pair per realization") {
    const auto dir = testcli::scratch("sim_one");
    const auto cfg = write_config(dir, R"({"sim": {"n_realizations": 1}})");
    const auto r = testcli::gammasep("--config " + quote(cfg.string()) + " --out " + quote((dir / "o").string()) +
                                     " simulate");
    REQUIRE(r.status == 0);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir / "o")) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"realization_000.csv", "realization_000.truth.txt"});
}

TEST_CASE("default simulate writes 200 realizations of 3 x 5000") {
    const auto dir = testcli::scratch("sim_default");
    const auto r = testcli::gammasep("--out " + quote(dir.string()) + " simulate");
    REQUIRE(r.status == 0);
    std::size_t csv = 0, truth = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.ends_with(".truth.txt")) ++truth;
        else if (name.ends_with(".csv")) ++csv;
    }
    CHECK(csv == 200);
    CHECK(truth == 200);
    const auto s = load_signal_csv(dir / "realization_137.csv");
    CHECK(s.channel_count() == 3);
    CHECK(s.sample_count() == 5000);
    CHECK(s.sample_rate_hz() == 512.0);
}

TEST_CASE("same seed gives identical manifests and data") {
    const auto a = testcli::scratch("seed_a"), b = testcli::scratch("seed_b"), c = testcli::scratch("seed_c");
    const auto cfg = write_config(a, R"({"sim": {"n_realizations": 2}})");
    for (const auto& d : {a, b})
        REQUIRE(testcli::gammasep("--config " + quote(cfg.string()) + " --seed 99 --out " + quote((d / "o").string()) +
                                  " simulate").status == 0);
    REQUIRE(testcli::gammasep("--config " + quote(cfg.string()) + " --seed 100 --out " + quote((c / "o").string()) +
                              " simulate").status == 0);
    for (const char* f : {"realization_000.truth.txt", "realization_001.truth.txt", "realization_001.csv"}) {
        CHECK(testcli::slurp(a / "o" / f) == testcli::slurp(b / "o" / f));
    }
    CHECK(testcli::slurp(a / "o" / "realization_001.csv") != testcli::slurp(c / "o" / "realization_001.csv"));
}

TEST_CASE("despike then map names the overlapped high-gamma channel") {
    const auto dir = testcli::scratch("pipeline");
    const auto cfg = write_config(dir, R"({"sim": {"n_realizations": 1}})");
    const std::string base = "--config " + quote(cfg.string()) + " --seed 5 ";
    REQUIRE(testcli::gammasep(base + "--out " + quote((dir / "sim").string()) + " simulate").status == 0);
    const auto raw = dir / "sim" / "realization_000.csv";

    const auto d = testcli::gammasep(base + "--out " + quote((dir / "split").string()) + " despike " +
                                     quote(raw.string()) + " --freq 85");
    REQUIRE(d.status == 0);
    const auto mask = key_values(dir / "split" / "mask.txt");
    CHECK(mask.at("split_ok") == "true");
    CHECK(mask.at("ch3.mask_scales") == "2,3");

    const auto input = load_signal_csv(raw);
    const auto osc = load_signal_csv(dir / "split" / "oscillatory.csv");
    const auto trans = load_signal_csv(dir / "split" / "transient.csv");
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < input.sample_count(); ++i)
            REQUIRE(std::abs(osc.channel(c)[i] + trans.channel(c)[i] - input.channel(c)[i]) <= 1e-9);

    const auto m = testcli::gammasep(base + "--out " + quote((dir / "map").string()) + " map " +
                                     quote((dir / "split" / "oscillatory.csv").string()) + " --band 80:90 --reference " +
                                     quote(raw.string()));
    REQUIRE(m.status == 0);
    const auto det = key_values(dir / "map" / "detection.txt");
    CHECK(det.at("detected") == "true");
    CHECK(det.at("channels") == "ch3");
    const auto truth = key_values(dir / "sim" / "realization_000.truth.txt");
    const double onset = std::stod(det.at("onset_sample"));
    const double expected = std::stod(truth.at("ch3.burst_start"));
    CHECK(std::abs(onset - expected) <= 0.1 * 512.0);
    CHECK(fs::exists(dir / "map" / "map.pgm"));
    CHECK(fs::exists(dir / "map" / "map.csv"));
}

TEST_CASE("despiking the oscillatory output of a clean burst again barely changes it") {
    for (const char* f : {"45", "55", "85"}) {
        const auto dir = testcli::scratch(std::string("idempotent_") + f);
        const auto cfg = write_config(dir, std::string(R"({"sim": {"n_realizations": 1, "snr_db": null,
            "transient_amplitude_uv": 0, "burst_freqs_hz": [)") + f + "," + f + "," + f + "]}}");
        const std::string base = "--config " + quote(cfg.string()) + " ";
        REQUIRE(testcli::gammasep(base + "--out " + quote((dir / "sim").string()) + " simulate").status == 0);
        REQUIRE(testcli::gammasep(base + "--out " + quote((dir / "a").string()) + " despike " +
                                  quote((dir / "sim" / "realization_000.csv").string()) + " --freq " + f).status == 0);
        REQUIRE(testcli::gammasep(base + "--out " + quote((dir / "b").string()) + " despike " +
                                  quote((dir / "a" / "oscillatory.csv").string()) + " --freq " + f).status == 0);
        const auto once = load_signal_csv(dir / "a" / "oscillatory.csv");
        const auto twice = load_signal_csv(dir / "b" / "oscillatory.csv");
        for (std::size_t c = 0; c < once.channel_count(); ++c) {
            Samples diff(once.sample_count());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = twice.channel(c)[i] - once.channel(c)[i];
            CHECK(energy(diff) < 0.01 * energy(once.channel(c)));
        }
    }
}

TEST_CASE("malformed input exits 2 and names the line") {
    const auto dir = testcli::scratch("malformed");
    const auto bad = dir / "bad.csv";
    write_text_file(bad, "# rate=512\nch1,ch2\n1,2\n3,4\n5,oops\n");
    const auto r = testcli::gammasep("--out " + quote((dir / "o").string()) + " despike " + quote(bad.string()));
    CHECK(r.status == 2);
    CHECK(r.err.find("bad.csv:5") != std::string::npos);

    const auto cfg = write_config(dir, R"({"sim": {"n_realisations": 1}})");
    const auto c = testcli::gammasep("--config " + quote(cfg.string()) + " simulate");
    CHECK(c.status == 2);
    CHECK(c.err.find("n_realisations") != std::string::npos);

    CHECK(testcli::gammasep("bench --accel 1").status == 2);
}

TEST_CASE("an all-zero recording yields no detection") {
    const auto dir = testcli::scratch("zeros");
    const MultiChannelSignal zero(512.0, {"a", "b"}, {Samples(1024, 0.0), Samples(1024, 0.0)});
    save_signal_csv(dir / "zero.csv", zero);

    const auto m = testcli::gammasep("--out " + quote((dir / "map").string()) + " map " +
                                     quote((dir / "zero.csv").string()) + " --band 80:90");
    REQUIRE(m.status == 0);
    const auto det = key_values(dir / "map" / "detection.txt");
    CHECK(det.at("detected") == "false");
    CHECK(det.at("channels").empty());
    const std::string pgm = testcli::slurp(dir / "map" / "map.pgm");
    const std::string header = "P5\n128 2\n255\n";
    REQUIRE(pgm.substr(0, header.size()) == header);
    CHECK(std::all_of(pgm.begin() + header.size(), pgm.end(), [](char ch) { return ch == '\0'; }));

    const auto d = testcli::gammasep("--out " + quote((dir / "split").string()) + " despike " +
                                     quote((dir / "zero.csv").string()));
    CHECK(d.status == 3);
}

TEST_CASE("bench with a single accelerator setting lists no ratio") {
    const auto dir = testcli::scratch("bench");
    const auto cfg = write_config(dir, R"({"bench": {"repetitions": 2}})");
    const auto one = testcli::gammasep("--config " + quote(cfg.string()) + " --out " + quote((dir / "one").string()) +
                                       " bench --accel 2");
    REQUIRE(one.status == 0);
    const std::string csv = testcli::slurp(dir / "one" / "bench.csv");
    CHECK(csv.find("\nratio,") == std::string::npos);
    CHECK(testcli::slurp(dir / "one" / "bench.txt").find("speedup") == std::string::npos);

    const auto both = testcli::gammasep("--config " + quote(cfg.string()) + " --out " +
                                        quote((dir / "both").string()) + " bench");
    REQUIRE(both.status == 0);
    const std::string csv2 = testcli::slurp(dir / "both" / "bench.csv");
    CHECK(csv2.find("\nratio,separation,") != std::string::npos);
    CHECK(csv2.find("\nratio,mapping,") != std::string::npos);
    CHECK(both.out.find("wall-clock") != std::string::npos);
    CHECK(testcli::slurp(dir / "both" / "bench.txt").find("wall-clock") == std::string::npos);
}

}
