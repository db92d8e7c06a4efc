#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gammasep/dataflow.hpp"
#include "gammasep/despiker.hpp"
#include "gammasep/simgen.hpp"
#include "gammasep/swt.hpp"
#include "gammasep/tf_mapping.hpp"
#include "gammasep/wavelets.hpp"

namespace py = pybind11;
using namespace gammasep;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

Array to_array(const Samples& s) {
    Array out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(s.size())},
              std::vector<py::ssize_t>{static_cast<py::ssize_t>(sizeof(double))});
    std::copy(s.begin(), s.end(), out.mutable_data());
    return out;
}

Array to_matrix(const std::vector<Samples>& rows) {
    const std::size_t n = rows.empty() ? 0 : rows.front().size();
    Array out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(n)});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < n; ++i) m(r, i) = rows[r][i];
    return out;
}

MultiChannelSignal from_matrix(const Array& a, double fs) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array (channels x samples)");
    auto m = a.unchecked<2>();
    std::vector<Samples> rows(a.shape(0), Samples(a.shape(1)));
    std::vector<std::string> labels;
    for (py::ssize_t r = 0; r < a.shape(0); ++r) {
        labels.push_back("ch" + std::to_string(r + 1));
        for (py::ssize_t i = 0; i < a.shape(1); ++i) rows[r][i] = m(r, i);
    }
    return MultiChannelSignal(fs, std::move(labels), std::move(rows));
}

std::vector<Samples> to_rows(const std::vector<Array>& arrays) {
    std::vector<Samples> rows;
    for (const auto& a : arrays) {
        const auto v = view(a);
        rows.emplace_back(v.begin(), v.end());
    }
    return rows;
}

} // namespace

PYBIND11_MODULE(_gammasep, m) {
    m.doc() = "Transient/oscillation separation and band-energy mapping";

    py::register_exception<NoDetectionError>(m, "NoDetectionError", PyExc_RuntimeError);

    m.def("available_wavelets", &available_wavelets);

    m.def(
        "swt",
        [](const Array& x, const std::string& wavelet, int levels) {
            const auto c = swt_decompose(view(x), wavelet_by_name(wavelet), levels);
            return py::make_tuple(to_matrix(c.details), to_matrix(c.approximations));
        },
        py::arg("x"), py::arg("wavelet") = "db4", py::arg("levels") = 5,
        "Returns (details, approximations), each levels x n.");

    m.def(
        "iswt",
        [](const std::vector<Array>& details, const Array& deepest_approx, const std::string& wavelet) {
            const FilterPair f = wavelet_by_name(wavelet);
            WaveletCoefficients c;
            c.details = to_rows(details);
            c.source_length = c.details.empty() ? 0 : c.details[0].size();
            c.approximations.assign(c.details.size(), Samples(c.details.empty() ? 0 : c.details[0].size(), 0.0));
            if (!c.approximations.empty()) {
                const auto a = view(deepest_approx);
                c.approximations.back().assign(a.begin(), a.end());
            }
            for (std::size_t j = 1; j <= c.details.size(); ++j) {
                c.detail_lags.push_back(equivalent_filter_lag(f, static_cast<int>(j), true));
                c.approximation_lags.push_back(equivalent_filter_lag(f, static_cast<int>(j), false));
            }
            return to_array(iswt_reconstruct(c, f));
        },
        py::arg("details"), py::arg("deepest_approx"), py::arg("wavelet") = "db4");

    m.def(
        "mask_geometry",
        [](double f) {
            const auto g = mask_geometry(f);
            return py::make_tuple(g.duration_ms, g.n_scales);
        },
        py::arg("target_freq_hz"), "Returns (duration_ms, n_scales).");

    m.def(
        "separate",
        [](const Array& x, double target_freq_hz, double sample_rate_hz, const std::string& wavelet, int levels) {
            SeparationOptions o;
            o.levels = levels;
            const auto r = separate(view(x), target_freq_hz, sample_rate_hz, wavelet_by_name(wavelet), o);
            py::dict d;
            d["oscillatory"] = to_array(r.oscillatory);
            d["transient"] = to_array(r.transient);
            d["center"] = r.detection_center_sample;
            d["mask_start"] = r.mask_used.window().start_sample;
            d["mask_length"] = r.mask_used.window().length_samples;
            d["mask_scales"] = r.mask_used.scales();
            return d;
        },
        py::arg("x"), py::arg("target_freq_hz"), py::arg("sample_rate_hz") = 512.0, py::arg("wavelet") = "db4",
        py::arg("levels") = 5);

    m.def(
        "simulate",
        [](std::size_t index, std::uint64_t seed, double snr_db) {
            SimConfig c;
            c.rng_seed = seed;
            c.snr_db = snr_db;
            c.n_realizations = index + 1;
            const Realization r = build_realization(c, index);
            py::dict d;
            d["signal"] = to_matrix(r.signal.data());
            d["bursts"] = to_matrix(r.bursts);
            d["transients"] = to_matrix(r.transients);
            d["sample_rate_hz"] = r.signal.sample_rate_hz();
            py::list starts;
            for (const auto& ch : r.truth.channels) starts.append(ch.burst_window.start_sample);
            d["burst_starts"] = starts;
            return d;
        },
        py::arg("index") = 0, py::arg("seed") = 1, py::arg("snr_db") = 5.0,
        "One realization of the default three-channel simulation.");

    m.def(
        "spatiotemporal_map",
        [](const Array& signal, double sample_rate_hz, std::pair<double, double> band, const py::object& reference) {
            MorletParams p;
            p.sample_rate_hz = sample_rate_hz;
            const MultiChannelSignal s = from_matrix(signal, sample_rate_hz);
            std::optional<MultiChannelSignal> ref;
            if (!reference.is_none()) ref = from_matrix(reference.cast<Array>(), sample_rate_hz);
            const auto map = spatiotemporal_map(s, {band.first, band.second}, p, {}, ref ? &*ref : nullptr);
            return to_matrix(map.values);
        },
        py::arg("signal"), py::arg("sample_rate_hz") = 512.0, py::arg("band") = std::pair{80.0, 90.0},
        py::arg("reference") = py::none(), "Channels x time normalized band energy.");

    m.def(
        "detect_buildup",
        [](const Array& map, double sample_rate_hz, double k_sigma) {
            SpatioTemporalMap mp;
            const MultiChannelSignal s = from_matrix(map, sample_rate_hz);
            mp.values = s.data();
            mp.channel_labels = s.channel_labels();
            mp.sample_rate_hz = sample_rate_hz;
            MapSettings defaults;
            mp.lead_samples = defaults.smoothing_width / 2;
            const auto det = detect_buildup(mp, k_sigma);
            py::dict d;
            d["channels"] = std::vector<std::size_t>(det.channel_indices.begin(), det.channel_indices.end());
            d["onset_sample"] = det.detected() ? py::cast(det.onset_sample) : py::none();
            d["peak_energy"] = det.peak_energy;
            d["threshold"] = det.threshold;
            return d;
        },
        py::arg("map"), py::arg("sample_rate_hz") = 512.0, py::arg("k_sigma") = 3.0);

    m.def(
        "tick_ratio",
        [](const std::string& kind, std::size_t n) {
            if (kind != "separation" && kind != "mapping")
                throw std::invalid_argument("kind must be 'separation' or 'mapping'");
            std::uint64_t t[2];
            for (int a : {0, 1}) {
                const PipelineConfig c = kind == "separation"
                                             ? separation_pipeline(wavelet_by_name("db4"), 5, 2 * a, n)
                                             : mapping_pipeline({80.0, 90.0}, MorletParams{}, 2 * a, n);
                t[a] = schedule_ticks(c.stages, c.accelerators);
            }
            return double(t[0]) / double(t[1]);
        },
        py::arg("kind") = "separation", py::arg("n") = 5000,
        "Modeled tick ratio without / with two accelerators.");
}
