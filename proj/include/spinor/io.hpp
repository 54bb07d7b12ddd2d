#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>  // vendored single-header nlohmann/json

#include "spinor/engine.hpp"
#include "spinor/errors.hpp"
#include "spinor/experiments.hpp"
#include "spinor/spectra.hpp"

namespace spinor {

inline constexpr const char* report_schema = "spinor-report/1";

namespace detail {

/// 15 significant digits; enough to make reruns byte-identical without
/// printing noise digits.
[[nodiscard]] inline std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace detail

/// CSV with header t_or_f,re,im and LF line endings.
[[nodiscard]] inline std::string fid_to_csv(const Fid& fid) {
    std::string out = "t_or_f,re,im\n";
    for (std::size_t k = 0; k < fid.size(); ++k) {
        out += detail::fmt15(fid.time_at(k));
        out += ',';
        out += detail::fmt15(fid.samples[k].real());
        out += ',';
        out += detail::fmt15(fid.samples[k].imag());
        out += '\n';
    }
    return out;
}

[[nodiscard]] inline std::string spectrum_to_csv(const Spectrum& spec) {
    std::string out = "t_or_f,re,im\n";
    for (std::size_t i = 0; i < spec.size(); ++i) {
        out += detail::fmt15(spec.freqs_hz[i]);
        out += ',';
        out += detail::fmt15(spec.amps[i].real());
        out += ',';
        out += detail::fmt15(spec.amps[i].imag());
        out += '\n';
    }
    return out;
}

[[nodiscard]] inline nlohmann::json fid_to_json(const Fid& fid) {
    nlohmann::json j;
    j["schema"] = report_schema;
    j["kind"] = "fid";
    j["t0"] = fid.t0;
    j["dt"] = fid.dt;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < fid.size(); ++k)
        rows.push_back({fid.time_at(k), fid.samples[k].real(), fid.samples[k].imag()});
    j["samples"] = std::move(rows);
    return j;
}

[[nodiscard]] inline nlohmann::json spectrum_to_json(const Spectrum& spec) {
    nlohmann::json j;
    j["schema"] = report_schema;
    j["kind"] = "spectrum";
    j["convention"] =
        spec.convention == SpectrumConvention::full_complex ? "full_complex" : "folded";
    j["n_time"] = spec.n_time;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < spec.size(); ++i)
        rows.push_back({spec.freqs_hz[i], spec.amps[i].real(), spec.amps[i].imag()});
    j["bins"] = std::move(rows);
    return j;
}

[[nodiscard]] inline nlohmann::json run_report_to_json(const RunReport& r) {
    nlohmann::json j;
    j["schema"] = report_schema;
    j["kind"] = "run";
    j["model"] = r.model;
    j["duration_s"] = r.duration;
    j["t0_s"] = r.t0;
    j["dt_s"] = r.dt;
    j["n_samples"] = r.n_samples;
    j["flip_angle_rad"] = r.flip_angle;
    j["ensemble_n"] = r.ensemble_n;
    j["polarization"] = r.polarization;
    j["seed"] = r.seed;
    j["notes"] = r.notes;
    return j;
}

[[nodiscard]] inline nlohmann::json experiment_report_to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["schema"] = report_schema;
    j["kind"] = "experiment";
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["checks"] = r.checks;
    nlohmann::json metrics = nlohmann::json::object();
    for (const ExperimentMetric& m : r.metrics) metrics[m.name] = m.value;
    j["metrics"] = std::move(metrics);
    return j;
}

/// Write bytes exactly as given (binary mode keeps LF endings everywhere).
inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("short write to '" + path + "'");
}

}  // namespace spinor
