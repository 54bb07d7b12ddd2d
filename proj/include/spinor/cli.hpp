#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>  // vendored single-header CLI11

#include "spinor/engine.hpp"
#include "spinor/errors.hpp"
#include "spinor/io.hpp"
#include "spinor/sequence.hpp"
#include "spinor/spectra.hpp"
#include "spinor/validate.hpp"

namespace spinor {

// Exit codes: 0 success, 1 parse/compile/physics error, 2 a tolerance or
// validation check failed, 64 usage error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_check_failed = 2;
inline constexpr int exit_usage = 64;

namespace cli_detail {

[[nodiscard]] inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void print_diagnostics(const std::vector<Diagnostic>& ds) {
    for (const Diagnostic& d : ds)
        std::fprintf(stderr, "%s: line %d, col %d [%s]: %s\n",
                     d.severity == Severity::error ? "error" : "warning", d.line, d.col,
                     d.code.c_str(), d.message.c_str());
}

/// Parse a sequence file; warnings go to stderr, errors abort via Error.
[[nodiscard]] inline SequenceProgram load_program(const std::string& path) {
    const ParseResult r = parse_sequence(read_file(path));
    print_diagnostics(r.diagnostics);
    if (!r.ok()) throw Error(path + ": sequence has errors");
    return r.program;
}

inline void write_out(const std::filesystem::path& dir, const std::string& name,
                      const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    write_text_file(path, content);
    std::printf("wrote %s\n", path.c_str());
}

/// Recompute the serial timeline after an event duration was edited.
inline void retime_events(SequenceProgram& p) {
    double clock = 0.0;
    for (SeqEvent& e : p.events) {
        e.start = clock;
        if (e.kind == EventKind::acquire)
            e.duration = static_cast<double>(e.acquire.n) * e.acquire.dt;
        clock += e.duration;
    }
    p.duration = clock;
}

/// |x1* x2| of the first domain's state after every pre-acquire event,
/// starting from the ground state.
[[nodiscard]] inline double transverse_amplitude(const CompiledSequence& cs) {
    SpinState s = ground_state();
    for (const CompiledOp& op : cs.ops) {
        if (op.kind == EventKind::acquire) break;
        if (op.duration <= 0.0) continue;
        const FieldParams& f = op.fields.at(0);
        const bool drives = op.rf && (op.rf_domain < 0 || op.rf_domain == 0);
        const EvolutionPair u =
            drives ? pulse_propagator(op, f, op.duration) : ambient_propagator(f, op.duration);
        s = u.apply(s);
    }
    return std::abs(std::conj(s.x1) * s.x2);
}

[[nodiscard]] inline std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("SPINOR_SEED");
    if (s == nullptr || *s == '\0') return {};
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') throw Error("SPINOR_SEED is not an integer");
    return static_cast<std::uint64_t>(v);
}

}  // namespace cli_detail

/// Entry point behind main(). Returns the process exit code.
inline int run_cli(int argc, char** argv) {
    CLI::App app{"spin-1/2 dynamics: closed-form propagators, ensemble signals,"
                 " spectra, and a pulse-sequence language"};
    app.require_subcommand(1);

    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt =
        app.add_option("--seed", seed_value, "override the ensemble seed (env SPINOR_SEED)");
    std::string out_dir = ".";
    app.add_option("--out-dir", out_dir, "directory for output files")
        ->capture_default_str();
    std::string format = "csv";
    app.add_option("--format", format, "output format for data files")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    CLI::App* cmd_run = app.add_subcommand("run", "run a sequence file and write the signal");
    std::string run_path;
    cmd_run->add_option("file", run_path, "sequence file")->required();

    CLI::App* cmd_spec =
        app.add_subcommand("spectrum", "run a sequence file and write its spectrum");
    std::string spec_path;
    cmd_spec->add_option("file", spec_path, "sequence file")->required();
    std::string convention = "full";
    cmd_spec->add_option("--convention", convention, "full (signed bins) or folded")
        ->check(CLI::IsMember({"full", "folded"}))
        ->capture_default_str();

    CLI::App* cmd_val = app.add_subcommand("validate", "run the numbered release checks");
    bool quick = false;
    cmd_val->add_flag("--quick", quick, "smaller draw counts");

    CLI::App* cmd_exp = app.add_subcommand("experiments", "run canned experiments");
    std::string exp_name = "all";
    cmd_exp
        ->add_option("name", exp_name,
                     "low_field | pulse_calibration | ethanol_triplet | spin_noise_sign | all")
        ->check(CLI::IsMember({"low_field", "pulse_calibration", "ethanol_triplet",
                               "spin_noise_sign", "all"}))
        ->capture_default_str();

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "scan a sequence parameter and record the response");
    std::string sweep_path;
    cmd_sweep->add_option("file", sweep_path, "sequence file")->required();
    std::string sweep_param;
    cmd_sweep->add_option("--param", sweep_param, "parameter to scan")
        ->check(CLI::IsMember({"pulse-duration"}))
        ->required();
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    int sweep_steps = 50;
    cmd_sweep->add_option("--from", sweep_from, "first value (s)")->required();
    cmd_sweep->add_option("--to", sweep_to, "last value (s)")->required();
    cmd_sweep->add_option("--steps", sweep_steps, "number of samples")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        std::optional<std::uint64_t> seed_override;
        if (seed_opt->count() > 0)
            seed_override = seed_value;
        else
            seed_override = cli_detail::env_seed();
        const std::filesystem::path dir(out_dir);

        if (app.got_subcommand(cmd_run)) {
            const SequenceProgram p = cli_detail::load_program(run_path);
            const RunResult r = run_program(p, seed_override);
            if (format == "json") {
                nlohmann::json j;
                j["schema"] = report_schema;
                j["kind"] = "fid";
                j["fid"] = fid_to_json(r.fid);
                cli_detail::write_out(dir, "fid.json", j.dump(2) + "\n");
            } else {
                cli_detail::write_out(dir, "fid.csv", fid_to_csv(r.fid));
            }
            cli_detail::write_out(dir, "report.json",
                                  run_report_to_json(r.report).dump(2) + "\n");
            std::printf("model %s, %zu samples, dt %g s, duration %g s\n",
                        r.report.model.c_str(), r.report.n_samples, r.report.dt,
                        r.report.duration);
            return exit_ok;
        }

        if (app.got_subcommand(cmd_spec)) {
            const SequenceProgram p = cli_detail::load_program(spec_path);
            const RunResult r = run_program(p, seed_override);
            const Spectrum s = spectrum_of(r.fid, convention == "folded"
                                                      ? SpectrumConvention::folded
                                                      : SpectrumConvention::full_complex);
            if (format == "json")
                cli_detail::write_out(dir, "spectrum.json",
                                      spectrum_to_json(s).dump(2) + "\n");
            else
                cli_detail::write_out(dir, "spectrum.csv", spectrum_to_csv(s));
            const std::vector<Peak> peaks = find_peaks(s);
            const std::size_t shown = std::min<std::size_t>(peaks.size(), 8);
            for (std::size_t i = 0; i < shown; ++i)
                std::printf("peak %zu: f = %.6g Hz, magnitude %.6g\n", i + 1,
                            peaks[i].freq_hz, peaks[i].magnitude);
            if (peaks.size() > shown)
                std::printf("(%zu more peaks)\n", peaks.size() - shown);
            return exit_ok;
        }

        if (app.got_subcommand(cmd_val)) {
            ValidationOptions o;
            o.quick = quick;
            if (seed_override) o.seed = *seed_override;
            const std::vector<CriterionResult> rs = run_all_criteria(o);
            bool all = true;
            for (const CriterionResult& r : rs) {
                all = all && r.passed;
                std::printf("%s %2d  %-52s %s\n", r.passed ? "PASS" : "FAIL", r.id,
                            r.name.c_str(), r.detail.c_str());
            }
            if (format == "json")
                cli_detail::write_out(dir, "validation.json",
                                      criteria_to_json(rs).dump(2) + "\n");
            std::printf("%s\n", all ? "all criteria passed" : "CRITERIA FAILED");
            return all ? exit_ok : exit_check_failed;
        }

        if (app.got_subcommand(cmd_exp)) {
            std::vector<ExperimentReport> reports;
            if (exp_name == "all") {
                reports = run_all_experiments(true);
            } else if (exp_name == "low_field") {
                reports.push_back(run_low_field_experiment());
            } else if (exp_name == "pulse_calibration") {
                reports.push_back(run_pulse_calibration_experiment());
            } else if (exp_name == "ethanol_triplet") {
                reports.push_back(run_ethanol_triplet_experiment());
            } else {
                reports.push_back(run_spin_noise_sign_experiment());
            }
            bool all = true;
            for (const ExperimentReport& r : reports) {
                all = all && r.passed;
                cli_detail::write_out(dir, r.name + ".json",
                                      experiment_report_to_json(r).dump(2) + "\n");
                std::printf("%s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str());
                if (!r.passed)
                    for (const std::string& line : r.checks)
                        if (line.rfind("FAIL", 0) == 0)
                            std::printf("  %s\n", line.c_str());
            }
            return all ? exit_ok : exit_check_failed;
        }

        if (app.got_subcommand(cmd_sweep)) {
            SequenceProgram p = cli_detail::load_program(sweep_path);
            std::size_t pulse_index = p.events.size();
            for (std::size_t i = 0; i < p.events.size(); ++i) {
                if (p.events[i].kind == EventKind::rf_pulse) {
                    pulse_index = i;
                    break;
                }
            }
            if (pulse_index == p.events.size())
                throw Error(sweep_path + ": no pulse to sweep");
            std::string csv = "pulse_duration_s,amplitude\n";
            double best_v = sweep_from;
            double best_a = -1.0;
            for (int k = 0; k < sweep_steps; ++k) {
                const double v = sweep_from + (sweep_to - sweep_from) * k /
                                                  static_cast<double>(sweep_steps - 1);
                p.events[pulse_index].duration = v;
                cli_detail::retime_events(p);
                const double a = cli_detail::transverse_amplitude(compile_sequence(p));
                csv += detail::fmt15(v) + "," + detail::fmt15(a) + "\n";
                if (a > best_a) {
                    best_a = a;
                    best_v = v;
                }
            }
            cli_detail::write_out(dir, "sweep.csv", csv);
            std::printf("max amplitude %.6g at pulse duration %.6g s\n", best_a, best_v);
            return exit_ok;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_error;
    }
    return exit_usage;
}

}  // namespace spinor
