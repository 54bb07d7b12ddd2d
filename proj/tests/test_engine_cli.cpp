#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>  // vendored single-header nlohmann/json

#include "spinor/cli.hpp"
#include "spinor/compiler.hpp"
#include "spinor/engine.hpp"
#include "spinor/sequence.hpp"

using namespace spinor;
namespace fs = std::filesystem;

namespace {

SequenceProgram parse_ok(const char* src) {
    ParseResult r = parse_sequence(src);
    REQUIRE(r.ok());
    return std::move(r.program);
}

}  // namespace

TEST_CASE("programs without domain declarations compile to one implicit domain") {
    const SequenceProgram p = parse_ok(
        "field b0 1e-4 T\n"
        "rest k 10 rad/s\n"
        "acquire n 4 dt 1e-6 s\n");
    const CompiledSequence c = compile_sequence(p);
    REQUIRE(c.domains.size() == 1);
    CHECK(c.domains[0].name == "main");
    CHECK(c.domains[0].omega[2] == p.b0_omega);
    CHECK(c.domains[0].k_rest == 10.0);
    CHECK(c.domains[0].weight == 1.0);
    REQUIRE(c.ops.size() == 1);
    CHECK(c.ops[0].fields.at(0).omega_z == p.b0_omega);
    CHECK(c.ops[0].fields.at(0).k_rest == 10.0);
}

TEST_CASE("domain weights follow spin counts and k falls back to the global rest constant") {
    const SequenceProgram p = parse_ok(
        "rest k 7 rad/s\n"
        "domain a spins 3 field 0 0 100 rad/s\n"
        "domain b spins 1 field 0 0 200 rad/s k -2 rad/s\n"
        "acquire n 2 dt 1e-6 s\n");
    const CompiledSequence c = compile_sequence(p);
    REQUIRE(c.domains.size() == 2);
    CHECK(c.domains[0].weight == 0.75);
    CHECK(c.domains[1].weight == 0.25);
    CHECK(c.domains[0].k_rest == 7.0);   // inherited
    CHECK(c.domains[1].k_rest == -2.0);  // own value wins
}

TEST_CASE("gradients shift omega_z persistently from their event onward") {
    const SequenceProgram p = parse_ok(
        "set gamma 2e8\n"
        "domain probe spins 1 field 0 0 1000 rad/s position 0 0 0.01 m\n"
        "delay 1e-3 s\n"
        "gradient z 2e-3 T/m dur 1e-3 s\n"
        "acquire n 4 dt 1e-6 s\n");
    const CompiledSequence c = compile_sequence(p);
    REQUIRE(c.ops.size() == 3);
    const double shift = -2e8 * 2e-3 * 0.01;
    CHECK(c.ops[0].fields[0].omega_z == 1000.0);          // before the gradient
    CHECK(c.ops[1].fields[0].omega_z == 1000.0 + shift);  // during
    CHECK(c.ops[2].fields[0].omega_z == 1000.0 + shift);  // and ever after
}

TEST_CASE("scoped gradients shift only the named domain") {
    const SequenceProgram p = parse_ok(
        "set gamma 2e8\n"
        "domain l spins 1 field 0 0 1000 rad/s position -0.02 0 0 m\n"
        "domain r spins 1 field 0 0 1000 rad/s position 0.02 0 0 m\n"
        "gradient x 1e-3 T/m dur 1e-3 s domain r\n"
        "acquire n 2 dt 1e-6 s\n");
    const CompiledSequence c = compile_sequence(p);
    const CompiledOp& acq = c.ops.back();
    CHECK(acq.fields[0].omega_z == 1000.0);
    CHECK(acq.fields[1].omega_z == 1000.0 + -2e8 * 1e-3 * 0.02);
}

TEST_CASE("overlapping hand-built timelines are rejected") {
    SequenceProgram p = parse_ok(
        "delay 1e-3 s\n"
        "delay 1e-3 s\n"
        "acquire n 2 dt 1e-6 s\n");
    p.events[1].start = 0.5e-3;  // now overlaps events[0]
    CHECK_THROWS_AS(compile_sequence(p), UnsupportedCombination);
}

TEST_CASE("resonant pulses lock the carrier to the window's precession frequency") {
    const SequenceProgram p = parse_ok(
        "field b0 3e5 rad/s\n"
        "pulse rf amp 1e3 rad/s carrier resonant dur 1e-5 s phase 0\n"
        "acquire n 2 dt 1e-6 s\n");
    const CompiledSequence c = compile_sequence(p);
    const CompiledOp& op = c.ops[0];
    REQUIRE(op.rf);
    const EvolutionPair got = pulse_propagator(op, op.fields[0], op.duration);
    const EvolutionPair want = rf_propagator(3e5, 3e5, 1e3, op.duration);
    CHECK(max_abs_diff(got.product(), want.product()) == 0.0);
}

TEST_CASE("pulse phase conjugates the rotation factor by z rotations") {
    const SequenceProgram p = parse_ok(
        "field b0 3e5 rad/s\n"
        "pulse rf amp 1e3 rad/s carrier resonant dur 1e-5 s phase 0.7\n"
        "acquire n 2 dt 1e-6 s\n");
    const CompiledSequence c = compile_sequence(p);
    const CompiledOp& op = c.ops[0];
    const EvolutionPair u = pulse_propagator(op, op.fields[0], op.duration);
    CHECK(u.product().unitary_deviation() < 1e-13);
    CompiledOp flat = op;
    flat.phase = 0.0;
    const EvolutionPair base = pulse_propagator(flat, op.fields[0], op.duration);
    const ComplexMatrix turn = rotation_matrix({0.0, 0.0, 1.0}, 0.7);
    const ComplexMatrix back = rotation_matrix({0.0, 0.0, 1.0}, -0.7);
    const ComplexMatrix want = mat_mul(mat_mul(back, base.r_part), turn);
    CHECK(max_abs_diff(u.r_part, want) == 0.0);
}

TEST_CASE("a program without an acquire window runs as model none") {
    const ParseResult r = parse_sequence("delay 1e-3 s\n");
    REQUIRE(r.ok());  // warning only
    const RunResult run = run_program(r.program);
    CHECK(run.report.model == "none");
    CHECK(run.fid.samples.empty());
    REQUIRE_FALSE(run.report.notes.empty());
}

TEST_CASE("monte-carlo model is selected by mc draws and reruns are identical") {
    const SequenceProgram p = parse_ok(
        "field b0 1e-4 T\n"
        "ensemble n 1000 polarization 0.1 seed 42 mc 200\n"
        "delay 1e-4 s\n"
        "acquire n 16 dt 1e-5 s\n");
    const RunResult a = run_program(p);
    const RunResult b = run_program(p);
    REQUIRE(a.report.model == "monte-carlo");
    CHECK(a.report.seed == 42);
    CHECK(a.report.ensemble_n == 1000.0);
    CHECK(a.report.polarization == 0.1);
    REQUIRE(a.fid.samples.size() == 16);
    bool identical = true;
    for (std::size_t k = 0; k < 16; ++k)
        identical = identical && a.fid.samples[k] == b.fid.samples[k];
    CHECK(identical);

    const RunResult c = run_program(p, 99);
    CHECK(c.report.seed == 99);
    bool all_equal = true;
    for (std::size_t k = 0; k < 16; ++k)
        all_equal = all_equal && c.fid.samples[k] == a.fid.samples[k];
    CHECK_FALSE(all_equal);  // a different seed draws different phases
}

TEST_CASE("a pulse selects the driven closed form referenced to the window clock") {
    const SequenceProgram p = parse_ok(
        "field b0 4e5 rad/s\n"
        "pulse rf amp 1e4 rad/s carrier resonant dur 5e-5 s phase 0\n"
        "delay 1e-3 s\n"
        "acquire n 8 dt 1e-6 s\n");
    const RunResult r = run_program(p);
    REQUIRE(r.report.model == "driven-closed-form");
    CHECK(r.report.flip_angle == 1e4 * 5e-5);
    CHECK(r.fid.t0 == 5e-5 + 1e-3);
    CHECK(r.fid.dt == 1e-6);
    REQUIRE(r.fid.samples.size() == 8);

    // no ensemble statement: N = 1, p = 1
    const PhysicalConstants c{p.gamma, hbar_si};
    const double prep = std::sin(r.report.flip_angle);
    for (std::size_t k : {std::size_t{0}, std::size_t{5}}) {
        const double t = static_cast<double>(k) * 1e-6;
        const cplx want = prep * chi_rf_closed_form(1.0, 1.0, 1e4 / std::sqrt(2.0), 4e5, t, c);
        CHECK(std::abs(r.fid.samples[k] - want) == 0.0);
    }
}

TEST_CASE("the driven model rejects a zero static field") {
    const SequenceProgram p = parse_ok(
        "pulse rf amp 1e3 rad/s carrier 1e5 rad/s dur 1e-5 s phase 0\n"
        "acquire n 2 dt 1e-6 s\n");
    CHECK_THROWS_AS(run_program(p), ZeroField);
}

TEST_CASE("without rf the rest constant drives the noise closed form") {
    const SequenceProgram p = parse_ok(
        "field b0 4e5 rad/s\n"
        "rest k -50 rad/s\n"
        "ensemble n 200 polarization 0.3\n"
        "acquire n 6 dt 1e-6 s\n");
    const RunResult r = run_program(p);
    REQUIRE(r.report.model == "noise-closed-form");
    const PhysicalConstants c{p.gamma, hbar_si};
    for (std::size_t k = 0; k < 6; ++k) {
        const double t = static_cast<double>(k) * 1e-6;
        const cplx want = chi_noise_closed_form(200.0, 0.3, -50.0, 4e5, t, c);
        CHECK(std::abs(r.fid.samples[k] - want) == 0.0);
    }
}

TEST_CASE("a zero rest constant yields silence instead of an error") {
    const SequenceProgram p = parse_ok(
        "field b0 4e5 rad/s\n"
        "acquire n 4 dt 1e-6 s\n");
    const RunResult r = run_program(p);
    CHECK(r.report.model == "noise-closed-form");
    for (const cplx& v : r.fid.samples) CHECK(v == cplx{0.0, 0.0});
}

// ---------------------------------------------------------------------------
// CLI entry point, driven in-process
// ---------------------------------------------------------------------------

namespace {

int call_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "spinor");
    std::vector<char*> argv;
    argv.reserve(args.size());
    for (std::string& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spinor-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    [[nodiscard]] std::string file(const std::string& name, const std::string& content) const {
        const fs::path f = path / name;
        std::ofstream out(f, std::ios::binary);
        out << content;
        return f.string();
    }
};

const char* const onepulse_src =
    "field b0 4e5 rad/s\n"
    "pulse rf amp 1e4 rad/s carrier resonant dur 5e-5 s phase 0\n"
    "acquire n 32 dt 1e-6 s\n";

}  // namespace

TEST_CASE("cli run writes the signal and report") {
    TempDir tmp;
    const std::string seq = tmp.file("onepulse.seq", onepulse_src);
    const std::string out = (tmp.path / "out").string();
    CHECK(call_cli({"--out-dir", out, "run", seq}) == exit_ok);
    CHECK(fs::exists(fs::path(out) / "fid.csv"));
    REQUIRE(fs::exists(fs::path(out) / "report.json"));
    const nlohmann::json j =
        nlohmann::json::parse(std::ifstream(fs::path(out) / "report.json"));
    CHECK(j.at("kind") == "run");
    CHECK(j.at("model") == "driven-closed-form");
    CHECK(j.at("n_samples") == 32);
}

TEST_CASE("cli run in json format wraps the signal with its schema tag") {
    TempDir tmp;
    const std::string seq = tmp.file("onepulse.seq", onepulse_src);
    const std::string out = (tmp.path / "out").string();
    CHECK(call_cli({"--out-dir", out, "--format", "json", "run", seq}) == exit_ok);
    REQUIRE(fs::exists(fs::path(out) / "fid.json"));
    const nlohmann::json j = nlohmann::json::parse(std::ifstream(fs::path(out) / "fid.json"));
    CHECK(j.at("kind") == "fid");
    CHECK(j.at("fid").at("samples").size() == 32);
}

TEST_CASE("cli spectrum writes a spectrum file") {
    TempDir tmp;
    const std::string seq = tmp.file("onepulse.seq", onepulse_src);
    const std::string out = (tmp.path / "out").string();
    CHECK(call_cli({"--out-dir", out, "spectrum", seq, "--convention", "folded"}) == exit_ok);
    CHECK(fs::exists(fs::path(out) / "spectrum.csv"));
}

TEST_CASE("cli sweep records the response curve") {
    TempDir tmp;
    const std::string seq = tmp.file("onepulse.seq", onepulse_src);
    const std::string out = (tmp.path / "out").string();
    CHECK(call_cli({"--out-dir", out, "sweep", seq, "--param", "pulse-duration", "--from",
                    "1e-5", "--to", "3e-4", "--steps", "5"}) == exit_ok);
    REQUIRE(fs::exists(fs::path(out) / "sweep.csv"));
    std::ifstream in(fs::path(out) / "sweep.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 6);  // header + 5 samples
}

TEST_CASE("cli error paths map to distinct exit codes") {
    TempDir tmp;
    // missing input file
    CHECK(call_cli({"run", (tmp.path / "nope.seq").string()}) == exit_error);
    // sequence with a parse error
    const std::string bad = tmp.file("bad.seq", "boost power 9000\n");
    CHECK(call_cli({"run", bad}) == exit_error);
    // sweep needs a pulse
    const std::string still = tmp.file("still.seq", "field b0 4e5 rad/s\nacquire n 8 dt 1e-6 s\n");
    CHECK(call_cli({"--out-dir", (tmp.path / "o").string(), "sweep", still, "--param",
                    "pulse-duration", "--from", "1e-5", "--to", "1e-4"}) == exit_error);
    // usage errors
    CHECK(call_cli({"run"}) == exit_usage);                // missing argument
    CHECK(call_cli({"frobnicate"}) == exit_usage);         // unknown subcommand
    CHECK(call_cli({"experiments", "bogus"}) == exit_usage);
}

TEST_CASE("cli seed flag overrides the program seed") {
    TempDir tmp;
    const std::string seq = tmp.file("mc.seq",
                                     "field b0 1e-4 T\n"
                                     "ensemble n 100 polarization 0.1 seed 42 mc 50\n"
                                     "acquire n 4 dt 1e-5 s\n");
    const std::string out = (tmp.path / "out").string();
    CHECK(call_cli({"--seed", "7", "--out-dir", out, "run", seq}) == exit_ok);
    const nlohmann::json j =
        nlohmann::json::parse(std::ifstream(fs::path(out) / "report.json"));
    CHECK(j.at("seed") == 7);
    CHECK(j.at("model") == "monte-carlo");
}
