#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "spinor/sequence.hpp"
#include "spinor/validate.hpp"

using namespace spinor;

TEST_CASE("golden corpus parses to pinned programs and diagnostics") {
    const std::vector<GoldenCase> corpus = golden_corpus();
    REQUIRE(corpus.size() == 20);
    for (const GoldenCase& c : corpus) {
        INFO("case " << c.name);
        const std::string err = check_golden_case(c);
        INFO(err);
        CHECK(err.empty());
    }
}

TEST_CASE("canonical print is parseable and idempotent") {
    const char* src =
        "set gamma 2.675e8\n"
        "field b0 3.0 T\n"
        "domain d spins 2 field 0 0 1.5 T position 0 0 0.01 m k -1e-7 rad/s\n"
        "ensemble n 1e4 polarization boltzmann 77 K seed 5 mc 100\n"
        "pulse rf amp 2e-6 T carrier resonant dur 1e-5 s phase 0.25\n"
        "delay 2e-4 s\n"
        "acquire n 64 dt 5e-6 s\n";
    const ParseResult first = parse_sequence(src);
    REQUIRE(first.ok());
    const std::string printed = print_program(first.program);
    const ParseResult second = parse_sequence(printed);
    REQUIRE(second.ok());
    CHECK(second.program == first.program);
    // printing again yields the same text
    CHECK(print_program(second.program) == printed);
}

TEST_CASE("typed throwing interface maps diagnostic codes") {
    CHECK_THROWS_AS(parse_sequence_or_throw("field b0 7.0 G\n"), UnknownUnit);
    CHECK_THROWS_AS(
        parse_sequence_or_throw("acquire n 8 dt 1e-6 s\nacquire n 8 dt 1e-6 s\n"),
        DuplicateAcquire);
    CHECK_THROWS_AS(parse_sequence_or_throw("pulse rf amp 1 rad/s carrier resonant dur 1e-4 "
                                            "s phase 0 domain nope\nacquire n 8 dt 1e-6 s\n"),
                    UndeclaredDomain);
    CHECK_THROWS_AS(parse_sequence_or_throw("boost power 9000\n"), SyntaxError);
    // warnings alone do not throw
    CHECK_NOTHROW(parse_sequence_or_throw("delay 1e-3 s\n"));
}

TEST_CASE("syntax error positions name the offending token") {
    const ParseResult r = parse_sequence("pulse rf amp abc T carrier resonant dur 1 s phase 0\n");
    REQUIRE_FALSE(r.ok());
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics[0].line == 1);
    CHECK(r.diagnostics[0].col == 14);  // the bad amplitude token
}

TEST_CASE("boltzmann polarization requires a preceding field") {
    const ParseResult r =
        parse_sequence("ensemble n 10 polarization boltzmann 300 K\nacquire n 8 dt 1e-6 s\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].code == "syntax");
    CHECK(r.diagnostics[0].line == 1);
}

TEST_CASE("spin counts beyond the capacity cap are rejected at parse time") {
    const ParseResult r = parse_sequence(
        "domain big spins 13 field 0 0 1.0 T\nacquire n 8 dt 1e-6 s\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].code == "syntax");
}

TEST_CASE("domain redeclaration is rejected") {
    const ParseResult r = parse_sequence(
        "domain a spins 1 field 0 0 1.0 T\n"
        "domain a spins 1 field 0 0 2.0 T\n"
        "acquire n 8 dt 1e-6 s\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].line == 2);
    CHECK(r.diagnostics[0].col == 8);  // the repeated name
}

TEST_CASE("zero gamma is rejected") {
    const ParseResult r = parse_sequence("set gamma 0\nacquire n 8 dt 1e-6 s\n");
    REQUIRE_FALSE(r.ok());
}

TEST_CASE("polarization outside [-1, 1] is rejected") {
    const ParseResult r =
        parse_sequence("ensemble n 10 polarization 1.5\nacquire n 8 dt 1e-6 s\n");
    REQUIRE_FALSE(r.ok());
}

TEST_CASE("carrier accepts signed values while amplitude folds to a magnitude") {
    const ParseResult r = parse_sequence(
        "pulse rf amp -100 rad/s carrier -3e5 rad/s dur 1e-4 s phase 0\n"
        "acquire n 8 dt 1e-6 s\n");
    REQUIRE(r.ok());
    REQUIRE(r.program.events.size() == 2);
    const RfPulseEvent& p = r.program.events[0].pulse;
    CHECK(p.omega1 == 100.0);
    CHECK(p.carrier == -3e5);
    CHECK_FALSE(p.resonant);
}

TEST_CASE("tesla amplitudes convert through the gyromagnetic ratio in effect") {
    const ParseResult r = parse_sequence(
        "set gamma 2.0e8\n"
        "pulse rf amp 1e-3 T carrier resonant dur 1e-5 s phase 0\n"
        "acquire n 8 dt 1e-6 s\n");
    REQUIRE(r.ok());
    CHECK(r.program.events[0].pulse.omega1 == 2.0e8 * 1e-3);
}

TEST_CASE("acquire length cap") {
    const ParseResult ok = parse_sequence("acquire n 4194304 dt 1e-7 s\n");
    CHECK(ok.ok());
    const ParseResult bad = parse_sequence("acquire n 4194305 dt 1e-7 s\n");
    CHECK_FALSE(bad.ok());
}

TEST_CASE("comments and blank lines carry no events") {
    const ParseResult r = parse_sequence(
        "# heading\n"
        "\n"
        "delay 1e-3 s  # trailing note\n"
        "acquire n 8 dt 1e-6 s\n");
    REQUIRE(r.ok());
    CHECK(r.diagnostics.empty());
    REQUIRE(r.program.events.size() == 2);
    CHECK(r.program.events[0].kind == EventKind::delay);
    CHECK(r.program.events[0].line == 3);
}

TEST_CASE("program duration accumulates event durations in order") {
    const ParseResult r = parse_sequence(
        "delay 1e-3 s\n"
        "pulse rf amp 10 rad/s carrier 100 rad/s dur 2e-3 s phase 0\n"
        "acquire n 100 dt 1e-5 s\n");
    REQUIRE(r.ok());
    const SequenceProgram& p = r.program;
    CHECK(p.events[0].start == 0.0);
    CHECK(p.events[1].start == 1e-3);
    CHECK(p.events[2].start == 1e-3 + 2e-3);
    CHECK(p.duration == Catch::Approx(1e-3 + 2e-3 + 100.0 * 1e-5).margin(1e-18));
    CHECK(p.has_acquire());
    CHECK(p.has_rf());
}
