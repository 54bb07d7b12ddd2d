#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/multispin.hpp"  // spin-count capacity limit
#include "spinor/suscept.hpp"

namespace spinor {

// ============================================================================
// Sequence AST
// ============================================================================

enum class Severity { warning, error };

struct Diagnostic {
    Severity severity = Severity::error;
    int line = 0;  ///< 1-based
    int col = 0;   ///< 1-based
    std::string code;
    std::string message;
};

enum class EventKind { static_field, rf_pulse, delay, gradient, acquire };

struct RfPulseEvent {
    double omega1 = 0.0;    ///< drive amplitude, rad/s, >= 0
    bool resonant = false;  ///< carrier locked to the domain's precession frequency
    double carrier = 0.0;   ///< rad/s when not resonant
    double phase = 0.0;     ///< rad
    std::string domain;     ///< empty = all domains
};

struct GradientEvent {
    int axis = 2;  ///< 0 = x, 1 = y, 2 = z (spatial direction of variation)
    double strength = 0.0;  ///< T/m
    std::string domain;     ///< empty = all domains
};

struct AcquireEvent {
    std::size_t n = 0;
    double dt = 0.0;
};

/// One timeline entry. start/duration are seconds; acquire occupies n*dt.
/// Only the payload matching kind is meaningful.
struct SeqEvent {
    EventKind kind = EventKind::delay;
    double start = 0.0;
    double duration = 0.0;
    int line = 0;  ///< source position; not part of structural identity
    RfPulseEvent pulse;
    GradientEvent gradient;
    AcquireEvent acquire;
};

[[nodiscard]] inline bool operator==(const RfPulseEvent& a, const RfPulseEvent& b) {
    return a.omega1 == b.omega1 && a.resonant == b.resonant && a.carrier == b.carrier &&
           a.phase == b.phase && a.domain == b.domain;
}

[[nodiscard]] inline bool operator==(const GradientEvent& a, const GradientEvent& b) {
    return a.axis == b.axis && a.strength == b.strength && a.domain == b.domain;
}

[[nodiscard]] inline bool operator==(const AcquireEvent& a, const AcquireEvent& b) {
    return a.n == b.n && a.dt == b.dt;
}

[[nodiscard]] inline bool operator==(const SeqEvent& a, const SeqEvent& b) {
    if (a.kind != b.kind || a.start != b.start || a.duration != b.duration) return false;
    switch (a.kind) {
        case EventKind::rf_pulse: return a.pulse == b.pulse;
        case EventKind::gradient: return a.gradient == b.gradient;
        case EventKind::acquire: return a.acquire == b.acquire;
        default: return true;
    }
}

struct DomainDecl {
    std::string name;
    std::size_t spins = 1;
    std::array<double, 3> omega{0.0, 0.0, 0.0};        ///< rad/s, canonical
    std::array<double, 3> field_tesla{0.0, 0.0, 0.0};  ///< derived from omega
    std::array<double, 3> position_m{0.0, 0.0, 0.0};
    double k_rest = 0.0;
    bool k_set = false;
};

[[nodiscard]] inline bool operator==(const DomainDecl& a, const DomainDecl& b) {
    return a.name == b.name && a.spins == b.spins && a.omega == b.omega &&
           a.position_m == b.position_m && a.k_rest == b.k_rest && a.k_set == b.k_set;
}

struct EnsembleDecl {
    enum class PolMode { value, boltzmann };
    double n = 1.0;
    PolMode mode = PolMode::value;
    double polarization = 0.0;    ///< resolved value (tanh form already applied)
    double temperature_k = 0.0;   ///< only for boltzmann mode
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t mc_draws = 0;   ///< 0 = analytic phase average
};

[[nodiscard]] inline bool operator==(const EnsembleDecl& a, const EnsembleDecl& b) {
    return a.n == b.n && a.mode == b.mode && a.polarization == b.polarization &&
           a.temperature_k == b.temperature_k && a.seed == b.seed && a.seed_set == b.seed_set &&
           a.mc_draws == b.mc_draws;
}

/// Parsed, unit-resolved sequence. All frequencies are rad/s; the last
/// `field b0` statement defines the static field for the whole timeline.
struct SequenceProgram {
    double gamma = gamma_proton;
    bool gamma_set = false;
    double b0_omega = 0.0;  ///< -gamma * B0, rad/s
    double b0_tesla = 0.0;
    bool field_set = false;
    double rest_k = 0.0;
    bool rest_set = false;
    std::vector<DomainDecl> domains;
    EnsembleDecl ensemble;
    bool ensemble_set = false;
    std::vector<SeqEvent> events;
    double duration = 0.0;

    [[nodiscard]] const DomainDecl* find_domain(const std::string& name) const {
        for (const DomainDecl& d : domains)
            if (d.name == name) return &d;
        return nullptr;
    }

    [[nodiscard]] bool has_acquire() const {
        for (const SeqEvent& e : events)
            if (e.kind == EventKind::acquire) return true;
        return false;
    }

    [[nodiscard]] const SeqEvent* acquire_event() const {
        for (const SeqEvent& e : events)
            if (e.kind == EventKind::acquire) return &e;
        return nullptr;
    }

    [[nodiscard]] bool has_rf() const {
        for (const SeqEvent& e : events)
            if (e.kind == EventKind::rf_pulse) return true;
        return false;
    }
};

[[nodiscard]] inline bool operator==(const SequenceProgram& a, const SequenceProgram& b) {
    return a.gamma == b.gamma && a.gamma_set == b.gamma_set && a.b0_omega == b.b0_omega &&
           a.b0_tesla == b.b0_tesla && a.field_set == b.field_set && a.rest_k == b.rest_k &&
           a.rest_set == b.rest_set && a.domains == b.domains &&
           a.ensemble == b.ensemble && a.ensemble_set == b.ensemble_set &&
           a.events == b.events && a.duration == b.duration;
}

struct ParseResult {
    SequenceProgram program;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool ok() const {
        for (const Diagnostic& d : diagnostics)
            if (d.severity == Severity::error) return false;
        return true;
    }
};

// ============================================================================
// Parser
// ============================================================================

namespace detail {

struct Token {
    std::string text;
    int col = 0;  ///< 1-based
};

/// Strip the comment tail and split a line on whitespace, recording columns.
[[nodiscard]] inline std::vector<Token> lex_line(std::string_view line, int& eol_col) {
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        toks.push_back(Token{std::string(line.substr(start, i - start)),
                             static_cast<int>(start) + 1});
    }
    eol_col = static_cast<int>(line.size()) + 1;
    return toks;
}

/// Cursor over one statement line. Reported errors abort the line; the
/// parser continues with the next one.
class LineCursor {
public:
    LineCursor(const std::vector<Token>& toks, int line, int eol_col,
               std::vector<Diagnostic>& diags)
        : toks_(toks), line_(line), eol_col_(eol_col), diags_(diags) {}

    [[nodiscard]] bool done() const { return idx_ >= toks_.size(); }
    [[nodiscard]] bool failed() const { return failed_; }
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int statement_col() const { return toks_.empty() ? 1 : toks_[0].col; }

    [[nodiscard]] const Token* peek() const { return done() ? nullptr : &toks_[idx_]; }

    /// Peek whether the next token equals a keyword, without consuming.
    [[nodiscard]] bool next_is(const char* kw) const {
        return !done() && toks_[idx_].text == kw;
    }

    const Token* take() {
        if (done()) return nullptr;
        return &toks_[idx_++];
    }

    void fail(int col, const std::string& code, const std::string& message) {
        if (failed_) return;
        failed_ = true;
        diags_.push_back(Diagnostic{Severity::error, line_, col, code, message});
    }

    void fail_here(const std::string& code, const std::string& message) {
        fail(done() ? eol_col_ : toks_[idx_].col, code, message);
    }

    bool keyword(const char* kw) {
        if (failed_) return false;
        const Token* t = peek();
        if (t == nullptr || t->text != kw) {
            fail_here("syntax", std::string("expected '") + kw + "'");
            return false;
        }
        ++idx_;
        return true;
    }

    double number(const char* what) {
        if (failed_) return 0.0;
        const Token* t = peek();
        if (t == nullptr) {
            fail_here("syntax", std::string("expected ") + what);
            return 0.0;
        }
        const char* begin = t->text.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + t->text.size() || !is_finite(v)) {
            fail_here("syntax", std::string("expected ") + what + ", got '" + t->text + "'");
            return 0.0;
        }
        ++idx_;
        return v;
    }

    /// Non-negative integer that may be written in float notation (1e6).
    std::uint64_t count(const char* what, std::uint64_t min_value) {
        const int col = done() ? eol_col_ : toks_[idx_].col;
        const double v = number(what);
        if (failed_) return 0;
        if (!(v >= static_cast<double>(min_value)) || v != std::floor(v) || v > 9.007e15) {
            fail(col, "syntax", std::string(what) + " must be an integer >= " +
                                    std::to_string(min_value));
            return 0;
        }
        return static_cast<std::uint64_t>(v);
    }

    double positive_number(const char* what) {
        const int col = done() ? eol_col_ : toks_[idx_].col;
        const double v = number(what);
        if (failed_) return 0.0;
        if (!(v > 0.0)) {
            fail(col, "syntax", std::string(what) + " must be positive");
            return 0.0;
        }
        return v;
    }

    /// Consume a unit token from the allowed set; returns its text.
    std::string unit(std::initializer_list<const char*> allowed) {
        if (failed_) return {};
        const Token* t = peek();
        if (t == nullptr) {
            fail_here("syntax", "expected a unit");
            return {};
        }
        for (const char* u : allowed) {
            if (t->text == u) {
                ++idx_;
                return t->text;
            }
        }
        fail(t->col, "unknown-unit", "unknown unit '" + t->text + "'");
        return {};
    }

    std::string word(const char* what) {
        if (failed_) return {};
        const Token* t = take();
        if (t == nullptr) {
            fail_here("syntax", std::string("expected ") + what);
            return {};
        }
        return t->text;
    }

    void end_of_statement() {
        if (failed_ || done()) return;
        fail_here("syntax", "unexpected trailing token '" + toks_[idx_].text + "'");
    }

private:
    const std::vector<Token>& toks_;
    std::size_t idx_ = 0;
    int line_;
    int eol_col_;
    bool failed_ = false;
    std::vector<Diagnostic>& diags_;
};

/// Convert a field-like value to rad/s given the unit: omega = -gamma B for
/// tesla, times 2 pi for Hz, unchanged for rad/s.
[[nodiscard]] inline double to_angular(double value, const std::string& unit, double gamma) {
    if (unit == "T") return -gamma * value;
    if (unit == "Hz") return 2.0 * pi * value;
    return value;  // rad/s
}

}  // namespace detail

/// Parse sequence text. Collects diagnostics instead of throwing; an
/// erroneous line is skipped and parsing continues, so one pass reports
/// every problem. A program without an acquire window gets a warning.
[[nodiscard]] inline ParseResult parse_sequence(std::string_view source) {
    ParseResult result;
    SequenceProgram& p = result.program;
    double clock = 0.0;
    bool seen_acquire = false;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= source.size()) {
        const std::size_t nl = source.find('\n', pos);
        const std::string_view raw = source.substr(
            pos, nl == std::string_view::npos ? source.size() - pos : nl - pos);
        ++line_no;
        int eol_col = 1;
        const std::vector<detail::Token> toks = detail::lex_line(raw, eol_col);
        if (!toks.empty()) {
            detail::LineCursor cur(toks, line_no, eol_col, result.diagnostics);
            const std::string head = cur.word("a statement");
            if (head == "set") {
                cur.keyword("gamma");
                const double g = cur.number("a gyromagnetic ratio");
                cur.end_of_statement();
                if (!cur.failed()) {
                    if (g == 0.0) {
                        cur.fail(cur.statement_col(), "syntax", "gamma must be nonzero");
                    } else {
                        p.gamma = g;
                        p.gamma_set = true;
                    }
                }
            } else if (head == "field") {
                cur.keyword("b0");
                const double v = cur.number("a field value");
                const std::string unit = cur.unit({"T", "Hz", "rad/s"});
                double dur = 0.0;
                bool has_dur = false;
                if (cur.next_is("dur")) {
                    cur.keyword("dur");
                    dur = cur.positive_number("a duration");
                    cur.unit({"s"});
                    has_dur = true;
                }
                cur.end_of_statement();
                if (!cur.failed()) {
                    p.b0_omega = detail::to_angular(v, unit, p.gamma);
                    p.b0_tesla = (unit == "T") ? v : -p.b0_omega / p.gamma;
                    p.field_set = true;
                    if (has_dur) {
                        SeqEvent e;
                        e.kind = EventKind::static_field;
                        e.start = clock;
                        e.duration = dur;
                        e.line = line_no;
                        clock += dur;
                        p.events.push_back(e);
                    }
                }
            } else if (head == "rest") {
                cur.keyword("k");
                const double v = cur.number("a rest constant");
                cur.unit({"rad/s"});
                cur.end_of_statement();
                if (!cur.failed()) {
                    p.rest_k = v;
                    p.rest_set = true;
                }
            } else if (head == "domain") {
                DomainDecl d;
                const int name_col = cur.done() ? eol_col : cur.peek()->col;
                d.name = cur.word("a domain name");
                cur.keyword("spins");
                d.spins = static_cast<std::size_t>(cur.count("spin count", 1));
                cur.keyword("field");
                std::array<double, 3> raw_field{};
                for (double& f : raw_field) f = cur.number("a field component");
                const std::string unit = cur.unit({"T", "Hz", "rad/s"});
                if (cur.next_is("position")) {
                    cur.keyword("position");
                    for (double& x : d.position_m) x = cur.number("a position component");
                    cur.unit({"m"});
                }
                if (cur.next_is("k")) {
                    cur.keyword("k");
                    d.k_rest = cur.number("a rest constant");
                    cur.unit({"rad/s"});
                    d.k_set = true;
                }
                cur.end_of_statement();
                if (!cur.failed()) {
                    if (d.spins > max_total_spins) {
                        cur.fail(cur.statement_col(), "syntax",
                                 "spin count exceeds the capacity cap");
                    } else if (p.find_domain(d.name) != nullptr) {
                        cur.fail(name_col, "syntax", "domain '" + d.name + "' redeclared");
                    } else {
                        for (std::size_t i = 0; i < 3; ++i) {
                            d.omega[i] = detail::to_angular(raw_field[i], unit, p.gamma);
                            d.field_tesla[i] =
                                (unit == "T") ? raw_field[i] : -d.omega[i] / p.gamma;
                        }
                        p.domains.push_back(d);
                    }
                }
            } else if (head == "pulse") {
                cur.keyword("rf");
                cur.keyword("amp");
                const double amp = cur.number("a drive amplitude");
                const std::string amp_unit = cur.unit({"T", "Hz", "rad/s"});
                cur.keyword("carrier");
                RfPulseEvent pulse;
                if (cur.next_is("resonant")) {
                    cur.keyword("resonant");
                    pulse.resonant = true;
                } else {
                    const double cv = cur.number("a carrier value");
                    const std::string cu = cur.unit({"T", "Hz", "rad/s"});
                    pulse.carrier = detail::to_angular(cv, cu, p.gamma);
                }
                cur.keyword("dur");
                const double dur = cur.positive_number("a duration");
                cur.unit({"s"});
                cur.keyword("phase");
                pulse.phase = cur.number("a phase in rad");
                if (cur.next_is("domain")) {
                    cur.keyword("domain");
                    const int dom_col = cur.done() ? eol_col : cur.peek()->col;
                    pulse.domain = cur.word("a domain name");
                    if (!cur.failed() && p.find_domain(pulse.domain) == nullptr)
                        cur.fail(dom_col, "undeclared-domain",
                                 "domain '" + pulse.domain + "' is not declared");
                }
                cur.end_of_statement();
                if (!cur.failed()) {
                    pulse.omega1 = std::abs(detail::to_angular(amp, amp_unit, p.gamma));
                    SeqEvent e;
                    e.kind = EventKind::rf_pulse;
                    e.start = clock;
                    e.duration = dur;
                    e.line = line_no;
                    e.pulse = pulse;
                    clock += dur;
                    p.events.push_back(e);
                }
            } else if (head == "delay") {
                const double dur = cur.positive_number("a duration");
                cur.unit({"s"});
                cur.end_of_statement();
                if (!cur.failed()) {
                    SeqEvent e;
                    e.kind = EventKind::delay;
                    e.start = clock;
                    e.duration = dur;
                    e.line = line_no;
                    clock += dur;
                    p.events.push_back(e);
                }
            } else if (head == "gradient") {
                GradientEvent g;
                const int axis_col = cur.done() ? eol_col : cur.peek()->col;
                const std::string axis = cur.word("an axis (x, y or z)");
                if (!cur.failed()) {
                    if (axis == "x") {
                        g.axis = 0;
                    } else if (axis == "y") {
                        g.axis = 1;
                    } else if (axis == "z") {
                        g.axis = 2;
                    } else {
                        cur.fail(axis_col, "syntax",
                                 "expected an axis (x, y or z), got '" + axis + "'");
                    }
                }
                g.strength = cur.number("a gradient strength");
                cur.unit({"T/m"});
                cur.keyword("dur");
                const double dur = cur.positive_number("a duration");
                cur.unit({"s"});
                if (cur.next_is("domain")) {
                    cur.keyword("domain");
                    const int dom_col = cur.done() ? eol_col : cur.peek()->col;
                    g.domain = cur.word("a domain name");
                    if (!cur.failed() && p.find_domain(g.domain) == nullptr)
                        cur.fail(dom_col, "undeclared-domain",
                                 "domain '" + g.domain + "' is not declared");
                }
                cur.end_of_statement();
                if (!cur.failed()) {
                    SeqEvent e;
                    e.kind = EventKind::gradient;
                    e.start = clock;
                    e.duration = dur;
                    e.line = line_no;
                    e.gradient = g;
                    clock += dur;
                    p.events.push_back(e);
                }
            } else if (head == "acquire") {
                cur.keyword("n");
                const std::uint64_t n = cur.count("sample count", 1);
                cur.keyword("dt");
                const double dt = cur.positive_number("a sample spacing");
                cur.unit({"s"});
                cur.end_of_statement();
                if (!cur.failed()) {
                    if (seen_acquire) {
                        cur.fail(cur.statement_col(), "duplicate-acquire",
                                 "a sequence may declare only one acquire window");
                    } else if (n > (std::uint64_t{1} << 22)) {
                        cur.fail(cur.statement_col(), "syntax",
                                 "sample count exceeds the 2^22 cap");
                    } else {
                        seen_acquire = true;
                        SeqEvent e;
                        e.kind = EventKind::acquire;
                        e.start = clock;
                        e.duration = static_cast<double>(n) * dt;
                        e.line = line_no;
                        e.acquire.n = static_cast<std::size_t>(n);
                        e.acquire.dt = dt;
                        clock += e.duration;
                        p.events.push_back(e);
                    }
                }
            } else if (head == "ensemble") {
                EnsembleDecl ens;
                cur.keyword("n");
                const int n_col = cur.done() ? eol_col : cur.peek()->col;
                ens.n = cur.number("a spin count");
                if (!cur.failed() && !(ens.n >= 1.0))
                    cur.fail(n_col, "syntax", "ensemble size must be >= 1");
                cur.keyword("polarization");
                if (cur.next_is("boltzmann")) {
                    cur.keyword("boltzmann");
                    ens.mode = EnsembleDecl::PolMode::boltzmann;
                    const int t_col = cur.done() ? eol_col : cur.peek()->col;
                    ens.temperature_k = cur.positive_number("a temperature");
                    cur.unit({"K"});
                    if (!cur.failed()) {
                        if (!p.field_set) {
                            cur.fail(t_col, "syntax",
                                     "boltzmann polarization needs `field b0` declared first");
                        } else {
                            const PhysicalConstants c{p.gamma, hbar_si};
                            ens.polarization =
                                boltzmann_polarization(p.b0_omega, ens.temperature_k, c);
                        }
                    }
                } else {
                    const int pol_col = cur.done() ? eol_col : cur.peek()->col;
                    ens.mode = EnsembleDecl::PolMode::value;
                    ens.polarization = cur.number("a polarization");
                    if (!cur.failed() &&
                        !(ens.polarization >= -1.0 && ens.polarization <= 1.0))
                        cur.fail(pol_col, "syntax", "polarization must lie in [-1, 1]");
                }
                if (cur.next_is("seed")) {
                    cur.keyword("seed");
                    ens.seed = cur.count("a seed", 0);
                    ens.seed_set = true;
                }
                if (cur.next_is("mc")) {
                    cur.keyword("mc");
                    ens.mc_draws = cur.count("a draw count", 1);
                }
                cur.end_of_statement();
                if (!cur.failed()) {
                    p.ensemble = ens;
                    p.ensemble_set = true;
                }
            } else {
                cur.fail(cur.statement_col(), "syntax", "unknown statement '" + head + "'");
            }
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    p.duration = clock;
    if (!seen_acquire) {
        result.diagnostics.push_back(Diagnostic{Severity::warning, line_no, 1, "no-acquire",
                                                "sequence has no acquire window"});
    }
    return result;
}

/// Parse, throwing the typed error for the first error diagnostic.
[[nodiscard]] inline SequenceProgram parse_sequence_or_throw(std::string_view source) {
    ParseResult r = parse_sequence(source);
    for (const Diagnostic& d : r.diagnostics) {
        if (d.severity != Severity::error) continue;
        if (d.code == "unknown-unit") throw UnknownUnit(d.line, d.col, d.message);
        if (d.code == "duplicate-acquire") throw DuplicateAcquire(d.line, d.col, d.message);
        if (d.code == "undeclared-domain") throw UndeclaredDomain(d.line, d.col, d.message);
        throw SyntaxError(d.line, d.col, d.message);
    }
    return std::move(r.program);
}

// ============================================================================
// Canonical printing (round-trip)
// ============================================================================

namespace detail {

[[nodiscard]] inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Emit canonical text (all frequencies in rad/s) that parses back into a
/// structurally identical program. Comments and original units are not kept.
[[nodiscard]] inline std::string print_program(const SequenceProgram& p) {
    using detail::fmt_double;
    std::string out;
    auto line = [&out](const std::string& s) {
        out += s;
        out += '\n';
    };
    if (p.gamma_set) line("set gamma " + fmt_double(p.gamma));
    if (p.field_set) line("field b0 " + fmt_double(p.b0_omega) + " rad/s");
    if (p.rest_set) line("rest k " + fmt_double(p.rest_k) + " rad/s");
    for (const DomainDecl& d : p.domains) {
        std::string s = "domain " + d.name + " spins " + std::to_string(d.spins) + " field";
        for (double w : d.omega) s += " " + fmt_double(w);
        s += " rad/s";
        if (d.position_m != std::array<double, 3>{0.0, 0.0, 0.0}) {
            s += " position";
            for (double x : d.position_m) s += " " + fmt_double(x);
            s += " m";
        }
        if (d.k_set) s += " k " + fmt_double(d.k_rest) + " rad/s";
        line(s);
    }
    if (p.ensemble_set) {
        std::string s = "ensemble n " + fmt_double(p.ensemble.n) + " polarization ";
        if (p.ensemble.mode == EnsembleDecl::PolMode::boltzmann) {
            s += "boltzmann " + fmt_double(p.ensemble.temperature_k) + " K";
        } else {
            s += fmt_double(p.ensemble.polarization);
        }
        if (p.ensemble.seed_set) s += " seed " + std::to_string(p.ensemble.seed);
        if (p.ensemble.mc_draws > 0) s += " mc " + std::to_string(p.ensemble.mc_draws);
        line(s);
    }
    for (const SeqEvent& e : p.events) {
        switch (e.kind) {
            case EventKind::static_field:
                line("field b0 " + fmt_double(p.b0_omega) + " rad/s dur " +
                     fmt_double(e.duration) + " s");
                break;
            case EventKind::rf_pulse: {
                std::string s = "pulse rf amp " + fmt_double(e.pulse.omega1) +
                                " rad/s carrier ";
                s += e.pulse.resonant ? "resonant" : (fmt_double(e.pulse.carrier) + " rad/s");
                s += " dur " + fmt_double(e.duration) + " s phase " +
                     fmt_double(e.pulse.phase);
                if (!e.pulse.domain.empty()) s += " domain " + e.pulse.domain;
                line(s);
                break;
            }
            case EventKind::delay:
                line("delay " + fmt_double(e.duration) + " s");
                break;
            case EventKind::gradient: {
                const char axis = e.gradient.axis == 0 ? 'x' : (e.gradient.axis == 1 ? 'y' : 'z');
                std::string s = std::string("gradient ") + axis + " " +
                                fmt_double(e.gradient.strength) + " T/m dur " +
                                fmt_double(e.duration) + " s";
                if (!e.gradient.domain.empty()) s += " domain " + e.gradient.domain;
                line(s);
                break;
            }
            case EventKind::acquire:
                line("acquire n " + std::to_string(e.acquire.n) + " dt " +
                     fmt_double(e.acquire.dt) + " s");
                break;
        }
    }
    return out;
}

}  // namespace spinor
