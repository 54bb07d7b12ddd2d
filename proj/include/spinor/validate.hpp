#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/engine.hpp"
#include "spinor/experiments.hpp"
#include "spinor/io.hpp"
#include "spinor/multispin.hpp"
#include "spinor/oracle.hpp"
#include "spinor/propagator.hpp"
#include "spinor/rng.hpp"
#include "spinor/sequence.hpp"
#include "spinor/spectra.hpp"
#include "spinor/suscept.hpp"

namespace spinor {

// ============================================================================
// Release gate: twelve numbered checks, runnable from the CLI and reused by
// the test suite. Each check is self-contained and deterministic.
// ============================================================================

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    bool quick = false;  ///< smaller draw counts for smoke runs
    std::uint64_t seed = 20260822;
};

namespace detail {

[[nodiscard]] inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1. Every closed-form builder against the independent integrator
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_oracle_equivalence(const ValidationOptions& o) {
    const std::size_t per_builder = o.quick ? 40 : 200;
    IntegrationConfig cfg;
    cfg.steps_per_period = o.quick ? 1500 : 2000;
    cfg.max_norm_drift = 1e-7;  // hard abort far above the 1e-9 pass line
    const CounterRng rng(o.seed);
    std::uint64_t ctr = 0;
    auto next = [&ctr] { return ctr++; };

    double worst_entry = 0.0;
    double worst_drift = 0.0;
    std::size_t draws = 0;
    auto record = [&](const OracleReport& rep) {
        worst_entry = std::max(worst_entry, rep.max_entry_error);
        worst_drift = std::max(worst_drift, rep.max_norm_drift);
        ++draws;
    };

    for (std::size_t i = 0; i < per_builder; ++i) {
        // free precession
        {
            const double sign = rng.uniform01(next()) < 0.5 ? -1.0 : 1.0;
            const double w0 = sign * rng.log_uniform(next(), 1.0, 1e6);
            const HamiltonianFn h = hamiltonian_static(w0);
            const double t = rng.uniform(next(), 0.5, 18.0) / h.char_freq;
            record(compare_closed_form(
                h, [w0](double tt) { return static_propagator(w0, tt); }, {t}, cfg));
        }
        // rotating drive
        {
            const double sign = rng.uniform01(next()) < 0.5 ? -1.0 : 1.0;
            const double w0 = sign * rng.log_uniform(next(), 1e2, 1e6);
            const double offset = w0 * rng.uniform(next(), -0.3, 0.3);
            const double omega = w0 - offset;
            const double w1 = std::abs(w0) * rng.uniform(next(), 0.01, 0.6);
            const HamiltonianFn h = hamiltonian_rf(omega, w0, w1);
            const double t = rng.uniform(next(), 0.5, 18.0) / h.char_freq;
            record(compare_closed_form(
                h,
                [omega, w0, w1](double tt) {
                    return rf_propagator(omega, w0, w1, tt).product();
                },
                {t}, cfg));
        }
        // axis-angle rotation
        {
            const double z = rng.uniform(next(), -1.0, 1.0);
            const double phi = rng.uniform_phase(next());
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const std::array<double, 3> u{rho * std::cos(phi), rho * std::sin(phi), z};
            const double w_rot = rng.log_uniform(next(), 1.0, 1e5);
            const ComplexMatrix gen{0.5 * w_rot * cplx{u[2], 0.0},
                                    0.5 * w_rot * cplx{u[0], -u[1]},
                                    0.5 * w_rot * cplx{u[0], u[1]},
                                    0.5 * w_rot * cplx{-u[2], 0.0}};
            const HamiltonianFn h = hamiltonian_constant(gen, 1.0);
            const double t = rng.uniform(next(), 0.5, 18.0) / h.char_freq;
            record(compare_closed_form(
                h, [u, w_rot](double tt) { return rotation_matrix(u, w_rot * tt); }, {t},
                cfg));
        }
        // rest coupling
        {
            const double sign = rng.uniform01(next()) < 0.5 ? -1.0 : 1.0;
            const double w0 = sign * rng.log_uniform(next(), 1.0, 1e6);
            const double k = w0 * rng.uniform(next(), -1.5, 1.5);
            const HamiltonianFn h = hamiltonian_rest(w0, k);
            const double t = rng.uniform(next(), 0.5, 18.0) / h.char_freq;
            record(compare_closed_form(
                h, [w0, k](double tt) { return rest_propagator(w0, k, tt).product(); }, {t},
                cfg));
        }
        // full constant field
        {
            const double scale = rng.log_uniform(next(), 1e1, 1e6);
            FieldParams fp;
            fp.omega_x = scale * rng.uniform(next(), -1.0, 1.0);
            fp.omega_y = scale * rng.uniform(next(), -1.0, 1.0);
            fp.omega_z = scale * rng.uniform(next(), -1.0, 1.0);
            fp.k_rest = scale * rng.uniform(next(), -0.5, 0.5);
            const HamiltonianFn h = hamiltonian_general(fp);
            const double t = rng.uniform(next(), 0.5, 18.0) / h.char_freq;
            record(compare_closed_form(
                h, [fp](double tt) { return general_propagator(fp, tt).product(); }, {t},
                cfg));
        }
    }

    CriterionResult r{1, "closed forms match the independent integrator", false, ""};
    r.passed = worst_entry < 1e-8 && worst_drift < 1e-9;
    r.detail = std::to_string(draws) + " draws, max entry error " +
               detail::sci(worst_entry) + ", max norm drift " + detail::sci(worst_drift);
    return r;
}

// ---------------------------------------------------------------------------
// 2. Resonant rotation factor and the zero-drive reduction
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_resonance_reduction(const ValidationOptions& o) {
    const CounterRng rng(o.seed + 1);
    std::uint64_t ctr = 0;
    auto next = [&ctr] { return ctr++; };
    double worst_res = 0.0;
    double worst_red = 0.0;
    const std::size_t n = o.quick ? 20 : 100;
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = rng.uniform01(next()) < 0.5 ? -1.0 : 1.0;
        const double w0 = sign * rng.log_uniform(next(), 1e2, 1e6);
        const double w1 = std::abs(w0) * rng.uniform(next(), 0.001, 0.5);
        const double t = rng.uniform(next(), 0.0, 10.0) / std::abs(w0);

        const EvolutionPair res = rf_propagator(w0, w0, w1, t);
        const double c = std::cos(0.5 * w1 * t);
        const double s = std::sin(0.5 * w1 * t);
        const ComplexMatrix expected{cplx{c, 0.0}, cplx{0.0, -s}, cplx{0.0, -s},
                                     cplx{c, 0.0}};
        worst_res = std::max(worst_res, max_abs_diff(res.r_part, expected));

        const double omega = w0 * rng.uniform(next(), 0.2, 1.8);
        const EvolutionPair off = rf_propagator(omega, w0, 0.0, t);
        worst_red =
            std::max(worst_red, max_abs_diff(off.product(), static_propagator(w0, t)));
    }
    CriterionResult r{2, "resonant rotation factor and zero-drive reduction", false, ""};
    r.passed = worst_res <= 1e-12 && worst_red <= 1e-12;
    r.detail = "resonant factor error " + detail::sci(worst_res) +
               ", zero-drive reduction error " + detail::sci(worst_red);
    return r;
}

// ---------------------------------------------------------------------------
// 3. Free precession has a 4*pi period with -I at half period
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_periodicity(const ValidationOptions& o) {
    const CounterRng rng(o.seed + 2);
    std::uint64_t ctr = 0;
    double worst = 0.0;
    const std::size_t n = o.quick ? 20 : 100;
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    const ComplexMatrix neg = cplx{-1.0, 0.0} * eye;
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = rng.uniform01(ctr++) < 0.5 ? -1.0 : 1.0;
        const double w0 = sign * rng.log_uniform(ctr++, 1.0, 1e6);
        worst = std::max(worst, max_abs_diff(static_propagator(w0, 2.0 * pi / w0), neg));
        worst = std::max(worst, max_abs_diff(static_propagator(w0, 4.0 * pi / w0), eye));
    }
    CriterionResult r{3, "free precession is 4-pi periodic (-I at half period)", false, ""};
    r.passed = worst <= 1e-12;
    r.detail = "max deviation " + detail::sci(worst);
    return r;
}

// ---------------------------------------------------------------------------
// 4-7. Canned experiments
// ---------------------------------------------------------------------------

namespace detail {

[[nodiscard]] inline CriterionResult wrap_experiment(int id, const ExperimentReport& rep,
                                                     const std::string& name) {
    CriterionResult r{id, name, rep.passed, ""};
    std::size_t fails = 0;
    for (const std::string& line : rep.checks)
        if (line.rfind("FAIL", 0) == 0) ++fails;
    r.detail = rep.passed ? std::to_string(rep.checks.size()) + " checks passed"
                          : std::to_string(fails) + " of " +
                                std::to_string(rep.checks.size()) + " checks failed";
    return r;
}

}  // namespace detail

[[nodiscard]] inline CriterionResult check_two_resonance_spectrum() {
    return detail::wrap_experiment(4, run_low_field_experiment(),
                                   "driven spectrum shows equal opposite lines at f0, 2f0");
}

[[nodiscard]] inline CriterionResult check_pulse_calibration() {
    return detail::wrap_experiment(5, run_pulse_calibration_experiment(),
                                   "nutation sweep peaks at the quarter-turn pulse");
}

[[nodiscard]] inline CriterionResult check_triplet_amplitudes() {
    return detail::wrap_experiment(6, run_ethanol_triplet_experiment(),
                                   "coupled-triplet lines weigh 1:2:1");
}

[[nodiscard]] inline CriterionResult check_noise_signature() {
    return detail::wrap_experiment(7, run_spin_noise_sign_experiment(),
                                   "undriven line is sign-flipped and K-scaled");
}

// ---------------------------------------------------------------------------
// 8. exp(A (+) B) = exp(A) (x) exp(B)
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_kronecker_identity(const ValidationOptions& o) {
    const CounterRng rng(o.seed + 3);
    std::uint64_t ctr = 0;
    auto herm2 = [&] {
        const double a = rng.uniform(ctr++, -2.0, 2.0);
        const double d = rng.uniform(ctr++, -2.0, 2.0);
        const double x = rng.uniform(ctr++, -2.0, 2.0);
        const double y = rng.uniform(ctr++, -2.0, 2.0);
        return ComplexMatrix{cplx{a, 0.0}, cplx{x, -y}, cplx{x, y}, cplx{d, 0.0}};
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        const ComplexMatrix a = herm2();
        const ComplexMatrix b = herm2();
        const ComplexMatrix lhs = hermitian_exp(kron_sum(a, b));
        const ComplexMatrix rhs = tensor_product(hermitian_exp(a), hermitian_exp(b));
        worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    CriterionResult r{8, "kronecker-sum exponential factorizes", false, ""};
    r.passed = worst <= 1e-10;
    r.detail = "100 pairs, max deviation " + detail::sci(worst);
    return r;
}

// ---------------------------------------------------------------------------
// 9. Two-spin distinct-field eigenvalues: sums and differences, both signs
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_two_spin_spectrum(const ValidationOptions& o) {
    const CounterRng rng(o.seed + 4);
    const PhysicalConstants c{};
    std::uint64_t ctr = 0;
    double worst = 0.0;
    const std::size_t n = o.quick ? 10 : 50;
    for (std::size_t i = 0; i < n; ++i) {
        const double ba = rng.uniform(ctr++, 0.5, 10.0);
        const double bb = rng.uniform(ctr++, 0.5, 10.0);
        const ComplexMatrix h = hamiltonian_distinct_fields(
            {{0.0, 0.0, ba}, {0.0, 0.0, bb}}, c);
        const EnergySpectrum spec = eigen_spectrum(h);
        const double e_sum = 0.5 * c.gamma * c.hbar * (ba + bb);
        const double e_diff = 0.5 * c.gamma * c.hbar * std::abs(ba - bb);
        std::array<double, 4> expected{e_sum, e_diff, -e_diff, -e_sum};
        const double scale = e_sum;
        for (std::size_t k = 0; k < 4; ++k)
            worst = std::max(worst,
                             std::abs(spec.eigenvalues[k] - expected[k]) / scale);
    }
    CriterionResult r{9, "two-spin eigenvalues are signed sums and differences", false, ""};
    r.passed = worst <= 1e-12;
    r.detail = "max relative deviation " + detail::sci(worst);
    return r;
}

// ---------------------------------------------------------------------------
// 10. Diagonal Hamiltonians move no population; zero polarization is silent
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_equilibrium_silence(const ValidationOptions& o) {
    const CounterRng rng(o.seed + 5);
    const PhysicalConstants c{};
    std::uint64_t ctr = 0;
    bool exact = true;
    for (std::size_t n_spins = 1; n_spins <= 4 && exact; ++n_spins) {
        SpinDomain dom;
        dom.n_spins = n_spins;
        dom.field_tesla = {0.0, 0.0, rng.uniform(ctr++, 0.5, 10.0)};
        const ComplexMatrix h = hamiltonian_homogeneous(dom, c);
        const std::size_t dim = h.dim();
        const double t = rng.uniform(ctr++, 1e-6, 1e-2);
        for (std::size_t j = 0; j < dim && exact; ++j) {
            std::vector<cplx> e(dim, cplx{0.0, 0.0});
            e[j] = 1.0;
            const auto out = evolve_matrix_exp(h, e, t, c.hbar);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i == j) continue;
                if (out[i] != cplx{0.0, 0.0}) exact = false;
            }
        }
    }

    bool silent = true;
    FieldParams fp;
    fp.omega_z = 2.0 * pi * 500.0;
    const EnsembleSpec spec = EnsembleSpec::from_fields(fp, 1e4, 0.0);
    for (int i = 0; i < 16; ++i) {
        const double t = rng.uniform(ctr++, 0.0, 0.1);
        if (chi_ensemble(spec, t, c) != cplx{0.0, 0.0}) silent = false;
    }

    CriterionResult r{10, "equilibrium moves no population and emits no signal", false, ""};
    r.passed = exact && silent;
    r.detail = std::string("population transfer exactly zero: ") +
               (exact ? "yes" : "NO") +
               "; zero-polarization signal exactly zero: " + (silent ? "yes" : "NO");
    return r;
}

// ---------------------------------------------------------------------------
// 11. Uniform phases cancel the phase-dependent signal terms
// ---------------------------------------------------------------------------

[[nodiscard]] inline CriterionResult check_phase_cancellation(const ValidationOptions& o) {
    const std::uint64_t draws = o.quick ? 100000 : 1000000;
    const DerivedFreqs f =
        DerivedFreqs::from_drive_offset(2.0 * pi * 500.0, 2.0 * pi * 480.0, 2.0 * pi * 40.0);
    const double pol = 0.4;
    const double r2 = std::sqrt(0.5 * (1.0 + pol));
    const double r1 = std::sqrt(0.5 * (1.0 - pol));
    const PhaseAverageStats stats =
        mc_phase_cancellation(f, r1, r2, 0.01, draws, o.seed + 6);
    const double bound = 5.0 * stats.sigma / std::sqrt(static_cast<double>(draws));
    CriterionResult r{11, "uniform phase draws cancel the phase terms", false, ""};
    r.passed = std::abs(stats.mean) < bound;
    r.detail = "|mean| " + detail::sci(std::abs(stats.mean)) + " vs bound " +
               detail::sci(bound) + " at " + std::to_string(draws) + " draws";
    return r;
}

// ---------------------------------------------------------------------------
// 12. Golden parser corpus and byte-identical reruns
// ---------------------------------------------------------------------------

struct GoldenCase {
    std::string name;
    std::string source;
    bool expect_ok = true;
    SequenceProgram expected;  ///< compared when expect_ok
    std::vector<Diagnostic> expected_diags;  ///< severity/line/col/code compared
};

namespace detail {

[[nodiscard]] inline SeqEvent ev_hold(double start, double dur) {
    SeqEvent e;
    e.kind = EventKind::static_field;
    e.start = start;
    e.duration = dur;
    return e;
}

[[nodiscard]] inline SeqEvent ev_pulse(double start, double dur, double omega1, bool resonant,
                                       double carrier, double phase,
                                       const std::string& dom = "") {
    SeqEvent e;
    e.kind = EventKind::rf_pulse;
    e.start = start;
    e.duration = dur;
    e.pulse.omega1 = omega1;
    e.pulse.resonant = resonant;
    e.pulse.carrier = carrier;
    e.pulse.phase = phase;
    e.pulse.domain = dom;
    return e;
}

[[nodiscard]] inline SeqEvent ev_delay(double start, double dur) {
    SeqEvent e;
    e.kind = EventKind::delay;
    e.start = start;
    e.duration = dur;
    return e;
}

[[nodiscard]] inline SeqEvent ev_gradient(double start, double dur, int axis, double strength,
                                          const std::string& dom = "") {
    SeqEvent e;
    e.kind = EventKind::gradient;
    e.start = start;
    e.duration = dur;
    e.gradient.axis = axis;
    e.gradient.strength = strength;
    e.gradient.domain = dom;
    return e;
}

[[nodiscard]] inline SeqEvent ev_acquire(double start, std::size_t n, double dt) {
    SeqEvent e;
    e.kind = EventKind::acquire;
    e.start = start;
    e.duration = static_cast<double>(n) * dt;
    e.acquire.n = n;
    e.acquire.dt = dt;
    return e;
}

[[nodiscard]] inline Diagnostic diag(Severity sev, int line, int col,
                                     const std::string& code) {
    return Diagnostic{sev, line, col, code, ""};
}

}  // namespace detail

/// Twenty pinned cases: twelve valid sources with their exact expected
/// programs and eight invalid sources with exact diagnostic positions.
[[nodiscard]] inline std::vector<GoldenCase> golden_corpus() {
    using detail::diag;
    using detail::ev_acquire;
    using detail::ev_delay;
    using detail::ev_gradient;
    using detail::ev_hold;
    using detail::ev_pulse;
    std::vector<GoldenCase> cases;

    {
        GoldenCase c;
        c.name = "empty";
        c.source = "";
        c.expect_ok = true;
        c.expected_diags = {diag(Severity::warning, 1, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "comments_only";
        c.source = "# setup\n\n# end\n";
        c.expect_ok = true;
        c.expected_diags = {diag(Severity::warning, 4, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "onepulse";
        c.source =
            "set gamma 2.675e8\n"
            "field b0 7.0 T\n"
            "pulse rf amp 1e-3 T carrier resonant dur 2.5e-6 s phase 0\n"
            "acquire n 256 dt 1e-6 s\n";
        SequenceProgram& p = c.expected;
        p.gamma = 2.675e8;
        p.gamma_set = true;
        p.b0_tesla = 7.0;
        p.b0_omega = -2.675e8 * 7.0;
        p.field_set = true;
        double clock = 0.0;
        p.events.push_back(
            ev_pulse(clock, 2.5e-6, std::abs(-2.675e8 * 1e-3), true, 0.0, 0.0));
        clock += 2.5e-6;
        p.events.push_back(ev_acquire(clock, 256, 1e-6));
        clock += 256.0 * 1e-6;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "noise_imaging";
        c.source =
            "set gamma 2.675e8\n"
            "rest k -6e-8 rad/s\n"
            "domain left spins 1 field 0 0 7.0 T position -0.01 0 0 m\n"
            "domain right spins 1 field 0 0 7.0 T position 0.01 0 0 m\n"
            "ensemble n 1e6 polarization 1e-3 seed 7\n"
            "gradient x 6e-3 T/m dur 1e-3 s\n"
            "acquire n 128 dt 1e-5 s\n";
        SequenceProgram& p = c.expected;
        p.gamma = 2.675e8;
        p.gamma_set = true;
        p.rest_k = -6e-8;
        p.rest_set = true;
        DomainDecl left;
        left.name = "left";
        left.spins = 1;
        left.omega = {-2.675e8 * 0.0, -2.675e8 * 0.0, -2.675e8 * 7.0};
        left.field_tesla = {0.0, 0.0, 7.0};
        left.position_m = {-0.01, 0.0, 0.0};
        DomainDecl right = left;
        right.name = "right";
        right.position_m = {0.01, 0.0, 0.0};
        p.domains = {left, right};
        p.ensemble.n = 1e6;
        p.ensemble.mode = EnsembleDecl::PolMode::value;
        p.ensemble.polarization = 1e-3;
        p.ensemble.seed = 7;
        p.ensemble.seed_set = true;
        p.ensemble_set = true;
        double clock = 0.0;
        p.events.push_back(ev_gradient(clock, 1e-3, 0, 6e-3));
        clock += 1e-3;
        p.events.push_back(ev_acquire(clock, 128, 1e-5));
        clock += 128.0 * 1e-5;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "offresonant_pulse";
        c.source =
            "set gamma 2.675e8\n"
            "field b0 11.7 T\n"
            "pulse rf amp 500 Hz carrier 500e6 Hz dur 5e-4 s phase 1.5707963267948966\n"
            "delay 1e-3 s\n"
            "acquire n 64 dt 2e-6 s\n";
        SequenceProgram& p = c.expected;
        p.gamma = 2.675e8;
        p.gamma_set = true;
        p.b0_tesla = 11.7;
        p.b0_omega = -2.675e8 * 11.7;
        p.field_set = true;
        double clock = 0.0;
        p.events.push_back(ev_pulse(clock, 5e-4, std::abs(2.0 * pi * 500.0), false,
                                    2.0 * pi * 500e6, 1.5707963267948966));
        clock += 5e-4;
        p.events.push_back(ev_delay(clock, 1e-3));
        clock += 1e-3;
        p.events.push_back(ev_acquire(clock, 64, 2e-6));
        clock += 64.0 * 2e-6;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "boltzmann_mc";
        c.source =
            "field b0 7.0 T\n"
            "ensemble n 1e5 polarization boltzmann 300 K seed 42 mc 1000\n"
            "acquire n 32 dt 1e-6 s\n";
        SequenceProgram& p = c.expected;
        p.b0_tesla = 7.0;
        p.b0_omega = -gamma_proton * 7.0;
        p.field_set = true;
        p.ensemble.n = 1e5;
        p.ensemble.mode = EnsembleDecl::PolMode::boltzmann;
        p.ensemble.temperature_k = 300.0;
        p.ensemble.polarization = boltzmann_polarization(
            -gamma_proton * 7.0, 300.0, PhysicalConstants{gamma_proton, hbar_si});
        p.ensemble.seed = 42;
        p.ensemble.seed_set = true;
        p.ensemble.mc_draws = 1000;
        p.ensemble_set = true;
        double clock = 0.0;
        p.events.push_back(ev_acquire(clock, 32, 1e-6));
        clock += 32.0 * 1e-6;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "field_hold";
        c.source =
            "field b0 1000 Hz dur 2e-3 s\n"
            "acquire n 16 dt 1e-4 s\n";
        SequenceProgram& p = c.expected;
        p.b0_omega = 2.0 * pi * 1000.0;
        p.b0_tesla = -(2.0 * pi * 1000.0) / gamma_proton;
        p.field_set = true;
        double clock = 0.0;
        p.events.push_back(ev_hold(clock, 2e-3));
        clock += 2e-3;
        p.events.push_back(ev_acquire(clock, 16, 1e-4));
        clock += 16.0 * 1e-4;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "domain_rest_constant";
        c.source =
            "domain a spins 2 field 0 0 5e5 rad/s k -50 rad/s\n"
            "delay 1e-3 s\n"
            "acquire n 16 dt 1e-5 s\n";
        SequenceProgram& p = c.expected;
        DomainDecl d;
        d.name = "a";
        d.spins = 2;
        d.omega = {0.0, 0.0, 5e5};
        d.field_tesla = {-0.0 / gamma_proton, -0.0 / gamma_proton, -5e5 / gamma_proton};
        d.k_rest = -50.0;
        d.k_set = true;
        p.domains = {d};
        double clock = 0.0;
        p.events.push_back(ev_delay(clock, 1e-3));
        clock += 1e-3;
        p.events.push_back(ev_acquire(clock, 16, 1e-5));
        clock += 16.0 * 1e-5;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "scoped_pulse";
        c.source =
            "domain a spins 1 field 0 0 6e5 rad/s\n"
            "domain b spins 1 field 0 0 4e5 rad/s\n"
            "pulse rf amp 100 rad/s carrier resonant dur 1e-4 s phase 0.5 domain b\n"
            "acquire n 16 dt 1e-5 s\n";
        SequenceProgram& p = c.expected;
        DomainDecl a;
        a.name = "a";
        a.spins = 1;
        a.omega = {0.0, 0.0, 6e5};
        a.field_tesla = {-0.0 / gamma_proton, -0.0 / gamma_proton, -6e5 / gamma_proton};
        DomainDecl b = a;
        b.name = "b";
        b.omega = {0.0, 0.0, 4e5};
        b.field_tesla = {-0.0 / gamma_proton, -0.0 / gamma_proton, -4e5 / gamma_proton};
        p.domains = {a, b};
        double clock = 0.0;
        p.events.push_back(ev_pulse(clock, 1e-4, std::abs(100.0), true, 0.0, 0.5, "b"));
        clock += 1e-4;
        p.events.push_back(ev_acquire(clock, 16, 1e-5));
        clock += 16.0 * 1e-5;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "scoped_gradient";
        c.source =
            "domain a spins 1 field 0 0 5e5 rad/s position 0.02 0 0 m\n"
            "gradient z 6e-3 T/m dur 1e-3 s domain a\n"
            "acquire n 16 dt 1e-5 s\n";
        SequenceProgram& p = c.expected;
        DomainDecl d;
        d.name = "a";
        d.spins = 1;
        d.omega = {0.0, 0.0, 5e5};
        d.field_tesla = {-0.0 / gamma_proton, -0.0 / gamma_proton, -5e5 / gamma_proton};
        d.position_m = {0.02, 0.0, 0.0};
        p.domains = {d};
        double clock = 0.0;
        p.events.push_back(ev_gradient(clock, 1e-3, 2, 6e-3, "a"));
        clock += 1e-3;
        p.events.push_back(ev_acquire(clock, 16, 1e-5));
        clock += 16.0 * 1e-5;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "negative_polarization";
        c.source =
            "ensemble n 100 polarization -0.25\n"
            "acquire n 8 dt 1e-6 s\n";
        SequenceProgram& p = c.expected;
        p.ensemble.n = 100.0;
        p.ensemble.mode = EnsembleDecl::PolMode::value;
        p.ensemble.polarization = -0.25;
        p.ensemble_set = true;
        double clock = 0.0;
        p.events.push_back(ev_acquire(clock, 8, 1e-6));
        clock += 8.0 * 1e-6;
        p.duration = clock;
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "kitchen_sink";
        c.source =
            "set gamma -2.0e8\n"
            "field b0 -3.0 T dur 1e-4 s\n"
            "rest k 1e-6 rad/s\n"
            "domain d1 spins 3 field 1 2 3 Hz position 0 0.01 -0.02 m k 2e-6 rad/s\n"
            "ensemble n 500 polarization 0.5 seed 9 mc 250\n"
            "pulse rf amp 50 rad/s carrier 3e5 rad/s dur 2e-4 s phase -0.25\n"
            "delay 5e-4 s\n"
            "gradient y -2e-3 T/m dur 1e-4 s\n"
            "acquire n 32 dt 1e-5 s\n";
        SequenceProgram& p = c.expected;
        p.gamma = -2.0e8;
        p.gamma_set = true;
        p.b0_tesla = -3.0;
        p.b0_omega = -(-2.0e8) * -3.0;
        p.field_set = true;
        p.rest_k = 1e-6;
        p.rest_set = true;
        DomainDecl d;
        d.name = "d1";
        d.spins = 3;
        d.omega = {2.0 * pi * 1.0, 2.0 * pi * 2.0, 2.0 * pi * 3.0};
        d.field_tesla = {-(2.0 * pi * 1.0) / -2.0e8, -(2.0 * pi * 2.0) / -2.0e8,
                         -(2.0 * pi * 3.0) / -2.0e8};
        d.position_m = {0.0, 0.01, -0.02};
        d.k_rest = 2e-6;
        d.k_set = true;
        p.domains = {d};
        p.ensemble.n = 500.0;
        p.ensemble.mode = EnsembleDecl::PolMode::value;
        p.ensemble.polarization = 0.5;
        p.ensemble.seed = 9;
        p.ensemble.seed_set = true;
        p.ensemble.mc_draws = 250;
        p.ensemble_set = true;
        double clock = 0.0;
        p.events.push_back(ev_hold(clock, 1e-4));
        clock += 1e-4;
        p.events.push_back(ev_pulse(clock, 2e-4, std::abs(50.0), false, 3e5, -0.25));
        clock += 2e-4;
        p.events.push_back(ev_delay(clock, 5e-4));
        clock += 5e-4;
        p.events.push_back(ev_gradient(clock, 1e-4, 1, -2e-3));
        clock += 1e-4;
        p.events.push_back(ev_acquire(clock, 32, 1e-5));
        clock += 32.0 * 1e-5;
        p.duration = clock;
        cases.push_back(std::move(c));
    }

    // invalid sources; columns are pinned against the text above each case
    {
        GoldenCase c;
        c.name = "unknown_statement";
        c.source = "boost power 9000\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 1, "syntax"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "unknown_unit";
        c.source = "field b0 7.0 G\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 14, "unknown-unit"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "duplicate_acquire";
        c.source =
            "acquire n 8 dt 1e-6 s\n"
            "acquire n 8 dt 1e-6 s\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 2, 1, "duplicate-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "undeclared_domain";
        c.source =
            "pulse rf amp 10 rad/s carrier resonant dur 1e-4 s phase 0 domain ghost\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 66, "undeclared-domain"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "missing_unit";
        c.source = "delay 5\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 8, "syntax"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "bad_number";
        c.source = "delay abc s\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 7, "syntax"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "negative_duration";
        c.source = "delay -1 s\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 7, "syntax"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    {
        GoldenCase c;
        c.name = "bad_axis";
        c.source = "gradient q 1 T/m dur 1 s\n";
        c.expect_ok = false;
        c.expected_diags = {diag(Severity::error, 1, 10, "syntax"),
                            diag(Severity::warning, 2, 1, "no-acquire")};
        cases.push_back(std::move(c));
    }
    return cases;
}

/// Ensure one corpus case parses to its pinned result. Returns an empty
/// string on success, else a description of the first mismatch.
[[nodiscard]] inline std::string check_golden_case(const GoldenCase& c) {
    const ParseResult r = parse_sequence(c.source);
    if (r.diagnostics.size() != c.expected_diags.size())
        return c.name + ": expected " + std::to_string(c.expected_diags.size()) +
               " diagnostics, got " + std::to_string(r.diagnostics.size());
    for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
        const Diagnostic& got = r.diagnostics[i];
        const Diagnostic& want = c.expected_diags[i];
        if (got.severity != want.severity || got.line != want.line || got.col != want.col ||
            got.code != want.code)
            return c.name + ": diagnostic " + std::to_string(i) + " is " + got.code + "@" +
                   std::to_string(got.line) + ":" + std::to_string(got.col) +
                   ", expected " + want.code + "@" + std::to_string(want.line) + ":" +
                   std::to_string(want.col);
    }
    if (r.ok() != c.expect_ok)
        return c.name + ": ok() mismatch";
    if (c.expect_ok) {
        if (!(r.program == c.expected)) return c.name + ": parsed program differs";
        const ParseResult again = parse_sequence(print_program(r.program));
        if (!again.ok()) return c.name + ": canonical print does not reparse";
        if (!(again.program == r.program)) return c.name + ": round-trip program differs";
    }
    return {};
}

[[nodiscard]] inline CriterionResult check_parser_golden(const ValidationOptions&) {
    CriterionResult r{12, "golden parser corpus and byte-stable outputs", true, ""};
    const std::vector<GoldenCase> corpus = golden_corpus();
    std::size_t passed_cases = 0;
    for (const GoldenCase& c : corpus) {
        const std::string err = check_golden_case(c);
        if (err.empty()) {
            ++passed_cases;
        } else if (r.passed) {
            r.passed = false;
            r.detail = err;
        }
    }

    // rerun determinism: same source, same seed, byte-identical CSV and JSON
    bool stable = true;
    if (r.passed) {
        const char* src =
            "set gamma 2.675e8\n"
            "field b0 5e-6 T\n"
            "ensemble n 1000 polarization 0.01 seed 11 mc 400\n"
            "delay 1e-3 s\n"
            "acquire n 48 dt 1e-4 s\n";
        const RunResult r1 = run_program(parse_sequence_or_throw(src));
        const RunResult r2 = run_program(parse_sequence_or_throw(src));
        stable = fid_to_csv(r1.fid) == fid_to_csv(r2.fid) &&
                 run_report_to_json(r1.report).dump(2) == run_report_to_json(r2.report).dump(2);
        if (!stable) {
            r.passed = false;
            r.detail = "rerun outputs differ at fixed seed";
        }
    }
    if (r.passed)
        r.detail = std::to_string(passed_cases) + " of " + std::to_string(corpus.size()) +
                   " cases, reruns byte-identical";
    return r;
}

// ---------------------------------------------------------------------------

[[nodiscard]] inline std::vector<CriterionResult> run_all_criteria(
    const ValidationOptions& o = {}) {
    std::vector<CriterionResult> out;
    out.push_back(check_oracle_equivalence(o));
    out.push_back(check_resonance_reduction(o));
    out.push_back(check_periodicity(o));
    out.push_back(check_two_resonance_spectrum());
    out.push_back(check_pulse_calibration());
    out.push_back(check_triplet_amplitudes());
    out.push_back(check_noise_signature());
    out.push_back(check_kronecker_identity(o));
    out.push_back(check_two_spin_spectrum(o));
    out.push_back(check_equilibrium_silence(o));
    out.push_back(check_phase_cancellation(o));
    out.push_back(check_parser_golden(o));
    return out;
}

[[nodiscard]] inline nlohmann::json criteria_to_json(const std::vector<CriterionResult>& rs) {
    nlohmann::json j;
    j["schema"] = report_schema;
    j["kind"] = "validation";
    bool all = true;
    nlohmann::json items = nlohmann::json::array();
    for (const CriterionResult& r : rs) {
        all = all && r.passed;
        items.push_back({{"id", r.id},
                         {"name", r.name},
                         {"passed", r.passed},
                         {"detail", r.detail}});
    }
    j["criteria"] = std::move(items);
    j["passed"] = all;
    return j;
}

}  // namespace spinor
