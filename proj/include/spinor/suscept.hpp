#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/propagator.hpp"
#include "spinor/rng.hpp"
#include "spinor/state.hpp"

namespace spinor {

// The complex susceptibility of a two-level state is gamma*hbar times the
// cross product of its amplitudes, chi = gamma hbar conj(x1) x2. The closed
// forms below follow the ensemble signal model, which factors a carrier
// e^{-i Omega t} out of the evolution; chi_from_state is the raw definition
// applied to any evolved state. The two agree up to that documented carrier
// factor (exactly, for real transverse coupling).

struct SusceptibilitySample {
    double t = 0.0;
    cplx chi{0.0, 0.0};
};

/// chi = gamma hbar conj(x1) x2 for an explicit state. |chi| <= gamma hbar/2.
[[nodiscard]] inline cplx chi_from_state(const SpinState& s, const PhysicalConstants& c) {
    return c.gamma * c.hbar * std::conj(s.x1) * s.x2;
}

/// Free-precession susceptibility:
/// chi0(t) = gamma hbar r1 r2 e^{-i(omega0 t + phi1 - phi2)}.
[[nodiscard]] inline cplx chi_single_static(const PolarState& p, double omega0, double t,
                                            const PhysicalConstants& c) {
    if (!(is_finite(omega0) && is_finite(t))) throw Error("chi_single_static: non-finite input");
    return c.gamma * c.hbar * p.r1 * p.r2 * std::polar(1.0, -(omega0 * t + p.phi1 - p.phi2));
}

/// The three structure terms of the general-case susceptibility.
struct DTerms {
    cplx d1{0.0, 0.0};
    cplx d2{0.0, 0.0};
    cplx d3{1.0, 0.0};
};

/// D1 = (omega1/delta)((Omega/delta) sin^2 + i cos sin),
/// D2 = (omega1/delta)^2 sin^2,
/// D3 = cos^2 - (Omega/delta)^2 sin^2 - 2i (Omega/delta) cos sin,
/// all trig of delta t/2. delta = 0 gives the limit (0, 0, 1).
[[nodiscard]] inline DTerms d_terms(const DerivedFreqs& f, double t) {
    DTerms d;
    if (f.delta == 0.0) return d;
    const double c = std::cos(0.5 * f.delta * t);
    const double s = std::sin(0.5 * f.delta * t);
    const double oq = f.big_omega / f.delta;
    const double wq = f.eff_omega1 / f.delta;
    d.d1 = wq * cplx{oq * s * s, c * s};
    d.d2 = wq * wq * s * s;
    d.d3 = cplx{c * c - oq * oq * s * s, -2.0 * oq * c * s};
    return d;
}

/// Ensemble-model susceptibility of one spin under the frequencies f:
/// chi = gamma hbar e^{-i Omega t} { D1 (r2^2 - r1^2)
///       + r1 r2 (D2 e^{i(phi1-phi2)} + D3 e^{i(phi2-phi1)}) }.
[[nodiscard]] inline std::pair<cplx, DTerms> chi_single_freqs(const PolarState& p,
                                                              const DerivedFreqs& f, double t,
                                                              const PhysicalConstants& c) {
    if (!is_finite(t)) throw Error("chi_single_freqs: non-finite time");
    const DTerms d = d_terms(f, t);
    const cplx phases = d.d2 * std::polar(1.0, p.phi1 - p.phi2) +
                        d.d3 * std::polar(1.0, p.phi2 - p.phi1);
    const cplx chi = c.gamma * c.hbar * std::polar(1.0, -f.big_omega * t) *
                     (d.d1 * (p.r2 * p.r2 - p.r1 * p.r1) + p.r1 * p.r2 * phases);
    return {chi, d};
}

/// Same, with the frequencies derived from field components
/// (Omega = omega_z, omega1 = |(omega_x + K) - i omega_y|).
[[nodiscard]] inline std::pair<cplx, DTerms> chi_single_general(const PolarState& p,
                                                                const FieldParams& f, double t,
                                                                const PhysicalConstants& c) {
    f.validate();
    return chi_single_freqs(p, DerivedFreqs::from_fields(f), t, c);
}

// ============================================================================
// Ensembles
// ============================================================================

enum class PhasePolicy { analytic_average, monte_carlo };

/// N spins sharing one set of frequencies, with a net polarization
/// (mean of r2^2 - r1^2 across the ensemble) and a phase-averaging policy.
/// The analytic policy applies the exact uniform-phase average; monte_carlo
/// draws phases from the counter-based generator.
///
/// Named constructors: from_fields derives delta exactly; rf_resonant and
/// spin_noise apply the resonant substitution Omega = delta = omega0 with
/// omega1 = sqrt(2) omega_x or the signed rest constant K respectively.
struct EnsembleSpec {
    double n = 1.0;                 ///< spin count (may be large, e.g. 1e6)
    double polarization = 0.0;      ///< mean(r2^2 - r1^2), in [-1, 1]
    DerivedFreqs freqs;
    PhasePolicy policy = PhasePolicy::analytic_average;
    std::uint64_t seed = 0;
    std::uint64_t draws = 0;

    void validate() const {
        if (!(n >= 1.0)) throw Error("EnsembleSpec: n must be >= 1");
        if (!(polarization >= -1.0 && polarization <= 1.0))
            throw Error("EnsembleSpec: polarization must lie in [-1, 1]");
        if (policy == PhasePolicy::monte_carlo && draws == 0)
            throw Error("EnsembleSpec: monte_carlo policy needs draws > 0");
    }

    [[nodiscard]] static EnsembleSpec from_fields(const FieldParams& f, double n,
                                                  double polarization) {
        EnsembleSpec e;
        e.n = n;
        e.polarization = polarization;
        e.freqs = DerivedFreqs::from_fields(f);
        return e;
    }

    /// Resonant-drive substitution: Omega = delta = omega0, omega1 = sqrt2 wx.
    [[nodiscard]] static EnsembleSpec rf_resonant(double omega0, double omega_x, double n,
                                                  double polarization) {
        if (omega0 == 0.0) throw ZeroField("EnsembleSpec: omega0 must be nonzero");
        EnsembleSpec e;
        e.n = n;
        e.polarization = polarization;
        e.freqs.big_omega = omega0;
        e.freqs.eff_omega1 = std::sqrt(2.0) * omega_x;
        e.freqs.delta = omega0;
        return e;
    }

    /// Spin-noise substitution: Omega = delta = omega0, omega1 = K (signed).
    [[nodiscard]] static EnsembleSpec spin_noise(double omega0, double k, double n,
                                                 double polarization) {
        if (omega0 == 0.0) throw ZeroField("EnsembleSpec: omega0 must be nonzero");
        EnsembleSpec e;
        e.n = n;
        e.polarization = polarization;
        e.freqs.big_omega = omega0;
        e.freqs.eff_omega1 = k;
        e.freqs.delta = omega0;
        return e;
    }
};

namespace detail {

/// Deterministic chunked mean of per-draw susceptibilities. Chunk partial
/// sums combine in fixed order, so the result is independent of how the
/// chunks might be scheduled.
[[nodiscard]] inline cplx mc_phase_mean(const EnsembleSpec& e, double t,
                                        const PhysicalConstants& c) {
    constexpr std::uint64_t chunk = 4096;
    const CounterRng rng(e.seed);
    const double r2 = std::sqrt(0.5 * (1.0 + e.polarization));
    const double r1 = std::sqrt(0.5 * (1.0 - e.polarization));
    cplx total{0.0, 0.0};
    for (std::uint64_t base = 0; base < e.draws; base += chunk) {
        const std::uint64_t end = std::min(base + chunk, e.draws);
        cplx part{0.0, 0.0};
        for (std::uint64_t j = base; j < end; ++j) {
            const PolarState p(r1, r2, rng.uniform_phase(2 * j), rng.uniform_phase(2 * j + 1));
            part += chi_single_freqs(p, e.freqs, t, c).first;
        }
        total += part;
    }
    return total / static_cast<double>(e.draws);
}

}  // namespace detail

/// Ensemble susceptibility in the signal model's normalization:
/// chi_N(t) = gamma hbar N e^{-i Omega t} D1 * (N * polarization),
/// i.e. the per-spin phase average multiplied by N^2 * polarization.
/// The analytic policy evaluates the closed average; monte_carlo averages
/// chi_single over phase draws and scales identically.
[[nodiscard]] inline cplx chi_ensemble(const EnsembleSpec& e, double t,
                                       const PhysicalConstants& c) {
    e.validate();
    if (e.policy == PhasePolicy::monte_carlo)
        return e.n * e.n * detail::mc_phase_mean(e, t, c);
    const DTerms d = d_terms(e.freqs, t);
    return c.gamma * c.hbar * e.n * std::polar(1.0, -e.freqs.big_omega * t) * d.d1 *
           (e.n * e.polarization);
}

/// Per-spin mean susceptibility: chi_ensemble divided by N^2.
[[nodiscard]] inline cplx chi_ensemble_per_spin(const EnsembleSpec& e, double t,
                                                const PhysicalConstants& c) {
    return chi_ensemble(e, t, c) / (e.n * e.n);
}

/// Resonant-drive two-line closed form:
/// chi(t) = gamma hbar (sqrt2 omega_x / 2 omega0)
///          (e^{-i omega0 t} - e^{-i 2 omega0 t}) * N * (N * polarization).
/// Exactly two complex exponentials at omega0 and 2 omega0 with
/// opposite-sign equal coefficients.
[[nodiscard]] inline cplx chi_rf_closed_form(double n, double polarization, double omega_x,
                                             double omega0, double t,
                                             const PhysicalConstants& c) {
    if (omega0 == 0.0) throw ZeroField("chi_rf_closed_form: omega0 must be nonzero");
    if (!(is_finite(omega_x) && is_finite(t)))
        throw Error("chi_rf_closed_form: non-finite input");
    const cplx lines = std::polar(1.0, -omega0 * t) - std::polar(1.0, -2.0 * omega0 * t);
    return c.gamma * c.hbar * (std::sqrt(2.0) * omega_x / (2.0 * omega0)) * lines * n *
           (n * polarization);
}

/// Spin-noise two-line closed form: the drive amplitude is replaced by the
/// signed rest constant K, so a negative K inverts the signal against the
/// resonant-drive reference:
/// chi(t) = gamma hbar (K / 2 omega0)(e^{-i omega0 t} - e^{-i 2 omega0 t})
///          * N * (N * polarization).
[[nodiscard]] inline cplx chi_noise_closed_form(double n, double polarization, double k,
                                                double omega0, double t,
                                                const PhysicalConstants& c) {
    if (omega0 == 0.0) throw ZeroField("chi_noise_closed_form: omega0 must be nonzero");
    if (!(is_finite(k) && is_finite(t)))
        throw Error("chi_noise_closed_form: non-finite input");
    const cplx lines = std::polar(1.0, -omega0 * t) - std::polar(1.0, -2.0 * omega0 * t);
    return c.gamma * c.hbar * (k / (2.0 * omega0)) * lines * n * (n * polarization);
}

/// Thermal-equilibrium polarization tanh(hbar |omega0| / (2 k_B T)).
[[nodiscard]] inline double boltzmann_polarization(double omega0, double temperature_k,
                                                   const PhysicalConstants& c) {
    if (!(temperature_k > 0.0))
        throw NonPositiveTemperature("boltzmann_polarization: temperature must be > 0");
    if (!is_finite(omega0)) throw Error("boltzmann_polarization: non-finite omega0");
    return std::tanh(c.hbar * std::abs(omega0) / (2.0 * k_boltzmann_si * temperature_k));
}

// ============================================================================
// Phase-cancellation statistics
// ============================================================================

struct PhaseAverageStats {
    cplx mean{0.0, 0.0};   ///< mean of the phase-dependent term
    double sigma = 0.0;    ///< sample standard deviation of its modulus parts
    std::uint64_t draws = 0;
};

/// Monte-Carlo statistics of the phase-dependent susceptibility term
/// r1 r2 (D2 e^{i(phi1-phi2)} + D3 e^{i(phi2-phi1)}) under uniform phases.
/// Its expectation is 0; the mean magnitude shrinks as O(1/sqrt(M)).
[[nodiscard]] inline PhaseAverageStats mc_phase_cancellation(const DerivedFreqs& f, double r1,
                                                             double r2, double t,
                                                             std::uint64_t draws,
                                                             std::uint64_t seed) {
    if (draws == 0) throw Error("mc_phase_cancellation: draws must be > 0");
    const CounterRng rng(seed);
    const DTerms d = d_terms(f, t);
    cplx sum{0.0, 0.0};
    double sum_sq = 0.0;
    for (std::uint64_t j = 0; j < draws; ++j) {
        const double p1 = rng.uniform_phase(2 * j);
        const double p2 = rng.uniform_phase(2 * j + 1);
        const cplx v = r1 * r2 *
                       (d.d2 * std::polar(1.0, p1 - p2) + d.d3 * std::polar(1.0, p2 - p1));
        sum += v;
        sum_sq += std::norm(v);
    }
    PhaseAverageStats stats;
    stats.draws = draws;
    stats.mean = sum / static_cast<double>(draws);
    const double mean_sq = sum_sq / static_cast<double>(draws);
    stats.sigma = std::sqrt(std::max(0.0, mean_sq - std::norm(stats.mean)));
    return stats;
}

}  // namespace spinor
