#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/matrix.hpp"
#include "spinor/propagator.hpp"  // parameter types only; no closed forms used

namespace spinor {

// Fixed-step RK4 reference integrator for d psi/dt = -(i/hbar) H(t) psi.
// It is deliberately independent of the closed-form builders: it consumes
// only a Hamiltonian sampler and never calls any propagator construction.

/// Time-dependent Hamiltonian sampler. `eval(t)` returns H(t) in units of
/// `hbar` (with the default hbar = 1 the entries are angular frequencies).
/// `char_freq` is the largest angular frequency present in the dynamics,
/// carrier included; the step size is chosen against it.
struct HamiltonianFn {
    std::function<ComplexMatrix(double)> eval;
    double char_freq = 0.0;  ///< rad/s
    double hbar = 1.0;
};

struct IntegrationConfig {
    int steps_per_period = 200;      ///< >= 50; steps per 2*pi/char_freq
    double dt_max = 0.0;             ///< optional hard cap on dt (0 = none)
    double max_norm_drift = tol::drift;
    bool renormalize = false;        ///< default off: drift is a quality signal
};

struct IntegrationResult {
    std::vector<std::vector<cplx>> samples;  ///< state at each requested time
    double norm_drift = 0.0;                 ///< max |norm(t) - norm(0)|
    std::size_t steps_taken = 0;
};

namespace detail {

inline void check_hermitian_sample(const ComplexMatrix& h) {
    if (h.hermitian_deviation() > tol::hermitian * std::max(1.0, h.max_abs()))
        throw NonHermitianSample("integrate_rk4: sampled Hamiltonian is not Hermitian");
}

inline void rk4_step(const HamiltonianFn& h, std::vector<cplx>& psi, double t, double dt,
                     bool check_h) {
    const cplx mi = -imag_unit / h.hbar;
    const auto deriv = [&](double tt, const std::vector<cplx>& v) {
        const ComplexMatrix ht = h.eval(tt);
        if (check_h) check_hermitian_sample(ht);
        auto r = mat_apply(ht, v);
        for (auto& z : r) z *= mi;
        return r;
    };
    const std::size_t n = psi.size();
    const auto k1 = deriv(t, psi);
    std::vector<cplx> tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + 0.5 * dt * k1[i];
    const auto k2 = deriv(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + 0.5 * dt * k2[i];
    const auto k3 = deriv(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + dt * k3[i];
    const auto k4 = deriv(t + dt, tmp);
    for (std::size_t i = 0; i < n; ++i)
        psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace detail

/// Integrate to each time in `t_grid` (ascending, starting at >= 0), sampling
/// the state there. Step size: dt = 2*pi/(steps_per_period * char_freq),
/// optionally capped by dt_max. Throws StepTooLarge when the norm drift
/// exceeds the configured budget (with renormalize off).
[[nodiscard]] inline IntegrationResult integrate_rk4(const HamiltonianFn& h,
                                                     const std::vector<cplx>& psi0,
                                                     const std::vector<double>& t_grid,
                                                     const IntegrationConfig& cfg = {}) {
    if (!h.eval) throw Error("integrate_rk4: missing Hamiltonian");
    if (t_grid.empty()) throw Error("integrate_rk4: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1]) throw Error("integrate_rk4: time grid not ascending");

    const int spp = std::max(cfg.steps_per_period, 50);
    double dt = h.char_freq > 0.0 ? 2.0 * pi / (spp * h.char_freq)
                                  : (t_grid.back() > 0.0 ? t_grid.back() / spp : 1.0);
    if (cfg.dt_max > 0.0) dt = std::min(dt, cfg.dt_max);

    const bool check_h = psi0.size() <= 64;
    const double norm0 = std::sqrt(norm2(psi0));

    IntegrationResult out;
    out.samples.reserve(t_grid.size());
    std::vector<cplx> psi = psi0;
    double t = 0.0;
    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-12));
            const double step = span / static_cast<double>(steps);
            for (std::size_t s = 0; s < steps; ++s) {
                detail::rk4_step(h, psi, t, step, check_h);
                t += step;
                if (cfg.renormalize) {
                    const double n = std::sqrt(norm2(psi));
                    if (n > 0.0)
                        for (auto& z : psi) z /= n;
                }
            }
            out.steps_taken += steps;
            t = target;  // absorb accumulated rounding in t itself
        }
        out.norm_drift = std::max(out.norm_drift, std::abs(std::sqrt(norm2(psi)) - norm0));
        out.samples.push_back(psi);
    }
    if (!cfg.renormalize && out.norm_drift > cfg.max_norm_drift)
        throw StepTooLarge("integrate_rk4: norm drift exceeded budget");
    return out;
}

/// Convenience: integrate to a single final time.
[[nodiscard]] inline IntegrationResult integrate_rk4(const HamiltonianFn& h,
                                                     const std::vector<cplx>& psi0,
                                                     double t_final,
                                                     const IntegrationConfig& cfg = {}) {
    return integrate_rk4(h, psi0, std::vector<double>{t_final}, cfg);
}

// ============================================================================
// Closed-form comparison
// ============================================================================

struct OracleReport {
    double max_entry_error = 0.0;  ///< worst per-entry |closed - integrated|
    double max_norm_drift = 0.0;   ///< integrator drift over the run
    std::size_t samples = 0;
};

/// Integrate the full operator column by column and compare entries against a
/// closed-form propagator U(t) over the grid.
[[nodiscard]] inline OracleReport compare_closed_form(
    const HamiltonianFn& h, const std::function<ComplexMatrix(double)>& closed,
    const std::vector<double>& t_grid, const IntegrationConfig& cfg = {}) {
    if (!closed) throw Error("compare_closed_form: missing closed form");
    const std::size_t dim = h.eval(t_grid.empty() ? 0.0 : t_grid.front()).dim();

    std::vector<IntegrationResult> columns;
    columns.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<cplx> e(dim, cplx{0.0, 0.0});
        e[j] = 1.0;
        columns.push_back(integrate_rk4(h, e, t_grid, cfg));
    }

    OracleReport rep;
    rep.samples = t_grid.size();
    for (std::size_t s = 0; s < t_grid.size(); ++s) {
        const ComplexMatrix u = closed(t_grid[s]);
        if (u.dim() != dim)
            throw DimensionMismatch("compare_closed_form: dimension mismatch");
        for (std::size_t j = 0; j < dim; ++j) {
            rep.max_norm_drift = std::max(rep.max_norm_drift, columns[j].norm_drift);
            for (std::size_t i = 0; i < dim; ++i)
                rep.max_entry_error = std::max(
                    rep.max_entry_error, std::abs(u(i, j) - columns[j].samples[s][i]));
        }
    }
    return rep;
}

// ============================================================================
// Hamiltonian factories for the single-spin closed forms. These restate the
// differential systems directly; they share no code with the builders.
// ============================================================================

[[nodiscard]] inline HamiltonianFn hamiltonian_static(double omega0) {
    HamiltonianFn h;
    h.char_freq = std::abs(omega0);
    h.eval = [omega0](double) {
        return ComplexMatrix{cplx{0.5 * omega0, 0}, cplx{0, 0}, cplx{0, 0},
                             cplx{-0.5 * omega0, 0}};
    };
    return h;
}

[[nodiscard]] inline HamiltonianFn hamiltonian_rf(double omega, double omega0,
                                                  double omega1) {
    HamiltonianFn h;
    h.char_freq = std::max({std::abs(omega), std::abs(omega0),
                            std::hypot(omega0 - omega, omega1)});
    h.eval = [omega, omega0, omega1](double t) {
        const cplx drive = 0.5 * omega1 * std::polar(1.0, -omega * t);
        return ComplexMatrix{cplx{0.5 * omega0, 0}, drive, std::conj(drive),
                             cplx{-0.5 * omega0, 0}};
    };
    return h;
}

[[nodiscard]] inline HamiltonianFn hamiltonian_rest(double omega0, double k) {
    HamiltonianFn h;
    h.char_freq = std::hypot(omega0, k) + std::abs(k);
    h.eval = [omega0, k](double) {
        return ComplexMatrix{cplx{0.5 * (omega0 + k), 0}, cplx{0.5 * k, 0},
                             cplx{0.5 * k, 0}, cplx{0.5 * (-omega0 + k), 0}};
    };
    return h;
}

[[nodiscard]] inline HamiltonianFn hamiltonian_general(const FieldParams& p) {
    HamiltonianFn h;
    const double w1 = std::hypot(p.omega_x + p.k_rest, p.omega_y);
    h.char_freq = std::hypot(p.omega_z, w1) + std::abs(p.k_rest);
    h.eval = [p](double) {
        const cplx w{0.5 * (p.omega_x + p.k_rest), -0.5 * p.omega_y};
        return ComplexMatrix{cplx{0.5 * (p.omega_z + p.k_rest), 0}, w, std::conj(w),
                             cplx{0.5 * (-p.omega_z + p.k_rest), 0}};
    };
    return h;
}

/// Constant Hamiltonian in energy units (J) with explicit hbar, for the
/// multi-spin matrix-exponential path.
[[nodiscard]] inline HamiltonianFn hamiltonian_constant(const ComplexMatrix& h_matrix,
                                                        double hbar) {
    HamiltonianFn h;
    h.hbar = hbar;
    h.char_freq = h_matrix.dim() * h_matrix.max_abs() / hbar;
    h.eval = [h_matrix](double) { return h_matrix; };
    return h;
}

}  // namespace spinor
