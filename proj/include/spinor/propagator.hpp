#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/matrix.hpp"
#include "spinor/state.hpp"

namespace spinor {

// ============================================================================
// Parameter carriers
// ============================================================================

/// Angular-frequency description of the applied fields, all in rad/s.
/// omega_z plays the role of the static longitudinal rate, omega_rf the
/// drive carrier, omega_1 the drive amplitude (>= 0; its phase is carried by
/// the rotation axis), k_rest the rest-interaction constant (signed).
struct FieldParams {
    double omega_x = 0.0;
    double omega_y = 0.0;
    double omega_z = 0.0;
    double omega_rf = 0.0;
    double omega_1 = 0.0;
    double k_rest = 0.0;

    void validate() const {
        for (double v : {omega_x, omega_y, omega_z, omega_rf, omega_1, k_rest})
            if (!is_finite(v)) throw Error("FieldParams: non-finite component");
        if (omega_1 < 0.0)
            throw Error("FieldParams: omega_1 must be non-negative");
    }
};

/// Detuning Omega, effective drive amplitude omega1, and precession rate
/// delta = sqrt(Omega^2 + omega1^2). Omega is an explicit input: the named
/// constructors cover the two readings found in practice (offset from a
/// drive carrier, or longitudinal rate reduced by the rest constant).
struct DerivedFreqs {
    double big_omega = 0.0;
    double eff_omega1 = 0.0;
    double delta = 0.0;

    /// Rotating-drive reading: Omega = omega0 - omega_rf.
    [[nodiscard]] static DerivedFreqs from_drive_offset(double omega0, double omega_rf,
                                                        double omega1) {
        return assemble(omega0 - omega_rf, omega1);
    }

    /// Static-field reading: Omega is the longitudinal rate itself.
    [[nodiscard]] static DerivedFreqs from_longitudinal(double omega_z, double omega1) {
        return assemble(omega_z, omega1);
    }

    /// Rest-shifted reading: Omega = omega0 - k.
    [[nodiscard]] static DerivedFreqs from_larmor_minus_k(double omega0, double k,
                                                          double omega1) {
        return assemble(omega0 - k, omega1);
    }

    /// General-case reading from full field components:
    /// Omega = omega_z, omega1 = |(omega_x + k) - i*omega_y|.
    [[nodiscard]] static DerivedFreqs from_fields(const FieldParams& p) {
        const double re = p.omega_x + p.k_rest;
        return assemble(p.omega_z, std::hypot(re, p.omega_y));
    }

private:
    [[nodiscard]] static DerivedFreqs assemble(double om, double w1) {
        DerivedFreqs d;
        d.big_omega = om;
        d.eff_omega1 = w1;
        d.delta = std::hypot(om, w1);
        return d;
    }
};

/// Factored single-spin evolution operator: a diagonal evolution factor
/// e_part, a unit-determinant rotation factor r_part, and their product.
struct EvolutionPair {
    ComplexMatrix e_part;
    ComplexMatrix r_part;

    [[nodiscard]] ComplexMatrix product() const { return mat_mul(e_part, r_part); }

    [[nodiscard]] SpinState apply(const SpinState& s) const {
        return mat_apply(e_part, mat_apply(r_part, s));
    }
};

/// Solution coefficients of the driven two-level system, grouped as
/// x2(t) = e^{-i omega t/2} (C1 e^{+i delta t/2} + C2 e^{-i delta t/2}),
/// x1(t) = e^{+i omega t/2} (C3 e^{+i delta t/2} + C4 e^{-i delta t/2}).
struct RfCoefficients {
    cplx c1, c2, c3, c4;
};

// ============================================================================
// Builders
// ============================================================================

/// Free precession under a longitudinal field:
/// U = diag(e^{-i omega0 t/2}, e^{+i omega0 t/2}).
/// Period in t is 4*pi/omega0; at t = 2*pi/omega0 the operator is -I.
[[nodiscard]] inline ComplexMatrix static_propagator(double omega0, double t) {
    if (!(is_finite(omega0) && is_finite(t)))
        throw Error("static_propagator: non-finite input");
    const double half = 0.5 * omega0 * t;
    return ComplexMatrix{std::polar(1.0, -half), cplx{0, 0}, cplx{0, 0},
                         std::polar(1.0, half)};
}

namespace detail {

/// Rotation factor cos(delta t/2) I - i sin(delta t/2) * (n . sigma) for a
/// possibly complex transverse coupling w (its modulus is the drive
/// amplitude, its phase the transverse-plane orientation). delta = 0 yields
/// the identity (the continuous limit).
[[nodiscard]] inline ComplexMatrix rotation_factor(double big_omega, cplx w, double delta,
                                                   double t) {
    if (delta == 0.0) return ComplexMatrix::identity(2);
    const double c = std::cos(0.5 * delta * t);
    const double s = std::sin(0.5 * delta * t);
    const cplx a{c, -(big_omega / delta) * s};
    const cplx b = cplx{0.0, -s / delta} * w;
    const cplx bt = cplx{0.0, -s / delta} * std::conj(w);
    return ComplexMatrix{a, b, bt, std::conj(a)};
}

}  // namespace detail

/// Solution coefficients C1..C4 for a rotating drive, from the initial polar
/// state. Requires delta > 0 (at Omega = omega1 = 0 use static_propagator).
///
/// Closure identities: C1 + C2 = r2 e^{i phi2}, C3 + C4 = r1 e^{i phi1},
/// (delta + Omega) C1 + omega1 C3 = 0, (delta - Omega) C2 - omega1 C4 = 0.
[[nodiscard]] inline RfCoefficients rf_coefficients(const PolarState& p, double omega,
                                                    double omega0, double omega1) {
    if (!(is_finite(omega) && is_finite(omega0) && is_finite(omega1)))
        throw Error("rf_coefficients: non-finite input");
    if (omega1 < 0.0) throw Error("rf_coefficients: omega1 must be non-negative");
    const double big_omega = omega0 - omega;
    const double delta = std::hypot(big_omega, omega1);
    if (delta == 0.0)
        throw DegenerateDelta("rf_coefficients: delta = 0 (Omega and omega1 both zero)");
    const cplx a2 = std::polar(p.r2, p.phi2);  // upper-level initial amplitude
    const cplx a1 = std::polar(p.r1, p.phi1);  // lower-level initial amplitude
    const double oq = big_omega / delta;
    const double wq = omega1 / delta;
    RfCoefficients c;
    c.c1 = 0.5 * ((1.0 - oq) * a2 - wq * a1);
    c.c2 = 0.5 * ((1.0 + oq) * a2 + wq * a1);
    c.c3 = 0.5 * (-wq * a2 + (1.0 + oq) * a1);
    c.c4 = 0.5 * (wq * a2 + (1.0 - oq) * a1);
    return c;
}

/// Rotating-drive evolution operator. The drive rotates at carrier omega with
/// amplitude omega1 about a longitudinal rate omega0; Omega = omega0 - omega,
/// delta = sqrt(Omega^2 + omega1^2).
///
///   e_part = diag(e^{-i omega t/2}, e^{+i omega t/2})
///   r_part = [[cos - i(Omega/delta) sin, -i(omega1/delta) sin],
///             [-i(omega1/delta) sin, cos + i(Omega/delta) sin]]
///
/// with cos/sin of delta t/2. On resonance (omega = omega0) r_part is a pure
/// x-rotation by omega1 t; at omega1 = 0 the product reduces to
/// static_propagator(omega0, t).
[[nodiscard]] inline EvolutionPair rf_propagator(double omega, double omega0, double omega1,
                                                 double t) {
    if (!(is_finite(omega) && is_finite(omega0) && is_finite(omega1) && is_finite(t)))
        throw Error("rf_propagator: non-finite input");
    if (omega1 < 0.0) throw Error("rf_propagator: omega1 must be non-negative");
    const double big_omega = omega0 - omega;
    const double delta = std::hypot(big_omega, omega1);
    const double half = 0.5 * omega * t;
    EvolutionPair u;
    u.e_part = ComplexMatrix{std::polar(1.0, -half), cplx{0, 0}, cplx{0, 0},
                             std::polar(1.0, half)};
    u.r_part = detail::rotation_factor(big_omega, cplx{omega1, 0.0}, delta, t);
    return u;
}

/// Axis-angle rotation operator
/// R = cos(theta/2) I - i sin(theta/2) (ux sx + uy sy + uz sz).
/// The axis must be unit length within 1e-9.
[[nodiscard]] inline ComplexMatrix rotation_matrix(const std::array<double, 3>& u,
                                                   double theta) {
    if (!(is_finite(u[0]) && is_finite(u[1]) && is_finite(u[2]) && is_finite(theta)))
        throw Error("rotation_matrix: non-finite input");
    const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (std::abs(n - 1.0) > 1e-9)
        throw NonUnitAxis("rotation_matrix: axis norm deviates from 1 beyond 1e-9");
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return ComplexMatrix{cplx{c, -u[2] * s}, cplx{-u[1] * s, -u[0] * s},
                         cplx{u[1] * s, -u[0] * s}, cplx{c, u[2] * s}};
}

/// Evolution under a longitudinal rate omega0 plus the rest interaction K,
/// with delta = sqrt(omega0^2 + K^2):
///
///   e_part = e^{-i K t/2} I
///   r_part = [[cos - i(omega0/delta) sin, -i(K/delta) sin],
///             [-i(K/delta) sin, cos + i(omega0/delta) sin]]
///
/// K = 0 reduces the product to static_propagator(omega0, t).
[[nodiscard]] inline EvolutionPair rest_propagator(double omega0, double k, double t) {
    if (!(is_finite(omega0) && is_finite(k) && is_finite(t)))
        throw Error("rest_propagator: non-finite input");
    const double delta = std::hypot(omega0, k);
    const cplx phase = std::polar(1.0, -0.5 * k * t);
    EvolutionPair u;
    u.e_part = ComplexMatrix{phase, cplx{0, 0}, cplx{0, 0}, phase};
    u.r_part = detail::rotation_factor(omega0, cplx{k, 0.0}, delta, t);
    return u;
}

/// Evolution under arbitrary constant field components plus the rest
/// interaction. With Omega = omega_z, transverse coupling
/// W = (omega_x + K) - i omega_y, omega1 = |W| and
/// delta = sqrt(Omega^2 + omega1^2):
///
///   e_part = e^{-i K t/2} I
///   r_part = [[cos - i(Omega/delta) sin, -i (W/delta) sin],
///             [-i (conj W/delta) sin, cos + i(Omega/delta) sin]]
///
/// For omega_y = 0 and omega_x + K >= 0 the coupling is real and r_part takes
/// the familiar symmetric off-diagonal form. Reduction chain:
/// omega_x = omega_y = 0 gives rest_propagator; additionally K = 0 gives
/// static_propagator(omega_z, t).
[[nodiscard]] inline EvolutionPair general_propagator(const FieldParams& p, double t) {
    p.validate();
    if (!is_finite(t)) throw Error("general_propagator: non-finite time");
    const cplx w{p.omega_x + p.k_rest, -p.omega_y};
    const double omega1 = std::abs(w);
    const double delta = std::hypot(p.omega_z, omega1);
    const cplx phase = std::polar(1.0, -0.5 * p.k_rest * t);
    EvolutionPair u;
    u.e_part = ComplexMatrix{phase, cplx{0, 0}, cplx{0, 0}, phase};
    u.r_part = detail::rotation_factor(p.omega_z, w, delta, t);
    return u;
}

// ============================================================================
// Composition
// ============================================================================

/// One finished evolution segment: its operator and its duration in seconds.
struct Segment {
    ComplexMatrix op;
    double duration = 0.0;
};

/// Right-to-left product of segment operators: the first listed segment acts
/// first, so the result is U_n * ... * U_2 * U_1.
[[nodiscard]] inline ComplexMatrix compose_segments(const std::vector<Segment>& segments) {
    if (segments.empty()) throw Error("compose_segments: empty segment list");
    ComplexMatrix u = segments.front().op;
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].op.dim() != u.dim())
            throw DimensionMismatch("compose_segments: segment dimension mismatch");
        u = mat_mul(segments[i].op, u);
    }
    return u;
}

}  // namespace spinor
