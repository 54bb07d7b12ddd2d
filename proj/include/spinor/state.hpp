#pragma once

#include <array>
#include <cmath>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"

namespace spinor {

/// Wrap an angle into (-pi, pi].
[[nodiscard]] inline double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

/// Polar description of a two-level state: amplitudes r1 (lower level) and
/// r2 (upper level) with phases phi1, phi2. r1^2 + r2^2 = 1.
struct PolarState {
    double r1 = 1.0;
    double r2 = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;

    PolarState() = default;

    /// Validates the norm (rejects deviation beyond 1e-9), renormalizes the
    /// residual rounding error, and wraps phases into (-pi, pi].
    PolarState(double r1_, double r2_, double phi1_, double phi2_) {
        if (!(is_finite(r1_) && is_finite(r2_) && is_finite(phi1_) && is_finite(phi2_)))
            throw NormViolation("PolarState: non-finite component");
        if (r1_ < 0.0 || r2_ < 0.0)
            throw NormViolation("PolarState: amplitudes must be non-negative");
        const double n2 = r1_ * r1_ + r2_ * r2_;
        if (std::abs(n2 - 1.0) > 1e-9)
            throw NormViolation("PolarState: r1^2 + r2^2 deviates from 1 beyond 1e-9");
        const double scale = 1.0 / std::sqrt(n2);
        r1 = r1_ * scale;
        r2 = r2_ * scale;
        phi1 = wrap_phase(phi1_);
        phi2 = wrap_phase(phi2_);
    }
};

/// Two-level state as complex amplitudes. Component 0 is the upper-level
/// amplitude x2, component 1 the lower-level amplitude x1; the column vector
/// reads (x2, x1) top to bottom.
struct SpinState {
    cplx x2{0.0, 0.0};
    cplx x1{1.0, 0.0};

    [[nodiscard]] double norm2() const { return std::norm(x1) + std::norm(x2); }
    [[nodiscard]] double norm() const { return std::sqrt(norm2()); }

    [[nodiscard]] std::array<cplx, 2> column() const { return {x2, x1}; }

    [[nodiscard]] static SpinState from_column(const std::array<cplx, 2>& v) {
        return SpinState{v[0], v[1]};
    }

    /// Upper-level population |x2|^2.
    [[nodiscard]] double population_upper() const { return std::norm(x2); }
    /// Lower-level population |x1|^2.
    [[nodiscard]] double population_lower() const { return std::norm(x1); }
};

/// Build the complex state x2 = r2 e^{i phi2}, x1 = r1 e^{i phi1}.
[[nodiscard]] inline SpinState make_state(const PolarState& p) {
    SpinState s;
    s.x2 = std::polar(p.r2, p.phi2);
    s.x1 = std::polar(p.r1, p.phi1);
    return s;
}

/// Recover the polar description of a state (phases of zero-amplitude
/// components are reported as 0).
[[nodiscard]] inline PolarState to_polar(const SpinState& s) {
    const double n = s.norm();
    if (std::abs(n - 1.0) > 1e-9)
        throw NormViolation("to_polar: state norm deviates from 1 beyond 1e-9");
    PolarState p;
    p.r1 = std::abs(s.x1);
    p.r2 = std::abs(s.x2);
    p.phi1 = p.r1 > 0.0 ? std::arg(s.x1) : 0.0;
    p.phi2 = p.r2 > 0.0 ? std::arg(s.x2) : 0.0;
    const double scale = 1.0 / n;
    p.r1 *= scale;
    p.r2 *= scale;
    return p;
}

/// Ground state (1, 0) in polar terms: all amplitude in the lower level.
[[nodiscard]] inline SpinState ground_state() { return SpinState{cplx{0.0, 0.0}, cplx{1.0, 0.0}}; }

/// Upper-level basis state.
[[nodiscard]] inline SpinState excited_state() { return SpinState{cplx{1.0, 0.0}, cplx{0.0, 0.0}}; }

}  // namespace spinor
