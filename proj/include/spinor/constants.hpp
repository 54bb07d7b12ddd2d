#pragma once

#include <cmath>
#include <complex>

namespace spinor {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx imag_unit{0.0, 1.0};

// Centralized comparison tolerances. Every unitarity, norm, and oracle
// comparison in the library and its tests goes through these values.
namespace tol {
inline constexpr double norm = 1e-10;       ///< state-vector norm deviation
inline constexpr double unitary = 1e-10;    ///< unitarity / determinant deviation
inline constexpr double oracle = 1e-8;      ///< closed form vs integrator, per entry
inline constexpr double hermitian = 1e-9;   ///< Hermiticity deviation admitted as input
inline constexpr double matrix_flag = 1e-10;///< threshold for cached hermitian/unitary flags
inline constexpr double drift = 1e-9;       ///< integrator norm drift budget
}  // namespace tol

// SI values. hbar and k_B are the 2019 exact definitions; the default
// gyromagnetic ratio is the proton value.
inline constexpr double hbar_si = 1.054571817e-34;       ///< J s
inline constexpr double k_boltzmann_si = 1.380649e-23;   ///< J/K
inline constexpr double gamma_proton = 2.6752218744e8;   ///< rad s^-1 T^-1

/// Gyromagnetic ratio and hbar used by frequency/energy conversions.
/// Sign convention throughout the library: omega0 = -gamma * B0.
struct PhysicalConstants {
    double gamma = gamma_proton;  ///< rad s^-1 T^-1
    double hbar = hbar_si;        ///< J s

    /// Larmor angular frequency for a field of B tesla: omega = -gamma*B.
    [[nodiscard]] double larmor(double b_tesla) const { return -gamma * b_tesla; }
};

[[nodiscard]] inline bool is_finite(double x) { return std::isfinite(x); }
[[nodiscard]] inline bool is_finite(const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace spinor
