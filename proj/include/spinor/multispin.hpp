#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/matrix.hpp"
#include "spinor/propagator.hpp"

namespace spinor {

enum class Axis { x, y, z };

/// One group of equivalent spins: they share a field (tesla) and a position
/// (meters, used by gradients); each spin carries its own rest constant.
struct SpinDomain {
    std::size_t n_spins = 1;
    std::array<double, 3> field_tesla{0.0, 0.0, 0.0};
    std::vector<double> k_list;            ///< one per spin; empty means all 0
    std::array<double, 3> position_m{0.0, 0.0, 0.0};

    [[nodiscard]] double k_of(std::size_t p) const {
        if (k_list.empty()) return 0.0;
        return k_list.size() == 1 ? k_list.front() : k_list.at(p);
    }
};

struct MultiSpinSystem {
    std::vector<SpinDomain> domains;
    PhysicalConstants constants;

    [[nodiscard]] std::size_t total_spins() const {
        std::size_t n = 0;
        for (const auto& d : domains) n += d.n_spins;
        return n;
    }
};

inline constexpr std::size_t max_total_spins = 12;  ///< 2^12 = 4096 amplitudes

inline void check_capacity(std::size_t n_spins) {
    if (n_spins == 0) throw DimensionMismatch("multispin: need at least one spin");
    if (n_spins > max_total_spins)
        throw CapacityExceeded("multispin: more than 12 spins exceeds the 4096 cap");
}

// ============================================================================
// Kronecker structure
// ============================================================================

/// Kronecker sum A (+) B = A x I_n + I_m x B (first factor slow). Exponentials
/// factorize: exp(A (+) B) = exp(A) x exp(B).
[[nodiscard]] inline ComplexMatrix kron_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
    return tensor_product(a, ComplexMatrix::identity(b.dim())) +
           tensor_product(ComplexMatrix::identity(a.dim()), b);
}

/// Spin-coupling matrix for one spin with rest constant kp; kp = 0 recovers
/// the Pauli matrix of the chosen axis. All three are Hermitian for real kp.
[[nodiscard]] inline ComplexMatrix k_sigma_matrix(Axis axis, double kp) {
    if (!is_finite(kp)) throw Error("k_sigma_matrix: non-finite k");
    switch (axis) {
        case Axis::x:
            return ComplexMatrix{cplx{kp, 0}, cplx{kp + 1.0, 0}, cplx{kp + 1.0, 0},
                                 cplx{kp, 0}};
        case Axis::y:
            return ComplexMatrix{cplx{kp, 0}, cplx{kp, -1.0}, cplx{kp, 1.0}, cplx{kp, 0}};
        case Axis::z:
            return ComplexMatrix{cplx{kp + 1.0, 0}, cplx{kp, 0}, cplx{kp, 0},
                                 cplx{kp - 1.0, 0}};
    }
    throw Error("k_sigma_matrix: bad axis");
}

namespace detail {

/// Kronecker-sum fold of per-spin 2x2 matrices, first spin slowest.
[[nodiscard]] inline ComplexMatrix kron_sum_fold(const std::vector<ComplexMatrix>& terms) {
    check_capacity(terms.size());
    ComplexMatrix acc = terms.front();
    for (std::size_t p = 1; p < terms.size(); ++p) acc = kron_sum(acc, terms[p]);
    return acc;
}

}  // namespace detail

/// Hamiltonian of n equivalent spins in one homogeneous field (tesla):
/// H = -(gamma hbar/2) [ ((+)_p sigma_p^x) Bx + ((+)_p sigma_p^y) By
///                      + ((+)_p sigma_p^z) Bz ],
/// where sigma_p^a = k_sigma_matrix(a, K_p). Entries are energies in J.
[[nodiscard]] inline ComplexMatrix hamiltonian_homogeneous(const SpinDomain& d,
                                                           const PhysicalConstants& c) {
    check_capacity(d.n_spins);
    const double pref = -0.5 * c.gamma * c.hbar;
    const auto fold_axis = [&](Axis ax) {
        std::vector<ComplexMatrix> terms;
        terms.reserve(d.n_spins);
        for (std::size_t p = 0; p < d.n_spins; ++p)
            terms.push_back(k_sigma_matrix(ax, d.k_of(p)));
        return detail::kron_sum_fold(terms);
    };
    const std::size_t dim = std::size_t{1} << d.n_spins;
    ComplexMatrix h(dim);
    if (d.field_tesla[0] != 0.0) h = h + fold_axis(Axis::x) * cplx{pref * d.field_tesla[0], 0};
    if (d.field_tesla[1] != 0.0) h = h + fold_axis(Axis::y) * cplx{pref * d.field_tesla[1], 0};
    if (d.field_tesla[2] != 0.0) h = h + fold_axis(Axis::z) * cplx{pref * d.field_tesla[2], 0};
    return h;
}

/// Hamiltonian of n spins seeing distinct fields (tesla), rest constants off.
/// Kronecker-sum fold of the per-spin Zeeman terms
/// h_i = -(gamma hbar/2) [[Bz, Bx - i By], [Bx + i By, -Bz]].
/// For fields (0,0,B_A) and (0,0,B_B) the result is diagonal with entries
/// -(gamma hbar/2)(B_A+B_B, B_A-B_B, B_B-B_A, -B_A-B_B).
[[nodiscard]] inline ComplexMatrix hamiltonian_distinct_fields(
    const std::vector<std::array<double, 3>>& fields, const PhysicalConstants& c) {
    check_capacity(fields.size());
    const double pref = -0.5 * c.gamma * c.hbar;
    std::vector<ComplexMatrix> terms;
    terms.reserve(fields.size());
    for (const auto& b : fields) {
        const cplx off{b[0], -b[1]};
        terms.push_back(ComplexMatrix{cplx{b[2], 0}, off, std::conj(off), cplx{-b[2], 0}} *
                        cplx{pref, 0});
    }
    return detail::kron_sum_fold(terms);
}

// ============================================================================
// Spectral decomposition and evolution
// ============================================================================

/// Real eigenvalues (descending) with orthonormal eigenvectors stored as
/// matrix columns. Each column's first non-negligible component is made
/// real-positive; degenerate groups are ordered lexicographically by the
/// fixed components for reproducibility.
struct EnergySpectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    EnergySpectrum() : eigenvectors(2) {}
};

/// Hermitian eigendecomposition. Rejects inputs whose Hermiticity deviation
/// exceeds tol::hermitian relative to the largest entry.
[[nodiscard]] inline EnergySpectrum eigen_spectrum(const ComplexMatrix& h) {
    const double scale = std::max(1e-300, h.max_abs());
    if (h.hermitian_deviation() > tol::hermitian * std::max(1.0, scale))
        throw NotHermitian("eigen_spectrum: matrix is not Hermitian");

    const auto n = static_cast<Eigen::Index>(h.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h(i, j);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw Error("eigen_spectrum: eigendecomposition failed");

    struct Column {
        double value;
        std::vector<cplx> vec;
    };
    std::vector<Column> cols(h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j) {
        cols[j].value = solver.eigenvalues()(static_cast<Eigen::Index>(j));
        cols[j].vec.resize(h.dim());
        for (std::size_t i = 0; i < h.dim(); ++i)
            cols[j].vec[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                                   static_cast<Eigen::Index>(j));
        // phase fixing: first non-negligible component becomes real-positive
        for (std::size_t i = 0; i < h.dim(); ++i) {
            const double mag = std::abs(cols[j].vec[i]);
            if (mag > 1e-12) {
                const cplx rot = std::conj(cols[j].vec[i]) / mag;
                for (auto& z : cols[j].vec) z *= rot;
                break;
            }
        }
    }

    // relative to the matrix scale: hbar-sized energies must still sort
    const double tie = 1e-12 * scale;
    std::sort(cols.begin(), cols.end(), [tie](const Column& a, const Column& b) {
        if (std::abs(a.value - b.value) > tie) return a.value > b.value;
        for (std::size_t i = 0; i < a.vec.size(); ++i) {
            if (std::abs(a.vec[i].real() - b.vec[i].real()) > 1e-12)
                return a.vec[i].real() > b.vec[i].real();
            if (std::abs(a.vec[i].imag() - b.vec[i].imag()) > 1e-12)
                return a.vec[i].imag() > b.vec[i].imag();
        }
        return false;
    });

    EnergySpectrum spec;
    spec.eigenvalues.reserve(h.dim());
    spec.eigenvectors = ComplexMatrix(h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j) {
        spec.eigenvalues.push_back(cols[j].value);
        for (std::size_t i = 0; i < h.dim(); ++i) spec.eigenvectors(i, j) = cols[j].vec[i];
    }
    return spec;
}

namespace detail {

[[nodiscard]] inline bool exactly_diagonal(const ComplexMatrix& h) {
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j)
            if (i != j && h(i, j) != cplx{0.0, 0.0}) return false;
    return true;
}

}  // namespace detail

/// psi(t) = V diag(e^{-i E_k t / hbar}) V^dagger psi0 for Hermitian H (J).
/// An exactly diagonal H takes the direct phase path, so basis populations
/// are preserved bit for bit.
[[nodiscard]] inline std::vector<cplx> evolve_matrix_exp(const ComplexMatrix& h,
                                                         const std::vector<cplx>& psi0,
                                                         double t, double hbar) {
    if (h.dim() != psi0.size())
        throw DimensionMismatch("evolve_matrix_exp: dimension mismatch");
    if (!(is_finite(t)) || hbar <= 0.0) throw Error("evolve_matrix_exp: bad t or hbar");

    if (detail::exactly_diagonal(h)) {
        std::vector<cplx> out(psi0.size());
        for (std::size_t i = 0; i < psi0.size(); ++i) {
            const double e = h(i, i).real();
            out[i] = psi0[i] == cplx{0.0, 0.0} ? cplx{0.0, 0.0}
                                               : std::polar(1.0, -e * t / hbar) * psi0[i];
        }
        return out;
    }

    const EnergySpectrum spec = eigen_spectrum(h);
    const std::size_t n = h.dim();
    std::vector<cplx> proj(n, cplx{0.0, 0.0});  // V^dagger psi0
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            proj[k] += std::conj(spec.eigenvectors(i, k)) * psi0[i];
    for (std::size_t k = 0; k < n; ++k)
        proj[k] *= std::polar(1.0, -spec.eigenvalues[k] * t / hbar);
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) out[i] += spec.eigenvectors(i, k) * proj[k];
    return out;
}

/// Evolution operator exp(-i H t / hbar) as a matrix.
[[nodiscard]] inline ComplexMatrix matrix_exp_propagator(const ComplexMatrix& h, double t,
                                                         double hbar) {
    const std::size_t n = h.dim();
    ComplexMatrix u(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> e(n, cplx{0.0, 0.0});
        e[j] = 1.0;
        const auto col = evolve_matrix_exp(h, e, t, hbar);
        for (std::size_t i = 0; i < n; ++i) u(i, j) = col[i];
    }
    return u;
}

/// exp(H) for Hermitian H, via eigendecomposition: V diag(e^{lambda}) V^dag.
[[nodiscard]] inline ComplexMatrix hermitian_exp(const ComplexMatrix& h) {
    const EnergySpectrum spec = eigen_spectrum(h);
    const std::size_t n = h.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k)
                acc += spec.eigenvectors(i, k) * std::exp(spec.eigenvalues[k]) *
                       std::conj(spec.eigenvectors(j, k));
            out(i, j) = acc;
        }
    }
    return out;
}

/// Factored evolution of independent spins: (x E_p)(x R_p) applied to
/// (x psi_p). Equals the tensor product of the per-spin evolved states.
[[nodiscard]] inline std::vector<cplx> tensor_rf_evolution(
    const std::vector<EvolutionPair>& pairs, const std::vector<SpinState>& initial) {
    if (pairs.empty() || pairs.size() != initial.size())
        throw DimensionMismatch("tensor_rf_evolution: need one evolution pair per spin");
    check_capacity(pairs.size());
    ComplexMatrix e_all = pairs.front().e_part;
    ComplexMatrix r_all = pairs.front().r_part;
    std::vector<cplx> psi{initial.front().x2, initial.front().x1};
    for (std::size_t p = 1; p < pairs.size(); ++p) {
        e_all = tensor_product(e_all, pairs[p].e_part);
        r_all = tensor_product(r_all, pairs[p].r_part);
        psi = tensor_product(psi, std::vector<cplx>{initial[p].x2, initial[p].x1});
    }
    return mat_apply(e_all, mat_apply(r_all, psi));
}

/// Full-system Hamiltonian: Kronecker-sum combination of the per-domain
/// homogeneous Hamiltonians, domains ordered as declared (first slowest).
[[nodiscard]] inline ComplexMatrix system_hamiltonian(const MultiSpinSystem& sys) {
    if (sys.domains.empty()) throw DimensionMismatch("system_hamiltonian: no domains");
    check_capacity(sys.total_spins());
    ComplexMatrix acc = hamiltonian_homogeneous(sys.domains.front(), sys.constants);
    for (std::size_t q = 1; q < sys.domains.size(); ++q)
        acc = kron_sum(acc, hamiltonian_homogeneous(sys.domains[q], sys.constants));
    return acc;
}

/// Blockwise evolution of a product state across domains: each domain evolves
/// under its own Hamiltonian and the results combine by tensor product.
/// Equivalent to evolve_matrix_exp under system_hamiltonian for product
/// inputs, at per-domain cost.
[[nodiscard]] inline std::vector<cplx> evolve_system(
    const MultiSpinSystem& sys, const std::vector<std::vector<cplx>>& domain_states,
    double t) {
    if (sys.domains.empty() || sys.domains.size() != domain_states.size())
        throw DimensionMismatch("evolve_system: need one state per domain");
    check_capacity(sys.total_spins());
    std::vector<cplx> acc;
    for (std::size_t q = 0; q < sys.domains.size(); ++q) {
        const ComplexMatrix h = hamiltonian_homogeneous(sys.domains[q], sys.constants);
        const auto evolved = evolve_matrix_exp(h, domain_states[q], t, sys.constants.hbar);
        acc = q == 0 ? evolved : tensor_product(acc, evolved);
    }
    return acc;
}

}  // namespace spinor
