#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/state.hpp"

namespace spinor {

inline constexpr std::size_t max_matrix_dim = 4096;  ///< dense cap, 2^12

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

/// Dense square complex matrix in row-major order. Dimensions are powers of
/// two between 2 and 4096; this is the carrier for Hamiltonians, propagators
/// and rotations. Hermitian/unitary flags are cached only after a verified
/// check against tol::matrix_flag.
class ComplexMatrix {
public:
    ComplexMatrix() : dim_(2), a_(4, cplx{0.0, 0.0}) {}

    explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {
        check_dim(dim);
    }

    ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
        : dim_(dim), a_(std::move(entries)) {
        check_dim(dim);
        if (a_.size() != dim * dim)
            throw DimensionMismatch("ComplexMatrix: entry count does not match dim^2");
        for (const auto& z : a_)
            if (!is_finite(z)) throw Error("ComplexMatrix: non-finite entry");
    }

    /// 2x2 convenience constructor, entries row by row.
    ComplexMatrix(cplx a00, cplx a01, cplx a10, cplx a11)
        : dim_(2), a_{a00, a01, a10, a11} {
        for (const auto& z : a_)
            if (!is_finite(z)) throw Error("ComplexMatrix: non-finite entry");
    }

    [[nodiscard]] std::size_t dim() const { return dim_; }

    [[nodiscard]] const cplx& operator()(std::size_t i, std::size_t j) const {
        return a_[i * dim_ + j];
    }
    cplx& operator()(std::size_t i, std::size_t j) {
        flags_ = {};
        return a_[i * dim_ + j];
    }

    [[nodiscard]] const std::vector<cplx>& entries() const { return a_; }

    [[nodiscard]] static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] ComplexMatrix dagger() const {
        ComplexMatrix m(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    [[nodiscard]] ComplexMatrix operator+(const ComplexMatrix& o) const {
        require_same_dim(o);
        ComplexMatrix m(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
        return m;
    }

    [[nodiscard]] ComplexMatrix operator-(const ComplexMatrix& o) const {
        require_same_dim(o);
        ComplexMatrix m(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
        return m;
    }

    [[nodiscard]] ComplexMatrix operator*(const cplx& z) const {
        ComplexMatrix m(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * z;
        return m;
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    /// Largest entry-wise |this - o|.
    [[nodiscard]] double max_abs_diff(const ComplexMatrix& o) const {
        require_same_dim(o);
        double m = 0.0;
        for (std::size_t k = 0; k < a_.size(); ++k)
            m = std::max(m, std::abs(a_[k] - o.a_[k]));
        return m;
    }

    /// Max deviation from the Hermitian condition A = A^dagger.
    [[nodiscard]] double hermitian_deviation() const {
        double m = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i; j < dim_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    /// Max deviation of A^dagger A from the identity.
    [[nodiscard]] double unitary_deviation() const {
        double m = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                cplx s{0.0, 0.0};
                for (std::size_t k = 0; k < dim_; ++k)
                    s += std::conj((*this)(k, i)) * (*this)(k, j);
                m = std::max(m, std::abs(s - (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0})));
            }
        }
        return m;
    }

    /// Verified-and-cached Hermitian flag (deviation below tol::matrix_flag).
    [[nodiscard]] bool is_hermitian() const {
        if (!flags_.hermitian) flags_.hermitian = hermitian_deviation() < tol::matrix_flag;
        return *flags_.hermitian;
    }

    /// Verified-and-cached unitary flag (deviation below tol::matrix_flag).
    [[nodiscard]] bool is_unitary() const {
        if (!flags_.unitary) flags_.unitary = unitary_deviation() < tol::matrix_flag;
        return *flags_.unitary;
    }

    /// Determinant of a 2x2 matrix.
    [[nodiscard]] cplx det2() const {
        if (dim_ != 2) throw DimensionMismatch("det2: matrix is not 2x2");
        return a_[0] * a_[3] - a_[1] * a_[2];
    }

private:
    static void check_dim(std::size_t dim) {
        if (!is_power_of_two(dim) || dim < 2 || dim > max_matrix_dim)
            throw DimensionMismatch("ComplexMatrix: dim must be a power of two in [2, 4096]");
    }
    void require_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_) throw DimensionMismatch("ComplexMatrix: dimension mismatch");
    }

    struct Flags {
        std::optional<bool> hermitian;
        std::optional<bool> unitary;
    };

    std::size_t dim_;
    std::vector<cplx> a_;
    mutable Flags flags_{};
};

[[nodiscard]] inline ComplexMatrix operator*(const cplx& z, const ComplexMatrix& m) {
    return m * z;
}

[[nodiscard]] inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.max_abs_diff(b);
}

/// Matrix product, O(n^3) dense.
[[nodiscard]] inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("mat_mul: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

[[nodiscard]] inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    return mat_mul(a, b);
}

/// Matrix times column vector.
[[nodiscard]] inline std::vector<cplx> mat_apply(const ComplexMatrix& m,
                                                 const std::vector<cplx>& v) {
    if (m.dim() != v.size()) throw DimensionMismatch("mat_apply: dimension mismatch");
    std::vector<cplx> r(v.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) r[i] += m(i, j) * v[j];
    return r;
}

/// Apply a 2x2 matrix to a spin state.
[[nodiscard]] inline SpinState mat_apply(const ComplexMatrix& m, const SpinState& s) {
    if (m.dim() != 2) throw DimensionMismatch("mat_apply: state requires a 2x2 matrix");
    return SpinState{m(0, 0) * s.x2 + m(0, 1) * s.x1, m(1, 0) * s.x2 + m(1, 1) * s.x1};
}

/// Kronecker product with the first factor indexing the slow (outer) axis:
/// (a (x) b)[(i*p + k), (j*q + l)] = a[i,j] * b[k,l].
[[nodiscard]] inline ComplexMatrix tensor_product(const ComplexMatrix& a,
                                                  const ComplexMatrix& b) {
    const std::size_t n = a.dim() * b.dim();
    if (n > max_matrix_dim)
        throw CapacityExceeded("tensor_product: result exceeds the 4096 cap");
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.dim(); ++k)
                for (std::size_t l = 0; l < b.dim(); ++l)
                    c(i * b.dim() + k, j * b.dim() + l) = aij * b(k, l);
        }
    return c;
}

/// Kronecker product of column vectors, first factor slow.
[[nodiscard]] inline std::vector<cplx> tensor_product(const std::vector<cplx>& a,
                                                      const std::vector<cplx>& b) {
    if (a.size() * b.size() > max_matrix_dim)
        throw CapacityExceeded("tensor_product: result exceeds the 4096 cap");
    std::vector<cplx> c(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) c[i * b.size() + k] = a[i] * b[k];
    return c;
}

[[nodiscard]] inline std::vector<cplx> tensor_product(const SpinState& a, const SpinState& b) {
    return tensor_product(std::vector<cplx>{a.x2, a.x1}, std::vector<cplx>{b.x2, b.x1});
}

/// Pauli matrices.
[[nodiscard]] inline ComplexMatrix pauli_x() {
    return ComplexMatrix{cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
}
[[nodiscard]] inline ComplexMatrix pauli_y() {
    return ComplexMatrix{cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}};
}
[[nodiscard]] inline ComplexMatrix pauli_z() {
    return ComplexMatrix{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}};
}

[[nodiscard]] inline double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

}  // namespace spinor
