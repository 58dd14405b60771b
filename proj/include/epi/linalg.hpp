// Minimal dense complex linear algebra for the tiny matrices this library
// needs (reduced density matrices up to the largest local dimension, 4x4
// two-qubit pair states). Hermitian eigenproblems are solved by cyclic
// Jacobi with an off-diagonal norm threshold of 1e-13.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "epi/rng.hpp"

namespace epi {

using cd = std::complex<double>;

class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cd{0.0, 0.0}) {}

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    CMat adjoint() const {
        CMat m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    CMat conjugate() const {
        CMat m(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
        return m;
    }

    double trace_real() const {
        double t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i).real();
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cd& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    friend CMat operator*(const CMat& a, const CMat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("CMat: shape mismatch in product");
        CMat c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cd aik = a(i, k);
                if (aik == cd{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend CMat operator-(const CMat& a, const CMat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("CMat: shape mismatch in difference");
        CMat c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
        return c;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cd> a_;
};

struct EigenSystem {
    std::vector<double> values;  // nonincreasing
    CMat vectors;                // column k pairs with values[k]
};

namespace detail {

// One Jacobi rotation zeroing the (p,q) element of a Hermitian matrix.
// a <- R^dagger a R and v <- v R with R the complex plane rotation.
inline void jacobi_rotate(CMat& a, CMat& v, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows();
    const cd apq = a(p, q);
    const double absg = std::abs(apq);
    if (absg == 0.0) return;
    const cd phase = apq / absg;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * absg);
    const double hyp = std::sqrt(1.0 + tau * tau);
    const double t = (tau >= 0.0) ? 1.0 / (tau + hyp) : 1.0 / (tau - hyp);
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cd sp = s * phase;

    // columns p and q of A
    for (std::size_t i = 0; i < n; ++i) {
        const cd aip = a(i, p), aiq = a(i, q);
        a(i, p) = c * aip - std::conj(sp) * aiq;
        a(i, q) = sp * aip + c * aiq;
    }
    // rows p and q of A
    for (std::size_t j = 0; j < n; ++j) {
        const cd apj = a(p, j), aqj = a(q, j);
        a(p, j) = c * apj - sp * aqj;
        a(q, j) = std::conj(sp) * apj + c * aqj;
    }
    // keep the pivot exactly Hermitian
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cd(a(p, p).real(), 0.0);
    a(q, q) = cd(a(q, q).real(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const cd vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip - std::conj(sp) * viq;
        v(i, q) = sp * vip + c * viq;
    }
}

inline double off_diagonal_norm(const CMat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Make the largest-magnitude component of each column real and positive.
// Removes the eigenvector phase gauge so serialized bases are reproducible.
inline void fix_column_phases(CMat& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            const double m = std::abs(v(i, j));
            if (m > best) {
                best = m;
                imax = i;
            }
        }
        if (best <= 0.0) continue;
        const cd z = v(imax, j) / best;
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) *= std::conj(z);
    }
}

// Cyclic Jacobi for Hermitian matrices. Eigenvalues sorted nonincreasing,
// eigenvector phases fixed for reproducibility.
inline EigenSystem hermitian_eigensystem(CMat a, double off_tol = 1e-13) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigensystem: matrix not square");
    const std::size_t n = a.rows();
    CMat v = CMat::identity(n);
    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= off_tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = CMat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
    }
    fix_column_phases(es.vectors);
    return es;
}

// Principal square root of a positive semidefinite Hermitian matrix.
// Round-off negatives in the spectrum are clamped at zero.
inline CMat sqrt_psd(const CMat& a) {
    const EigenSystem es = hermitian_eigensystem(a);
    const std::size_t n = a.rows();
    CMat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(es.values[k], 0.0));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    return r;
}

// Haar-ish random unitary from Gram-Schmidt on a complex Gaussian matrix.
// Used by tests for local-unitary invariance checks.
inline CMat random_unitary(std::size_t n, rng::Stream& stream) {
    CMat m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) m(i, j) = cd(stream.normal(), stream.normal());
        for (std::size_t k = 0; k < j; ++k) {
            cd proj{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) proj += std::conj(m(i, k)) * m(i, j);
            for (std::size_t i = 0; i < n; ++i) m(i, j) -= proj * m(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(m(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) m(i, j) /= norm;
    }
    return m;
}

}  // namespace epi
