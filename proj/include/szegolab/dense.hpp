#pragma once

// Plain dense linear algebra: row-major complex matrices, Gaussian elimination
// with partial pivoting. Used as the cubic-cost reference next to Levinson and
// for the finite-section Fredholm determinants.

#include <szegolab/seq_core.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace szegolab {

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    /// Trailing principal block starting at (first, first).
    DenseMatrix trailing_block(std::size_t first) const
    {
        const std::size_t n = rows_ - first;
        DenseMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) = (*this)(first + i, first + j);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVec data_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{})
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

/// n x n Toeplitz section with entries gamma_{j-i}.
inline DenseMatrix toeplitz_matrix(const AutocovSeq& g, std::size_t n)
{
    DenseMatrix t(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            t(i, j) = g.lag(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i));
    return t;
}

/// log|det| and the unit-modulus phase of det, from partial-pivot elimination.
struct LogDet {
    double log_abs = 0.0;
    cplx phase{1.0, 0.0};
    bool singular = false;

    cplx value() const { return singular ? cplx{} : phase * std::exp(log_abs); }
};

inline LogDet dense_log_determinant(DenseMatrix a)
{
    const std::size_t n = a.rows();
    LogDet out;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double v = std::abs(a(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) {
            out.singular = true;
            return out;
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(col, j), a(piv, j));
            out.phase = -out.phase;
        }
        const cplx d = a(col, col);
        out.log_abs += std::log(std::abs(d));
        out.phase *= d / std::abs(d);
        for (std::size_t i = col + 1; i < n; ++i) {
            const cplx f = a(i, col) / d;
            if (f == cplx{})
                continue;
            for (std::size_t j = col + 1; j < n; ++j)
                a(i, j) -= f * a(col, j);
        }
    }
    return out;
}

inline cplx dense_determinant(const DenseMatrix& a) { return dense_log_determinant(a).value(); }

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline CVec dense_solve(DenseMatrix a, CVec b)
{
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double v = std::abs(a(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0)
            fail(ErrorCode::NotPositiveDefinite, "singular matrix in dense solve");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(col, j), a(piv, j));
            std::swap(b[col], b[piv]);
        }
        const cplx d = a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const cplx f = a(i, col) / d;
            for (std::size_t j = col + 1; j < n; ++j)
                a(i, j) -= f * a(col, j);
            b[i] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        cplx s = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            s -= a(i, j) * b[j];
        b[i] = s / a(i, i);
    }
    return b;
}

} // namespace szegolab
