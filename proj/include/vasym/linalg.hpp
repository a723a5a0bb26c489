#pragma once

// Exact dense linear algebra over a field (fraction-free is not needed at the
// sizes used here). Field elements need + - * /, == and is_zero(F).

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "vasym/error.hpp"
#include "vasym/scalar.hpp"

namespace vasym {

inline bool is_zero(const PiRational& a) { return a.is_zero(); }
inline bool is_zero(const Rational& a) { return a == 0; }

template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    std::vector<F> apply(const std::vector<F>& v) const
    {
        if (v.size() != cols_) throw Error(ErrorKind::InvariantViolation, "dimension mismatch");
        std::vector<F> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (!is_zero((*this)(r, c)) && !is_zero(v[c])) out[r] = out[r] + (*this)(r, c) * v[c];
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<F> data_;
};

/// Reduced row echelon form with the list of pivot columns.
template <class F>
struct Rref {
    Matrix<F> matrix;
    std::vector<std::size_t> pivots;
};

template <class F>
Rref<F> rref(Matrix<F> m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && is_zero(m(p, col))) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(row, p);
        F inv = F(Scalar(1L)) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c)
            if (!is_zero(m(row, c))) m(row, c) = m(row, c) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            F factor = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                if (!is_zero(m(row, c))) m(r, c) = m(r, c) - factor * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m)
{
    return rref(m).pivots.size();
}

/// Basis of the right kernel; one vector per free column, with a 1 there.
template <class F>
std::vector<std::vector<F>> kernel(const Matrix<F>& m)
{
    Rref<F> r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : r.pivots) is_pivot[p] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(m.cols());
        v[free] = F(Scalar(1L));
        for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = -r.matrix(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m * v = b, or nullopt when inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& b)
{
    if (b.size() != m.rows()) throw Error(ErrorKind::InvariantViolation, "dimension mismatch");
    Matrix<F> aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    Rref<F> red = rref(std::move(aug));
    if (!red.pivots.empty() && red.pivots.back() == m.cols()) return std::nullopt;
    std::vector<F> v(m.cols());
    for (std::size_t k = 0; k < red.pivots.size(); ++k) v[red.pivots[k]] = red.matrix(k, m.cols());
    return v;
}

} // namespace vasym
