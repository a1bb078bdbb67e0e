#pragma once

#include <cstddef>
#include <vector>

#include "ipw/rational.hpp"

namespace ipw {

/// Dense matrix of exact rationals. Sizes here are desk scale (tens to a few
/// hundred rows), so dense storage is fine.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void append_row(const std::vector<Rational>& row) {
        if (rows_ == 0 && cols_ == 0) cols_ = row.size();
        if (row.size() != cols_) throw std::runtime_error("row length mismatch");
        data_.insert(data_.end(), row.begin(), row.end());
        ++rows_;
    }

    void append_rows(const RatMatrix& other) {
        if (other.rows_ == 0) return;
        if (rows_ == 0 && cols_ == 0) cols_ = other.cols_;
        if (other.cols_ != cols_) throw std::runtime_error("column count mismatch");
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        rows_ += other.rows_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Rank by fraction-free (Bareiss) elimination on a denominator-cleared
/// integer copy. Pivoting is deterministic: columns in order, first nonzero
/// row below the pivot.
inline std::size_t rank(const RatMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    if (R == 0 || C == 0) return 0;
    std::vector<std::vector<Integer>> a(R, std::vector<Integer>(C));
    for (std::size_t i = 0; i < R; ++i) {
        Integer lcm = 1;
        for (std::size_t j = 0; j < C; ++j)
            lcm = boost::multiprecision::lcm(lcm, denominator(m.at(i, j)));
        for (std::size_t j = 0; j < C; ++j)
            a[i][j] = numerator(m.at(i, j)) * (lcm / denominator(m.at(i, j)));
    }
    std::size_t r = 0;
    Integer prev = 1;
    for (std::size_t col = 0; col < C && r < R; ++col) {
        std::size_t piv = r;
        while (piv < R && a[piv][col] == 0) ++piv;
        if (piv == R) continue;
        std::swap(a[r], a[piv]);
        for (std::size_t i = r + 1; i < R; ++i) {
            for (std::size_t j = col + 1; j < C; ++j)
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[r][col];
        ++r;
    }
    return r;
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
        std::size_t piv = r;
        while (piv < m.rows() && m.at(piv, col) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(r, j), m.at(piv, j));
        Rational inv = m.at(r, col);
        for (std::size_t j = col; j < m.cols(); ++j) m.at(r, j) /= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, col) == 0) continue;
            Rational f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

/// Basis of the right nullspace {v : M v = 0}, one vector per free column.
inline std::vector<std::vector<Rational>> nullspace(const RatMatrix& m) {
    RatMatrix e = m;
    std::vector<std::size_t> pivots = rref(e);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// dim of the span of a set of row vectors.
inline std::size_t span_dim(const std::vector<std::vector<Rational>>& rows) {
    RatMatrix m;
    for (const auto& r : rows) m.append_row(r);
    return rank(m);
}

} // namespace ipw
