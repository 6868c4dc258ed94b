#pragma once

// Dense linear algebra over a finite field: row reduction, rank, kernels and
// particular solutions. Used by every routine that reduces a question about
// F((u))-modules to finitely many F-linear conditions.

#include "bkmod/field.hpp"

#include <optional>
#include <vector>

namespace bkmod {

class FMat {
public:
    FMat() = default;
    FMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Fq& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    Fq operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    /// Appends a zero row and returns its index.
    int add_row() {
        a_.resize(a_.size() + static_cast<std::size_t>(cols_), 0);
        return rows_++;
    }

    std::vector<Fq> row(int i) const {
        return {a_.begin() + static_cast<std::ptrdiff_t>(i) * cols_, a_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_};
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Fq> a_;
};

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref(FMat& m, const FieldSpec& F) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        Fq inv = F.inv(m(r, c));
        for (int j = c; j < m.cols(); ++j) m(r, j) = F.mul(m(r, j), inv);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Fq f = m(i, c);
            for (int j = c; j < m.cols(); ++j)
                if (m(r, j) != 0) m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(FMat m, const FieldSpec& F) { return static_cast<int>(rref(m, F).size()); }

/// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<std::vector<Fq>> kernel(FMat m, const FieldSpec& F) {
    auto piv = rref(m, F);
    std::vector<char> is_piv(static_cast<std::size_t>(m.cols()), 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<std::vector<Fq>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_piv[free]) continue;
        std::vector<Fq> x(static_cast<std::size_t>(m.cols()), 0);
        x[free] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = F.neg(m(static_cast<int>(r), free));
        basis.push_back(std::move(x));
    }
    return basis;
}

/// Some x with m x = b, or nothing if the system is inconsistent.
inline std::optional<std::vector<Fq>> solve(const FMat& m, const std::vector<Fq>& b, const FieldSpec& F) {
    FMat aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    auto piv = rref(aug, F);
    if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
    std::vector<Fq> x(static_cast<std::size_t>(m.cols()), 0);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(static_cast<int>(r), m.cols());
    return x;
}

/// Rank of a list of vectors.
inline int span_rank(const std::vector<std::vector<Fq>>& vs, int dim, const FieldSpec& F) {
    FMat m(static_cast<int>(vs.size()), dim);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = vs[i][j];
    return rank(std::move(m), F);
}

} // namespace bkmod
