#pragma once

// Dense matrices over F((u)) with precision-tracked entries.

#include "bkmod/series.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace bkmod {

class LaurentMatrix {
public:
    LaurentMatrix() = default;

    /// rows x cols certified-zero matrix.
    LaurentMatrix(FieldPtr f, int rows, int cols)
        : f_(std::move(f)), rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * cols, LaurentSeries::zero(f_)) {}

    static LaurentMatrix identity(FieldPtr f, int n, int prec = LaurentSeries::kInfinite) {
        LaurentMatrix m(f, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = LaurentSeries::constant(f, 1, prec);
        return m;
    }

    /// Exact diagonal matrix diag(u^{r_i}).
    static LaurentMatrix monomial_diagonal(FieldPtr f, const std::vector<int>& r) {
        int n = static_cast<int>(r.size());
        LaurentMatrix m(f, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = LaurentSeries::monomial(f, 1, r[i]);
        return m;
    }

    const FieldPtr& field() const { return f_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    LaurentSeries& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const LaurentSeries& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("matrix product shape mismatch");
        LaurentMatrix c(a.f_, a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) {
                LaurentSeries acc = LaurentSeries::zero(a.f_);
                for (int k = 0; k < a.cols_; ++k) {
                    if (a(i, k).is_certified_zero() || b(k, j).is_certified_zero()) continue;
                    acc += a(i, k) * b(k, j);
                }
                c(i, j) = std::move(acc);
            }
        return c;
    }

    friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
        a.require_shape(b);
        LaurentMatrix c = a;
        for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] = a.a_[k] + b.a_[k];
        return c;
    }

    friend LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b) {
        a.require_shape(b);
        LaurentMatrix c = a;
        for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] = a.a_[k] - b.a_[k];
        return c;
    }

    LaurentMatrix scaled(Fq s) const {
        LaurentMatrix c = *this;
        for (auto& e : c.a_) e = e.scaled(s);
        return c;
    }

    LaurentMatrix scaled(const LaurentSeries& s) const {
        LaurentMatrix c = *this;
        for (auto& e : c.a_)
            if (!e.is_certified_zero()) e = e * s;
        return c;
    }

    LaurentMatrix shifted(int k) const {
        LaurentMatrix c = *this;
        for (auto& e : c.a_) e = e.shifted(k);
        return c;
    }

    LaurentMatrix transposed() const {
        LaurentMatrix t(f_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    LaurentMatrix truncated(int prec) const {
        LaurentMatrix c = *this;
        for (auto& e : c.a_) e = e.truncated(prec);
        return c;
    }

    /// Entrywise u -> u^p.
    LaurentMatrix frobenius(int times = 1) const {
        LaurentMatrix c = *this;
        for (auto& e : c.a_) e = frobenius_substitute(e, times);
        return c;
    }

    /// Smallest visible valuation among entries (kInfinite if none visible).
    int min_valuation() const {
        int v = LaurentSeries::kInfinite;
        for (const auto& e : a_)
            if (e.has_exact_valuation()) v = std::min(v, e.val());
        return v;
    }

    /// Smallest absolute precision among the entries.
    int precision() const {
        int p = LaurentSeries::kInfinite;
        for (const auto& e : a_) p = std::min(p, e.prec());
        return p;
    }

    bool is_integral() const {
        return std::all_of(a_.begin(), a_.end(), [](const LaurentSeries& e) { return e.is_integral(); });
    }

    bool agrees_with(const LaurentMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t k = 0; k < a_.size(); ++k)
            if (!a_[k].agrees_with(o.a_[k])) return false;
        return true;
    }

    LaurentMatrix block(int r0, int c0, int nr, int nc) const {
        LaurentMatrix b(f_, nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(int r0, int c0, const LaurentMatrix& b) {
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
    }
    /// row_dst += s * row_src
    void add_row_multiple(int dst, int src, const LaurentSeries& s) {
        for (int c = 0; c < cols_; ++c)
            if (!(*this)(src, c).is_certified_zero()) (*this)(dst, c) += s * (*this)(src, c);
    }
    /// col_dst += s * col_src
    void add_col_multiple(int dst, int src, const LaurentSeries& s) {
        for (int r = 0; r < rows_; ++r)
            if (!(*this)(r, src).is_certified_zero()) (*this)(r, dst) += s * (*this)(r, src);
    }
    void scale_row(int i, const LaurentSeries& s) {
        for (int c = 0; c < cols_; ++c)
            if (!(*this)(i, c).is_certified_zero()) (*this)(i, c) = (*this)(i, c) * s;
    }
    void scale_col(int j, const LaurentSeries& s) {
        for (int r = 0; r < rows_; ++r)
            if (!(*this)(r, j).is_certified_zero()) (*this)(r, j) = (*this)(r, j) * s;
    }

private:
    void require_shape(const LaurentMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw InvalidArgument("matrix shape mismatch");
    }

    FieldPtr f_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<LaurentSeries> a_;
};

/// Kronecker product; (a ⊗ b)(i*rb + k, j*cb + l) = a(i,j) b(k,l).
inline LaurentMatrix kronecker(const LaurentMatrix& a, const LaurentMatrix& b) {
    LaurentMatrix c(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_certified_zero()) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    if (!b(k, l).is_certified_zero()) c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return c;
}

/// Inverse over F((u)) by Gauss-Jordan elimination, choosing in each column the
/// visible pivot of least valuation (lowest row on ties). Exact non-monomial
/// pivots are expanded to `exact_rel_prec` terms.
inline LaurentMatrix inverse(const LaurentMatrix& m, int exact_rel_prec = LaurentSeries::kDefaultInversePrecision) {
    if (!m.square()) throw InvalidArgument("inverse of a non-square matrix");
    int n = m.rows();
    LaurentMatrix a = m;
    LaurentMatrix inv = LaurentMatrix::identity(m.field(), n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            const auto& e = a(r, col);
            if (!e.has_exact_valuation()) continue;
            if (piv < 0 || e.val() < a(piv, col).val()) piv = r;
        }
        if (piv < 0)
            throw InsufficientPrecision("matrix inverse: no visible pivot in column " + std::to_string(col));
        a.swap_rows(col, piv);
        inv.swap_rows(col, piv);
        LaurentSeries pinv = invert(a(col, col), exact_rel_prec);
        a.scale_row(col, pinv);
        inv.scale_row(col, pinv);
        for (int r = 0; r < n; ++r) {
            if (r == col || a(r, col).is_certified_zero()) continue;
            LaurentSeries factor = -a(r, col);
            a.add_row_multiple(r, col, factor);
            inv.add_row_multiple(r, col, factor);
            a(r, col) = LaurentSeries::zero(m.field());
        }
    }
    return inv;
}

/// Rank over F((u)) of the columns of m. Throws when a remaining column
/// cannot be certified zero or nonzero.
inline int laurent_rank(const LaurentMatrix& m) {
    LaurentMatrix a = m;
    int rank = 0;
    for (int col = 0; col < a.cols() && rank < a.rows(); ++col) {
        int piv = -1;
        bool hidden = false;
        for (int r = rank; r < a.rows(); ++r) {
            const auto& e = a(r, col);
            if (e.has_exact_valuation()) {
                if (piv < 0 || e.val() < a(piv, col).val()) piv = r;
            } else if (!e.is_certified_zero()) {
                hidden = true;
            }
        }
        if (piv < 0) {
            if (hidden) throw InsufficientPrecision("laurent_rank: column " + std::to_string(col) + " undetermined");
            continue;
        }
        a.swap_rows(rank, piv);
        // fraction-free step, so exact polynomial input stays exact
        LaurentSeries pv = a(rank, col);
        for (int r = rank + 1; r < a.rows(); ++r) {
            if (a(r, col).is_certified_zero()) continue;
            LaurentSeries factor = -a(r, col);
            a.scale_row(r, pv);
            a.add_row_multiple(r, rank, factor);
            a(r, col) = LaurentSeries::zero(m.field());
        }
        ++rank;
    }
    return rank;
}

/// Determinant by elimination with valuation-minimal pivots.
inline LaurentSeries determinant(const LaurentMatrix& m, int exact_rel_prec = LaurentSeries::kDefaultInversePrecision) {
    if (!m.square()) throw InvalidArgument("determinant of a non-square matrix");
    int n = m.rows();
    LaurentMatrix a = m;
    LaurentSeries det = LaurentSeries::constant(m.field(), 1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            const auto& e = a(r, col);
            if (!e.has_exact_valuation()) continue;
            if (piv < 0 || e.val() < a(piv, col).val()) piv = r;
        }
        if (piv < 0) {
            bool all_certified = true;
            for (int r = col; r < n; ++r) all_certified = all_certified && a(r, col).is_certified_zero();
            if (all_certified) return LaurentSeries::zero(m.field());
            throw InsufficientPrecision("determinant: no visible pivot in column " + std::to_string(col));
        }
        if (piv != col) {
            a.swap_rows(col, piv);
            det = -det;
        }
        det *= a(col, col);
        LaurentSeries pinv = invert(a(col, col), exact_rel_prec);
        for (int r = col + 1; r < n; ++r) {
            if (a(r, col).is_certified_zero()) continue;
            LaurentSeries factor = -(a(r, col) * pinv);
            a.add_row_multiple(r, col, factor);
            a(r, col) = LaurentSeries::zero(m.field());
        }
    }
    return det;
}

} // namespace bkmod
