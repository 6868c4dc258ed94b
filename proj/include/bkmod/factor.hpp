#pragma once

// Factorisation X = A diag(u^{r_i}) B with A, B in GL_n(F[[u]]), weight
// multisets, graded dimensions of the two filtrations on M/uM and the
// strong-divisibility test built from them.

#include "bkmod/linalg.hpp"
#include "bkmod/module.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bkmod {

struct IwasawaFactorization {
    LaurentMatrix A;
    std::vector<int> r; // in pivot order, so X = A diag(u^r) B
    LaurentMatrix B;
};

/// Elimination with valuation-minimal pivots (ties: lowest row, then lowest
/// column). Row operations are recorded in A, column operations in B.
inline IwasawaFactorization iwasawa_factor(const LaurentMatrix& X,
                                           int exact_rel_prec = LaurentSeries::kDefaultInversePrecision) {
    if (!X.square()) throw InvalidArgument("iwasawa_factor needs a square matrix");
    const FieldPtr& f = X.field();
    int n = X.rows();
    LaurentMatrix W = X;
    LaurentMatrix A = LaurentMatrix::identity(f, n);
    LaurentMatrix B = LaurentMatrix::identity(f, n);
    std::vector<int> r(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        int pr = -1, pc = -1, best = LaurentSeries::kInfinite, hidden = LaurentSeries::kInfinite;
        bool all_zero = true;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                const auto& e = W(i, j);
                if (e.has_exact_valuation()) {
                    all_zero = false;
                    if (e.val() < best) best = e.val(), pr = i, pc = j;
                } else if (!e.is_certified_zero()) {
                    all_zero = false;
                    hidden = std::min(hidden, e.prec());
                }
            }
        if (all_zero) throw InvalidArgument("iwasawa_factor: matrix is singular");
        if (pr < 0 || hidden < best)
            throw InsufficientPrecision("iwasawa_factor: pivot valuation cannot be certified at step " + std::to_string(k));
        W.swap_rows(k, pr);
        A.swap_cols(k, pr);
        W.swap_cols(k, pc);
        B.swap_rows(k, pc);
        int v = best;
        LaurentSeries unit = W(k, k).shifted(-v);
        LaurentSeries unit_inv = invert(unit, exact_rel_prec);
        W.scale_row(k, unit_inv);
        A.scale_col(k, unit);
        for (int i = k + 1; i < n; ++i) {
            if (W(i, k).is_certified_zero()) continue;
            LaurentSeries t = W(i, k).shifted(-v);
            W.add_row_multiple(i, k, -t);
            A.add_col_multiple(k, i, t);
            W(i, k) = LaurentSeries::zero(f);
        }
        for (int j = k + 1; j < n; ++j) {
            if (W(k, j).is_certified_zero()) continue;
            LaurentSeries s = W(k, j).shifted(-v);
            W.add_col_multiple(j, k, -s);
            B.add_row_multiple(k, j, s);
            W(k, j) = LaurentSeries::zero(f);
        }
        r[static_cast<std::size_t>(k)] = v;
    }
    return {std::move(A), std::move(r), std::move(B)};
}

inline std::vector<int> sorted_weights(const LaurentMatrix& X) {
    auto r = iwasawa_factor(X).r;
    std::sort(r.begin(), r.end());
    return r;
}

/// Weight_tau(M), sorted ascending.
inline std::vector<int> weight_multiset(const BKModule& M, int tau) { return sorted_weights(M.frob(tau)); }

/// Solutions of X phi(v) in u^i M for polynomial v, truncated to the degrees
/// that can matter. Coefficient (s, k) of v is unknown number s*(K+1)+k.
struct FiltrationPiece {
    int K = 0;
    int n = 0;
    std::vector<std::vector<Fq>> solutions;
    int dim_mod_u = 0;

    std::vector<Fq> constant_term(const std::vector<Fq>& sol) const {
        std::vector<Fq> c(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) c[s] = sol[static_cast<std::size_t>(s) * (K + 1)];
        return c;
    }
};

inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

/// F^i of the source component for Frobenius matrix X.
inline FiltrationPiece filtration_piece(const LaurentMatrix& X, int i) {
    const FieldSpec& F = *X.field();
    int p = F.p(), n = X.rows();
    int vmin = X.min_valuation();
    FiltrationPiece fp;
    fp.n = n;
    fp.K = std::max(0, floor_div(i - 1 - vmin, p));
    int cols = n * (fp.K + 1);
    int neq = i > vmin ? n * (i - vmin) : 0;
    FMat sys(neq, cols);
    int row = 0;
    for (int a = 0; a < n; ++a)
        for (int e = vmin; e < i; ++e, ++row)
            for (int s = 0; s < n; ++s)
                for (int k = 0; k <= fp.K; ++k) sys(row, s * (fp.K + 1) + k) = X(a, s).coeff(e - p * k);
    fp.solutions = kernel(std::move(sys), F);
    std::vector<std::vector<Fq>> proj;
    for (const auto& sol : fp.solutions) proj.push_back(fp.constant_term(sol));
    fp.dim_mod_u = span_rank(proj, n, F);
    return fp;
}

/// Witness for a failed strong-divisibility test.
struct SDWitness {
    enum class Kind { WeightOutOfRange, GradedMismatch } kind;
    int index;
};

struct EmbeddingReport {
    std::vector<int> weights;
    std::map<int, int> grM;    // gr^i of the filtration F^iM on M_k
    std::map<int, int> grMphi; // gr^i of the image filtration, = multiplicity of i in weights
    bool sd = false;
    std::optional<SDWitness> witness;
};

struct WeightReport {
    std::vector<EmbeddingReport> embeddings;
    bool sd() const {
        return std::all_of(embeddings.begin(), embeddings.end(), [](const EmbeddingReport& e) { return e.sd; });
    }
};

/// Graded tables and verdict for embedding tau. Both graded pieces vanish
/// outside [min r, max r], so only that window is computed.
inline EmbeddingReport embedding_report(const BKModule& M, int tau) {
    EmbeddingReport rep;
    const LaurentMatrix& X = M.frob(tau);
    rep.weights = sorted_weights(X);
    int p = M.p();
    if (rep.weights.empty()) {
        rep.sd = true;
        return rep;
    }
    int lo = rep.weights.front(), hi = rep.weights.back();
    for (int w : rep.weights) rep.grMphi[w] += 1;
    std::vector<int> dims;
    for (int i = lo; i <= hi + 1; ++i) dims.push_back(filtration_piece(X, i).dim_mod_u);
    for (int i = lo; i <= hi; ++i) {
        int g = dims[i - lo] - dims[i - lo + 1];
        if (g != 0) rep.grM[i] = g;
    }
    for (int w : rep.weights)
        if (w < 0 || w > p) {
            rep.witness = SDWitness{SDWitness::Kind::WeightOutOfRange, w};
            break;
        }
    if (!rep.witness)
        for (int i = lo; i <= hi; ++i) {
            auto get = [i](const std::map<int, int>& m) {
                auto it = m.find(i);
                return it == m.end() ? 0 : it->second;
            };
            if (get(rep.grM) != get(rep.grMphi)) {
                rep.witness = SDWitness{SDWitness::Kind::GradedMismatch, i};
                break;
            }
        }
    rep.sd = !rep.witness.has_value();
    return rep;
}

inline WeightReport is_strongly_divisible(const BKModule& M) {
    WeightReport rep;
    for (int t = 0; t < M.d(); ++t) rep.embeddings.push_back(embedding_report(M, t));
    return rep;
}

/// Basis (n_1..n_n) of the source component M_{tau+1} with n_i in F^{r_i}M
/// whose reductions mod u are adapted to the filtration on M_k. Columns of
/// `basis` are exact polynomial vectors.
struct AdaptedBasis {
    LaurentMatrix basis;
    std::vector<int> r;
};

inline AdaptedBasis adapted_basis(const BKModule& M, int tau) {
    const LaurentMatrix& X = M.frob(tau);
    const FieldPtr& f = M.field();
    int n = M.n();
    auto w = sorted_weights(X);
    AdaptedBasis out{LaurentMatrix(f, n, n), {}};
    std::vector<std::vector<Fq>> chosen;
    int col = 0;
    for (int i = w.back(); i >= w.front() && col < n; --i) {
        FiltrationPiece fp = filtration_piece(X, i);
        for (const auto& sol : fp.solutions) {
            auto c0 = fp.constant_term(sol);
            chosen.push_back(c0);
            if (span_rank(chosen, n, *f) < static_cast<int>(chosen.size())) {
                chosen.pop_back();
                continue;
            }
            for (int s = 0; s < n; ++s) {
                std::vector<Fq> poly(sol.begin() + s * (fp.K + 1), sol.begin() + (s + 1) * (fp.K + 1));
                out.basis(s, col) = LaurentSeries::polynomial(f, std::move(poly));
            }
            out.r.push_back(i);
            ++col;
        }
    }
    if (col != n) throw InsufficientPrecision("adapted basis incomplete");
    return out;
}

} // namespace bkmod
