#pragma once

// Breuil-Kisin modules mod p with coefficients, presented by one Frobenius
// matrix per embedding. frob[j] maps component j+1 (mod d) to component j:
// for v in M_{j+1}, phi(v) = frob[j] * phi(v) with phi acting on entries.

#include "bkmod/matrix.hpp"

#include <string>
#include <vector>

namespace bkmod {

class BKModule {
public:
    BKModule() = default;

    /// Validates d | m, square n x n matrices and certified invertibility.
    BKModule(FieldPtr f, int d, std::vector<LaurentMatrix> frob) : f_(std::move(f)), d_(d), frob_(std::move(frob)) {
        if (d_ < 1) throw InvalidArgument("residue degree d must be positive");
        if (f_->m() % d_ != 0)
            throw InvalidArgument("d = " + std::to_string(d_) + " does not divide m = " + std::to_string(f_->m()));
        if (static_cast<int>(frob_.size()) != d_) throw InvalidArgument("need one Frobenius matrix per embedding");
        n_ = frob_.front().rows();
        for (int j = 0; j < d_; ++j) {
            const auto& x = frob_[j];
            if (x.rows() != n_ || x.cols() != n_) throw InvalidArgument("Frobenius matrices must all be n x n");
            if (!x.field()->same_as(*f_)) throw InvalidArgument("Frobenius matrix over a different field");
            if (n_ > 0 && !determinant(x).has_exact_valuation())
                throw InsufficientPrecision("Frobenius matrix " + std::to_string(j) + " is not certifiably invertible");
        }
    }

    const FieldPtr& field() const { return f_; }
    int p() const { return f_->p(); }
    int d() const { return d_; }
    int n() const { return n_; }
    const LaurentMatrix& frob(int j) const { return frob_[static_cast<std::size_t>(mod(j))]; }
    const std::vector<LaurentMatrix>& frobs() const { return frob_; }
    int mod(int j) const { return ((j % d_) + d_) % d_; }

    /// Smallest absolute precision among all Frobenius entries.
    int precision() const {
        int pr = LaurentSeries::kInfinite;
        for (const auto& x : frob_) pr = std::min(pr, x.precision());
        return pr;
    }

    bool is_exact() const { return precision() >= LaurentSeries::kInfinite; }

    /// Default working precision p (n (p+1) + 2).
    int default_precision() const { return p() * (n_ * (p() + 1) + 2); }

private:
    FieldPtr f_;
    int d_ = 1;
    int n_ = 0;
    std::vector<LaurentMatrix> frob_;
};

struct BKMorphism {
    BKModule source;
    BKModule target;
    std::vector<LaurentMatrix> mats;
};

inline void require_compatible(const BKModule& a, const BKModule& b) {
    require_same_field(*a.field(), *b.field());
    if (a.d() != b.d()) throw InvalidArgument("modules have different residue degrees");
}

/// Commutation defect mats[j] X_M[j] - X_N[j] phi(mats[j+1]) per embedding.
inline std::vector<LaurentMatrix> morphism_defect(const BKMorphism& g) {
    require_compatible(g.source, g.target);
    int d = g.source.d();
    if (static_cast<int>(g.mats.size()) != d) throw InvalidArgument("morphism needs one matrix per embedding");
    std::vector<LaurentMatrix> out;
    for (int j = 0; j < d; ++j)
        out.push_back(g.mats[j] * g.source.frob(j) - g.target.frob(j) * g.mats[(j + 1) % d].frobenius());
    return out;
}

/// True when the commutation defect vanishes on its whole certified window and
/// that window reaches at least `min_window`.
inline bool is_morphism(const BKMorphism& g, int min_window = 0) {
    for (const auto& m : morphism_defect(g))
        for (int i = 0; i < m.rows(); ++i)
            for (int k = 0; k < m.cols(); ++k) {
                const auto& e = m(i, k);
                if (!e.known_zero()) return false;
                if (e.prec() < min_window) return false;
            }
    return true;
}

inline BKModule trivial_module(const FieldPtr& f, int d, int n) {
    return BKModule(f, d, std::vector<LaurentMatrix>(static_cast<std::size_t>(d), LaurentMatrix::identity(f, n)));
}

/// Rank-one module with frob[j] = x u^{r_j}.
inline BKModule rank_one(const FieldPtr& f, Fq x, const std::vector<int>& r) {
    if (x == 0) throw InvalidArgument("rank-one unit must be nonzero");
    std::vector<LaurentMatrix> fr;
    for (int rj : r) {
        LaurentMatrix m(f, 1, 1);
        m(0, 0) = LaurentSeries::monomial(f, x, rj);
        fr.push_back(std::move(m));
    }
    return BKModule(f, static_cast<int>(r.size()), std::move(fr));
}

/// Rank-one module with arbitrary 1x1 entries.
inline BKModule rank_one_from_series(const FieldPtr& f, const std::vector<LaurentSeries>& entries) {
    std::vector<LaurentMatrix> fr;
    for (const auto& e : entries) {
        LaurentMatrix m(f, 1, 1);
        m(0, 0) = e;
        fr.push_back(std::move(m));
    }
    return BKModule(f, static_cast<int>(entries.size()), std::move(fr));
}

/// Internal Hom with Frobenius f -> phi_M o f o phi_P^{-1}, on the basis of
/// elementary maps ordered column-major: basis vector b*n_M + a is E_{ab}.
inline BKModule hom_module(const BKModule& P, const BKModule& M) {
    require_compatible(P, M);
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < P.d(); ++j) fr.push_back(kronecker(inverse(P.frob(j)).transposed(), M.frob(j)));
    return BKModule(P.field(), P.d(), std::move(fr));
}

inline BKModule dual(const BKModule& M) {
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < M.d(); ++j) fr.push_back(inverse(M.frob(j)).transposed());
    return BKModule(M.field(), M.d(), std::move(fr));
}

inline BKModule direct_sum(const BKModule& A, const BKModule& B) {
    require_compatible(A, B);
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < A.d(); ++j) {
        LaurentMatrix m(A.field(), A.n() + B.n(), A.n() + B.n());
        m.set_block(0, 0, A.frob(j));
        m.set_block(A.n(), A.n(), B.frob(j));
        fr.push_back(std::move(m));
    }
    return BKModule(A.field(), A.d(), std::move(fr));
}

/// Extension of P by M with Frobenius (phi_M + f o phi_P, phi_P): block
/// matrices [[X_M, f_j X_P], [0, X_P]]. f[j] is n_M x n_P.
inline BKModule build_extension(const BKModule& P, const BKModule& M, const std::vector<LaurentMatrix>& f) {
    require_compatible(P, M);
    if (static_cast<int>(f.size()) != P.d()) throw InvalidArgument("extension class needs one matrix per embedding");
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < P.d(); ++j) {
        if (f[j].rows() != M.n() || f[j].cols() != P.n()) throw InvalidArgument("extension class has the wrong shape");
        LaurentMatrix m(P.field(), M.n() + P.n(), M.n() + P.n());
        m.set_block(0, 0, M.frob(j));
        m.set_block(0, M.n(), f[j] * P.frob(j));
        m.set_block(M.n(), M.n(), P.frob(j));
        fr.push_back(std::move(m));
    }
    return BKModule(P.field(), P.d(), std::move(fr));
}

/// Tensor with a rank-one module: frob entries multiplied by N's scalar.
inline BKModule twist(const BKModule& M, const BKModule& N) {
    require_compatible(M, N);
    if (N.n() != 1) throw InvalidArgument("twist needs a rank-one module");
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < M.d(); ++j) fr.push_back(M.frob(j).scaled(N.frob(j)(0, 0)));
    return BKModule(M.field(), M.d(), std::move(fr));
}

/// The module u*M in the basis u e_i: frob becomes u^{p-1} X.
inline BKModule multiply_by_u(const BKModule& M) {
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < M.d(); ++j) fr.push_back(M.frob(j).shifted(M.p() - 1));
    return BKModule(M.field(), M.d(), std::move(fr));
}

/// Frobenius in a new basis given by the columns of C[j] (any matrices
/// invertible over F((u))): C[j]^{-1} X_j phi(C[j+1]).
inline BKModule rebase(const BKModule& M, const std::vector<LaurentMatrix>& C) {
    if (static_cast<int>(C.size()) != M.d()) throw InvalidArgument("need one basis matrix per embedding");
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < M.d(); ++j)
        fr.push_back(inverse(C[j]) * M.frob(j) * C[(j + 1) % M.d()].frobenius());
    return BKModule(M.field(), M.d(), std::move(fr));
}

/// True when C is integral with unit determinant.
inline bool is_unit_matrix(const LaurentMatrix& C) {
    if (!C.square() || !C.is_integral()) return false;
    LaurentSeries det = determinant(C);
    return det.has_exact_valuation() && det.val() == 0;
}

/// Isomorphic module under integral unit basis changes C[j].
inline BKModule change_basis(const BKModule& M, const std::vector<LaurentMatrix>& C) {
    for (std::size_t j = 0; j < C.size(); ++j)
        if (!is_unit_matrix(C[j])) throw NotAUnitMatrix("basis change " + std::to_string(j) + " is not in GL_n(F[[u]])");
    return rebase(M, C);
}

/// Truncates every Frobenius entry to absolute precision prec.
inline BKModule truncated(const BKModule& M, int prec) {
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < M.d(); ++j) fr.push_back(M.frob(j).truncated(prec));
    return BKModule(M.field(), M.d(), std::move(fr));
}

} // namespace bkmod
