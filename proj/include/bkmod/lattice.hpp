#pragma once

// Lattices L inside a module A, one F[[u]]-lattice per embedding, kept in a
// column Hermite form: upper triangular, diagonal u^{a_i}, and every entry to
// the right of a diagonal entry u^{a} reduced to degree < a.

#include "bkmod/linalg.hpp"
#include "bkmod/module.hpp"

#include <string>
#include <vector>

namespace bkmod {

/// Hermite form of the lattice spanned by the columns of `gens` (n x m,
/// m >= n, full rank over F((u))).
inline LaurentMatrix hermite_form(const LaurentMatrix& gens) {
    const FieldPtr& f = gens.field();
    int n = gens.rows(), m = gens.cols();
    LaurentMatrix W = gens;
    std::vector<char> active(static_cast<std::size_t>(m), 1);
    std::vector<int> slot(static_cast<std::size_t>(n), -1);
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    for (int i = n - 1; i >= 0; --i) {
        int best = -1, hidden = LaurentSeries::kInfinite;
        for (int j = 0; j < m; ++j) {
            if (!active[j]) continue;
            const auto& e = W(i, j);
            if (e.has_exact_valuation()) {
                if (best < 0 || e.val() < W(i, best).val()) best = j;
            } else if (!e.is_certified_zero()) {
                hidden = std::min(hidden, e.prec());
            }
        }
        if (best < 0) {
            if (hidden < LaurentSeries::kInfinite) throw InsufficientPrecision("hermite_form: row " + std::to_string(i) + " has no visible entry");
            throw InvalidArgument("hermite_form: generators do not span a full-rank lattice");
        }
        int v = W(i, best).val();
        if (v < 0) throw InvalidArgument("hermite_form: generators must be integral");
        if (hidden < v) throw InsufficientPrecision("hermite_form: pivot valuation cannot be certified");
        W.scale_col(best, invert(W(i, best).shifted(-v)));
        W(i, best) = LaurentSeries::monomial(f, 1, v);
        for (int j = 0; j < m; ++j) {
            if (!active[j] || j == best || W(i, j).is_certified_zero()) continue;
            LaurentSeries q = W(i, j).shifted(-v);
            W.add_col_multiple(j, best, -q);
            W(i, j) = LaurentSeries::zero(f);
        }
        active[best] = 0;
        slot[i] = best;
        a[i] = v;
    }
    LaurentMatrix H(f, n, n);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < n; ++r) H(r, i) = r <= i ? W(r, slot[i]) : LaurentSeries::zero(f);
    for (int j = 0; j < m; ++j) {
        if (!active[j]) continue;
        for (int r = 0; r < n; ++r)
            if (!W(r, j).known_zero()) throw InvalidArgument("hermite_form: leftover generator is not in the span");
    }
    // reduce entries right of each diagonal entry below its degree
    for (int i = n - 1; i >= 0; --i)
        for (int j = i + 1; j < n; ++j) {
            const LaurentSeries e = H(i, j);
            if (e.known_zero()) continue;
            std::vector<Fq> high;
            int end = e.stored_end();
            int start = std::max(e.val(), a[i]);
            if (start >= end) continue;
            for (int k = start; k < end; ++k) high.push_back(e.coeff_unchecked(k));
            LaurentSeries q = LaurentSeries::from_coeffs(f, start - a[i], std::move(high),
                                                         e.is_exact() ? LaurentSeries::kInfinite : e.prec() - a[i]);
            for (int r = 0; r <= i; ++r)
                if (!H(r, i).is_certified_zero()) H(r, j) -= q * H(r, i);
            std::vector<Fq> low;
            for (int k = e.val(); k < a[i]; ++k) low.push_back(e.coeff_unchecked(k));
            H(i, j) = LaurentSeries::from_coeffs(f, e.val(), std::move(low));
        }
    return H;
}

/// Diagonal exponents a_i of a Hermite basis.
inline std::vector<int> hermite_diagonal(const LaurentMatrix& H) {
    std::vector<int> a;
    for (int i = 0; i < H.rows(); ++i) a.push_back(H(i, i).valuation());
    return a;
}

struct Lattice {
    BKModule ambient;
    std::vector<LaurentMatrix> basis; // per embedding, Hermite form
};

/// Lattice generated by u*A_tau together with lifts of the F-subspace V[tau]
/// of the fiber A_tau/uA_tau (given by spanning vectors).
inline Lattice from_subspace(const BKModule& A, const std::vector<std::vector<std::vector<Fq>>>& V) {
    if (static_cast<int>(V.size()) != A.d()) throw InvalidArgument("need one subspace per embedding");
    const FieldPtr& f = A.field();
    int n = A.n();
    Lattice L{A, {}};
    for (int t = 0; t < A.d(); ++t) {
        FMat m(static_cast<int>(V[t].size()), n);
        for (int i = 0; i < m.rows(); ++i) {
            if (static_cast<int>(V[t][i].size()) != n) throw InvalidArgument("subspace vector has the wrong length");
            for (int j = 0; j < n; ++j) m(i, j) = V[t][i][j];
        }
        auto piv = rref(m, *f);
        std::vector<char> is_piv(static_cast<std::size_t>(n), 0);
        for (int c : piv) is_piv[c] = 1;
        LaurentMatrix gens(f, n, n);
        int col = 0;
        for (std::size_t r = 0; r < piv.size(); ++r, ++col)
            for (int j = 0; j < n; ++j)
                if (m(static_cast<int>(r), j) != 0) gens(j, col) = LaurentSeries::constant(f, m(static_cast<int>(r), j));
        for (int j = 0; j < n; ++j)
            if (!is_piv[j]) gens(j, col++) = LaurentSeries::monomial(f, 1, 1);
        L.basis.push_back(hermite_form(gens));
    }
    return L;
}

/// Lattice with the given generators per embedding.
inline Lattice lattice_from_generators(const BKModule& A, const std::vector<LaurentMatrix>& gens) {
    Lattice L{A, {}};
    for (const auto& g : gens) L.basis.push_back(hermite_form(g));
    return L;
}

/// Membership of the column vector v in L_tau by back-substitution.
inline bool contains(const Lattice& L, int tau, std::vector<LaurentSeries> v) {
    const LaurentMatrix& H = L.basis.at(static_cast<std::size_t>(tau));
    int n = H.rows();
    for (int i = n - 1; i >= 0; --i) {
        if (v[i].known_zero()) {
            if (!v[i].is_exact() && v[i].prec() < H(i, i).val())
                throw InsufficientPrecision("membership: coordinate not known far enough");
            continue;
        }
        int a = H(i, i).val();
        if (v[i].val() < a) return false;
        LaurentSeries q = v[i].shifted(-a);
        for (int r = 0; r <= i; ++r)
            if (!H(r, i).is_certified_zero()) v[r] -= q * H(r, i);
    }
    return true;
}

/// The lattice's own Frobenius is integral exactly when phi(L) lies in L.
inline bool is_phi_stable(const Lattice& L) {
    BKModule m = rebase(L.ambient, L.basis);
    for (int j = 0; j < m.d(); ++j)
        if (!m.frob(j).is_integral()) return false;
    return true;
}

/// The lattice as a Breuil-Kisin module in its Hermite basis.
inline BKModule to_module(const Lattice& L) {
    BKModule m = rebase(L.ambient, L.basis);
    for (int j = 0; j < m.d(); ++j)
        if (!m.frob(j).is_integral()) throw InvalidArgument("lattice is not stable under Frobenius");
    return m;
}

/// Each Frobenius matrix has exactly one nonzero entry in every row and column.
inline bool is_monomial_shaped(const BKModule& A) {
    for (int j = 0; j < A.d(); ++j) {
        const auto& X = A.frob(j);
        for (int i = 0; i < A.n(); ++i) {
            int rc = 0, cc = 0;
            for (int k = 0; k < A.n(); ++k) {
                rc += X(i, k).is_certified_zero() ? 0 : 1;
                cc += X(k, i).is_certified_zero() ? 0 : 1;
            }
            if (rc != 1 || cc != 1) return false;
        }
    }
    return true;
}

/// delta_theta = min{a >= 0 : u^a e_theta in L}, listed by theta = tau + t*d
/// where e_theta is basis vector t of the tau component.
inline std::vector<int> delta_profile(const Lattice& L) {
    const BKModule& A = L.ambient;
    if (!is_monomial_shaped(A)) throw AmbientNotRestrictedRankOne("delta_profile needs a restricted rank-one ambient");
    int d = A.d(), n = A.n();
    const FieldPtr& f = A.field();
    std::vector<int> delta(static_cast<std::size_t>(d * n), 0);
    for (int tau = 0; tau < d; ++tau) {
        int bound = 0;
        for (int a : hermite_diagonal(L.basis[tau])) bound += a;
        for (int t = 0; t < n; ++t) {
            int a = 0;
            for (; a <= bound; ++a) {
                std::vector<LaurentSeries> v(static_cast<std::size_t>(n), LaurentSeries::zero(f));
                v[t] = LaurentSeries::monomial(f, 1, a);
                if (contains(L, tau, v)) break;
            }
            delta[static_cast<std::size_t>(tau + t * d)] = a;
        }
    }
    return delta;
}

} // namespace bkmod
