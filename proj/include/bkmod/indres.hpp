#pragma once

// Base change f^* and restriction of scalars f_* along unramified extensions,
// rank-one normal forms phi(1) = x sum u^{r_theta} e_theta, and the
// tame-exponent irreducibility test for restricted rank-one modules.

#include "bkmod/module.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bkmod {

/// f^*: D' embeddings with frob'[j] = frob[j mod d].
inline BKModule induce(const BKModule& M, int D) {
    if (D < 1 || D % M.d() != 0 || M.field()->m() % D != 0)
        throw DegreeIncompatible("induce: need d | D | m (d = " + std::to_string(M.d()) + ", D = " + std::to_string(D) +
                                 ", m = " + std::to_string(M.field()->m()) + ")");
    std::vector<LaurentMatrix> fr;
    for (int j = 0; j < D; ++j) fr.push_back(M.frob(j));
    return BKModule(M.field(), D, std::move(fr));
}

/// f_*: component tau of the result is the direct sum of N_{tau + t d} for
/// t = 0 .. D/d - 1. The Frobenius is block diagonal except at tau = d - 1,
/// where block (t, t+1) carries frob_N[d - 1 + t d].
inline BKModule restrict_to(const BKModule& N, int d) {
    int D = N.d();
    if (d < 1 || D % d != 0) throw DegreeIncompatible("restrict: need d | D (D = " + std::to_string(D) + ", d = " + std::to_string(d) + ")");
    int e = D / d, n = N.n();
    const FieldPtr& f = N.field();
    std::vector<LaurentMatrix> fr;
    for (int tau = 0; tau < d; ++tau) {
        LaurentMatrix X(f, n * e, n * e);
        for (int t = 0; t < e; ++t) {
            int col = tau == d - 1 ? (t + 1) % e : t;
            X.set_block(t * n, col * n, N.frob(tau + t * d));
        }
        fr.push_back(std::move(X));
    }
    return BKModule(f, d, std::move(fr));
}

struct RankOneData {
    FieldPtr field;
    int D = 1;
    std::vector<int> r;
    Fq x_total = 1;
    std::optional<Fq> x; // smallest D-th root of x_total, when it exists in F
};

/// r_j = valuation of the j-th entry, x_total = product of leading units.
inline RankOneData rank_one_invariants(const BKModule& N) {
    if (N.n() != 1) throw InvalidArgument("rank-one data requested for a module of rank " + std::to_string(N.n()));
    const FieldSpec& F = *N.field();
    RankOneData out{N.field(), N.d(), {}, 1, std::nullopt};
    for (int j = 0; j < N.d(); ++j) {
        const LaurentSeries& e = N.frob(j)(0, 0);
        out.r.push_back(e.valuation());
        out.x_total = F.mul(out.x_total, e.leading());
    }
    auto roots = F.roots(out.x_total, out.D);
    if (!roots.empty()) out.x = roots.front();
    return out;
}

/// Rank-one data with the unit x; throws when x_total has no D-th root in F.
inline RankOneData normalize_rank_one(const BKModule& N) {
    RankOneData data = rank_one_invariants(N);
    if (!data.x)
        throw RootNotInField("x^" + std::to_string(data.D) + " = x_total has no solution in F_" +
                             std::to_string(data.field->q()) + "; enlarge the field");
    return data;
}

/// phi(e_{j+1}) = x u^{r_j} e_j.
inline BKModule rank_one_normal_form(const RankOneData& data) {
    if (!data.x) throw RootNotInField("normal form needs a D-th root of x_total");
    return rank_one(data.field, *data.x, data.r);
}

/// phi(e_1) = x_total u^{r_0} e_0 and phi(e_{j+1}) = u^{r_j} e_j otherwise;
/// needs no root extraction.
inline BKModule rank_one_total_form(const RankOneData& data) {
    std::vector<LaurentSeries> entries;
    for (int j = 0; j < data.D; ++j)
        entries.push_back(LaurentSeries::monomial(data.field, j == 0 ? data.x_total : 1, data.r[j]));
    return rank_one_from_series(data.field, entries);
}

/// Units s_j with rebase(N, s) = target, for rank-one N and target sharing r
/// and x_total. s_0 solves phi^D(s_0) = h^{-1} s_0 with
/// h = prod_i phi^i(X_i / X'_i); then s_j = X_j phi(s_{j+1}) / X'_j.
inline std::vector<LaurentMatrix> rank_one_isomorphism(const BKModule& N, const BKModule& target) {
    require_compatible(N, target);
    RankOneData a = rank_one_invariants(N), b = rank_one_invariants(target);
    if (a.r != b.r || a.x_total != b.x_total)
        throw InvalidArgument("rank-one modules with different invariants are not isomorphic");
    int D = N.d();
    const FieldPtr& f = N.field();
    std::vector<LaurentSeries> ratio;
    for (int j = 0; j < D; ++j) ratio.push_back(N.frob(j)(0, 0) / target.frob(j)(0, 0));
    LaurentSeries h = LaurentSeries::constant(f, 1);
    for (int i = 0; i < D; ++i) h *= frobenius_substitute(ratio[i], i);
    UnitTwist tw = solve_unit_twist(invert(h), D);
    std::vector<LaurentSeries> s(static_cast<std::size_t>(D));
    s[0] = tw.z;
    for (int j = D - 1; j >= 1; --j) s[j] = ratio[j] * frobenius_substitute(s[(j + 1) % D]);
    std::vector<LaurentMatrix> C;
    for (int j = 0; j < D; ++j) {
        LaurentMatrix m(f, 1, 1);
        m(0, 0) = s[j];
        C.push_back(std::move(m));
    }
    return C;
}

/// Irreducibility of f_* of a rank-one module down to F_p: reducible exactly
/// when the tame exponent E = sum r_j p^j is fixed, mod p^D - 1, by
/// multiplication with p^{D'} for some proper divisor D' of D.
inline bool is_irreducible_restricted(const RankOneData& data) {
    long long p = data.field->p();
    int D = data.D;
    long long modulus = 1;
    for (int i = 0; i < D; ++i) modulus *= p;
    modulus -= 1;
    auto reduce = [modulus](long long x) { return ((x % modulus) + modulus) % modulus; };
    long long E = 0, pj = 1;
    for (int j = 0; j < D; ++j) {
        E = reduce(E + reduce(static_cast<long long>(data.r[j])) * pj);
        pj = reduce(pj * p);
    }
    for (int Dp = 1; Dp < D; ++Dp) {
        if (D % Dp != 0) continue;
        long long pd = 1;
        for (int i = 0; i < Dp; ++i) pd *= p;
        if (reduce(pd % modulus * E) == E) return false;
    }
    return true;
}

} // namespace bkmod
