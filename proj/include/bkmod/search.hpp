#pragma once

// Brute-force search for a proper Frobenius-stable submodule. A vector v of
// component 0 spans, with its images under Phi^d (Phi_j(v) = X_j phi(v)), a
// Phi-stable F((u))-subspace whose dimension is the rank of v, Phi^d v, ...;
// if that rank is below n its saturation is a sub-Breuil-Kisin module.
// Candidates have one monomial c u^k per coordinate.

#include "bkmod/errors.hpp"
#include "bkmod/matrix.hpp"
#include "bkmod/module.hpp"

#include <optional>
#include <vector>

namespace bkmod {

using SeriesVector = std::vector<LaurentSeries>;

struct SubmoduleWitness {
    SeriesVector generator;
    std::vector<SeriesVector> basis; // generator, Phi^d generator, ...; independent over F((u))
    int rank = 0;
};

/// Phi^d on component 0: X_0 phi(X_1 phi(... X_{d-1} phi(v))).
inline SeriesVector phi_power(const BKModule& M, SeriesVector v) {
    int n = M.n();
    for (int j = M.d() - 1; j >= 0; --j) {
        const LaurentMatrix& X = M.frob(j);
        SeriesVector w(static_cast<std::size_t>(n), LaurentSeries::zero(M.field()));
        for (int a = 0; a < n; ++a)
            for (int s = 0; s < n; ++s)
                if (!X(a, s).is_certified_zero() && !v[s].is_certified_zero()) w[a] += X(a, s) * frobenius_substitute(v[s]);
        v = std::move(w);
    }
    return v;
}

/// Rank of v, Phi^d v, ..., Phi^{d(n-1)} v together with those vectors.
inline SubmoduleWitness orbit_span(const BKModule& M, const SeriesVector& v) {
    int n = M.n();
    SubmoduleWitness w{v, {v}, 0};
    for (int i = 1; i < n; ++i) w.basis.push_back(phi_power(M, w.basis.back()));
    LaurentMatrix cols(M.field(), n, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) cols(a, i) = w.basis[i][a];
    w.rank = laurent_rank(cols);
    w.basis.resize(static_cast<std::size_t>(w.rank));
    return w;
}

/// First candidate (coordinates 0 or c u^k, k <= degree_bound, leading
/// coefficient 1, smallest exponent 0) whose orbit has rank in
/// [1, rank_bound] and below n. Throws SearchBudgetExceeded after `budget`
/// candidates.
inline std::optional<SubmoduleWitness> find_submodule(const BKModule& M, int rank_bound, int degree_bound,
                                                      long long budget = 10'000'000) {
    const FieldPtr& f = M.field();
    int n = M.n();
    if (degree_bound < 0) throw InvalidArgument("find_submodule: degree bound must be nonnegative");
    long long per = 1 + static_cast<long long>(f->q() - 1) * (degree_bound + 1);
    std::vector<long long> choice(static_cast<std::size_t>(n), 0);
    long long work = 0;
    for (;;) {
        int k = n - 1;
        while (k >= 0 && ++choice[k] == per) choice[k--] = 0;
        if (k < 0) break;
        // decode: choice 0 is zero, otherwise coefficient (c - 1) / (B + 1) + 1 at exponent (c - 1) % (B + 1)
        bool leading_seen = false, normalized = true;
        int min_exp = degree_bound + 1;
        for (int a = 0; a < n && normalized; ++a) {
            if (choice[a] == 0) continue;
            long long c = choice[a] - 1;
            Fq coeff = static_cast<Fq>(c / (degree_bound + 1) + 1);
            int e = static_cast<int>(c % (degree_bound + 1));
            if (!leading_seen && coeff != 1) normalized = false;
            leading_seen = true;
            min_exp = std::min(min_exp, e);
        }
        if (!normalized || min_exp != 0) continue;
        if (++work > budget) throw SearchBudgetExceeded("find_submodule exceeded its budget");
        SeriesVector v(static_cast<std::size_t>(n), LaurentSeries::zero(f));
        for (int a = 0; a < n; ++a)
            if (choice[a] != 0) {
                long long c = choice[a] - 1;
                v[a] = LaurentSeries::monomial(f, static_cast<Fq>(c / (degree_bound + 1) + 1),
                                               static_cast<int>(c % (degree_bound + 1)));
            }
        SubmoduleWitness w = orbit_span(M, v);
        if (w.rank < n && w.rank <= rank_bound) return w;
    }
    return std::nullopt;
}

} // namespace bkmod
