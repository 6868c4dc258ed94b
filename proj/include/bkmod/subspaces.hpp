#pragma once

// Enumeration of subspaces of F^s invariant under a linear map Psi and
// containing no coordinate vector. Every invariant subspace is a sum of
// cyclic ones, so a breadth-first search that adds one cyclic subspace at a
// time (over a transversal of the current quotient) reaches each of them;
// containing a coordinate vector is inherited by superspaces, so such
// branches are cut.

#include "bkmod/errors.hpp"
#include "bkmod/linalg.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace bkmod {

/// A subspace as its reduced row echelon rows.
struct Subspace {
    int dim_ambient = 0;
    std::vector<std::vector<Fq>> rows;

    int dim() const { return static_cast<int>(rows.size()); }

    std::vector<Fq> key() const {
        std::vector<Fq> k;
        k.push_back(static_cast<Fq>(rows.size()));
        for (const auto& r : rows) k.insert(k.end(), r.begin(), r.end());
        return k;
    }

    std::vector<int> pivots() const {
        std::vector<int> p;
        for (const auto& r : rows) {
            int c = 0;
            while (r[c] == 0) ++c;
            p.push_back(c);
        }
        return p;
    }

    /// In RREF, e_c lies in the span exactly when some row equals e_c.
    bool contains_coordinate_vector() const {
        for (const auto& r : rows) {
            int nz = 0;
            for (Fq x : r) nz += x != 0;
            if (nz == 1) return true;
        }
        return false;
    }

    /// Every coordinate function is nonzero on the subspace.
    bool all_coordinates_used() const {
        for (int c = 0; c < dim_ambient; ++c) {
            bool used = false;
            for (const auto& r : rows) used = used || r[c] != 0;
            if (!used) return false;
        }
        return true;
    }
};

inline Subspace span_of(const std::vector<std::vector<Fq>>& vecs, int s, const FieldSpec& F) {
    FMat m(static_cast<int>(vecs.size()), s);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < s; ++j) m(i, j) = vecs[i][j];
    auto piv = rref(m, F);
    Subspace out{s, {}};
    for (std::size_t r = 0; r < piv.size(); ++r) out.rows.push_back(m.row(static_cast<int>(r)));
    return out;
}

inline std::vector<Fq> apply(const FMat& psi, const std::vector<Fq>& v, const FieldSpec& F) {
    std::vector<Fq> out(static_cast<std::size_t>(psi.rows()), 0);
    for (int i = 0; i < psi.rows(); ++i) {
        Fq acc = 0;
        for (int j = 0; j < psi.cols(); ++j)
            if (psi(i, j) != 0 && v[j] != 0) acc = F.add(acc, F.mul(psi(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

/// Smallest Psi-invariant subspace containing V and v.
inline Subspace cyclic_closure(const Subspace& V, std::vector<Fq> v, const FMat& psi, const FieldSpec& F) {
    std::vector<std::vector<Fq>> gens = V.rows;
    int s = V.dim_ambient;
    for (int it = 0; it <= s; ++it) {
        gens.push_back(v);
        v = apply(psi, v, F);
    }
    return span_of(gens, s, F);
}

/// Visits every nonzero Psi-invariant subspace of F^s that contains no
/// coordinate vector. Throws SearchBudgetExceeded after `budget` closures.
inline void for_each_invariant_subspace(const FMat& psi, const FieldSpec& F, long long budget,
                                        const std::function<void(const Subspace&)>& visit) {
    int s = psi.rows();
    std::set<std::vector<Fq>> seen;
    std::vector<Subspace> frontier{Subspace{s, {}}};
    long long work = 0;
    Fq q = F.q();
    while (!frontier.empty()) {
        std::vector<Subspace> next;
        for (const Subspace& V : frontier) {
            auto piv = V.pivots();
            std::vector<int> free;
            for (int c = 0; c < s; ++c)
                if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back(c);
            int nf = static_cast<int>(free.size());
            // transversal of the projectivised quotient: vectors supported on
            // non-pivot columns whose first nonzero entry is 1
            for (int lead = 0; lead < nf; ++lead) {
                int rest = nf - lead - 1;
                std::vector<Fq> digits(static_cast<std::size_t>(rest), 0);
                for (;;) {
                    if (++work > budget) throw SearchBudgetExceeded("invariant subspace enumeration exceeded its budget");
                    std::vector<Fq> v(static_cast<std::size_t>(s), 0);
                    v[free[lead]] = 1;
                    for (int k = 0; k < rest; ++k) v[free[lead + 1 + k]] = digits[k];
                    Subspace W = cyclic_closure(V, std::move(v), psi, F);
                    if (!W.contains_coordinate_vector() && seen.insert(W.key()).second) {
                        visit(W);
                        next.push_back(std::move(W));
                    }
                    int k = 0;
                    while (k < rest && ++digits[k] == q) digits[k++] = 0;
                    if (k == rest) break;
                }
            }
        }
        frontier = std::move(next);
    }
}

/// Order of the coordinates in which Psi strictly moves every coordinate
/// forward (Psi e_a has support after a), when one exists, i.e. when the
/// directed graph of Psi is acyclic.
inline std::optional<std::vector<int>> forward_order(const FMat& psi) {
    int s = psi.rows();
    std::vector<int> indeg(static_cast<std::size_t>(s), 0), order;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (psi(i, j) != 0) {
                if (i == j) return std::nullopt;
                ++indeg[i];
            }
    std::vector<int> ready;
    for (int i = s - 1; i >= 0; --i)
        if (indeg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
        int j = ready.back();
        ready.pop_back();
        order.push_back(j);
        for (int i = s - 1; i >= 0; --i)
            if (psi(i, j) != 0 && --indeg[i] == 0) ready.push_back(i);
    }
    if (static_cast<int>(order.size()) != s) return std::nullopt;
    return order;
}

/// Same visits as for_each_invariant_subspace, for Psi with an acyclic graph.
/// In coordinates ordered by forward_order, the image of an echelon row with
/// pivot c lives after c, so W is invariant exactly when each row maps into the
/// span of the rows with later pivots. Rows are chosen from the last pivot
/// backwards and checked as they are placed.
inline void for_each_invariant_subspace_acyclic(const FMat& psi, const std::vector<int>& order, const FieldSpec& F,
                                                long long budget, const std::function<void(const Subspace&)>& visit) {
    int s = psi.rows();
    FMat P(s, s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) P(a, b) = psi(order[a], order[b]);
    Fq q = F.q();
    long long work = 0;
    std::vector<std::vector<Fq>> rows; // permuted coordinates, pivots decreasing
    std::vector<int> pivots;

    auto emit = [&]() {
        std::vector<std::vector<Fq>> orig;
        for (const auto& r : rows) {
            std::vector<Fq> v(static_cast<std::size_t>(s), 0);
            for (int a = 0; a < s; ++a) v[order[a]] = r[a];
            orig.push_back(std::move(v));
        }
        visit(span_of(orig, s, F));
    };

    std::function<void(int)> rec = [&](int limit) {
        for (int c = limit - 1; c >= 0; --c) {
            std::vector<int> free;
            for (int k = c + 1; k < s; ++k)
                if (std::find(pivots.begin(), pivots.end(), k) == pivots.end()) free.push_back(k);
            int nf = static_cast<int>(free.size());
            if (nf == 0) continue; // the row would be e_c
            // reduced image of a vector modulo the rows already placed
            auto reduced = [&](const std::vector<Fq>& v) {
                std::vector<Fq> y = apply(P, v, F);
                for (std::size_t j = 0; j < rows.size(); ++j) {
                    Fq cj = y[pivots[j]];
                    if (cj == 0) continue;
                    for (int a = 0; a < s; ++a)
                        if (rows[j][a] != 0) y[a] = F.sub(y[a], F.mul(cj, rows[j][a]));
                }
                return y;
            };
            // rows e_c + sum d_k e_{free_k} whose reduced image vanishes form
            // an affine space in d
            FMat sys(s, nf);
            for (int k = 0; k < nf; ++k) {
                std::vector<Fq> e(static_cast<std::size_t>(s), 0);
                e[free[k]] = 1;
                auto y = reduced(e);
                for (int a = 0; a < s; ++a) sys(a, k) = y[a];
            }
            std::vector<Fq> ec(static_cast<std::size_t>(s), 0);
            ec[c] = 1;
            std::vector<Fq> rhs = reduced(ec);
            for (auto& v : rhs) v = F.neg(v);
            auto part = solve(sys, rhs, F);
            if (!part) continue;
            auto ker = kernel(sys, F);
            int kd = static_cast<int>(ker.size());
            std::vector<Fq> coef(static_cast<std::size_t>(kd), 0);
            for (;;) {
                if (++work > budget) throw SearchBudgetExceeded("invariant subspace enumeration exceeded its budget");
                std::vector<Fq> d = *part;
                for (int i = 0; i < kd; ++i)
                    if (coef[i] != 0)
                        for (int k = 0; k < nf; ++k) d[k] = F.add(d[k], F.mul(coef[i], ker[i][k]));
                if (std::any_of(d.begin(), d.end(), [](Fq v) { return v != 0; })) {
                    std::vector<Fq> row(static_cast<std::size_t>(s), 0);
                    row[c] = 1;
                    for (int k = 0; k < nf; ++k) row[free[k]] = d[k];
                    rows.push_back(std::move(row));
                    pivots.push_back(c);
                    emit();
                    rec(c);
                    rows.pop_back();
                    pivots.pop_back();
                }
                int i = 0;
                while (i < kd && ++coef[i] == q) coef[i++] = 0;
                if (i == kd) break;
            }
        }
    };
    rec(s);
}

/// Dispatches to the acyclic enumerator when possible.
inline void for_each_coordinate_free_invariant_subspace(const FMat& psi, const FieldSpec& F, long long budget,
                                                        const std::function<void(const Subspace&)>& visit) {
    if (auto order = forward_order(psi))
        for_each_invariant_subspace_acyclic(psi, *order, F, budget, visit);
    else
        for_each_invariant_subspace(psi, F, budget, visit);
}

} // namespace bkmod
