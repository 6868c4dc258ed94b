#pragma once

// H^0 = ker(phi - 1 : M -> M[1/u]), H^1_SD = coker(phi - 1 : F^0M -> M), the
// Euler characteristic chi = dim H^1_SD - dim H^0, Ext^1_SD between strongly
// divisible modules, and the coboundary reduction that makes an extension
// class integral.

#include "bkmod/factor.hpp"
#include "bkmod/linalg.hpp"
#include "bkmod/module.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bkmod {

/// Smallest visible valuation over every Frobenius entry.
inline int module_min_valuation(const BKModule& M) {
    int v = LaurentSeries::kInfinite;
    for (int j = 0; j < M.d(); ++j) v = std::min(v, M.frob(j).min_valuation());
    return v;
}

/// Coefficient of u^e in row a of X_j phi(x) as a function of the unknown
/// coefficient (s, k) of x: X_j(a, s) at exponent e - p k.
inline Fq phi_coeff(const LaurentMatrix& X, int a, int s, int e, int k, int p) { return X(a, s).coeff(e - p * k); }

/// dim H^0. A fixed vector has all coefficients of degree >= D determined by
/// lower ones (D = floor(V/(p-1)) + 1 where -V bounds the Frobenius
/// valuations), so the kernel of the system truncated below D is exact.
inline int h0_dim(const BKModule& M) {
    const FieldSpec& F = *M.field();
    int p = M.p(), d = M.d(), n = M.n();
    int V = std::max(0, -module_min_valuation(M));
    int D = V / (p - 1) + 1;
    auto idx = [&](int j, int s, int k) { return (j * n + s) * D + k; };
    FMat sys(0, d * n * D);
    for (int j = 0; j < d; ++j) {
        const LaurentMatrix& X = M.frob(j);
        int src = (j + 1) % d;
        for (int a = 0; a < n; ++a)
            for (int e = -V; e < D; ++e) {
                int row = sys.add_row();
                for (int s = 0; s < n; ++s)
                    for (int k = 0; k < D; ++k) {
                        if (e - p * k < -V) break;
                        Fq c = phi_coeff(X, a, s, e, k, p);
                        if (c != 0) sys(row, idx(src, s, k)) = F.add(sys(row, idx(src, s, k)), c);
                    }
                if (e >= 0) sys(row, idx(j, a, e)) = F.sub(sys(row, idx(j, a, e)), 1);
            }
    }
    return static_cast<int>(kernel(std::move(sys), F).size());
}

/// Total dim gr^i(M_k) over all embeddings.
inline std::map<int, int> graded_total(const BKModule& M) {
    std::map<int, int> g;
    for (int t = 0; t < M.d(); ++t)
        for (auto [i, dim] : embedding_report(M, t).grM) g[i] += dim;
    return g;
}

/// Number of n >= 0 with s + n(p-1) < 0 and p not dividing s + n(p-1).
inline int chi_multiplicity(int s, int p) {
    int c = 0;
    for (int i = s; i < 0; i += p - 1)
        if (i % p != 0) ++c;
    return c;
}

/// chi = sum over n >= 0 of the graded dimensions gr^{i - n(p-1)}(M_k) with
/// i < 0 and p not dividing i.
inline int chi(const BKModule& M) {
    int total = 0;
    for (auto [s, dim] : graded_total(M)) total += dim * chi_multiplicity(s, M.p());
    return total;
}

/// chi(M) - chi(uM) predicted from the graded pieces of M_k alone.
inline int chi_step(const BKModule& M) {
    int total = 0;
    for (auto [i, dim] : graded_total(M))
        if (i < 0 && i % M.p() != 0) total += dim;
    return total;
}

/// dim H^1_SD through the truncated cokernel. With n0 past the point where
/// u^{n0}M has all weights >= 1, phi - 1 maps u^{n0}M onto itself, so the
/// cokernel equals that of F^0M/u^{n0}M -> M/u^{n0}M. Representatives of
/// F^0M mod u^{n0} are polynomials of degree < n0.
inline int h1sd_cokernel(const BKModule& M) {
    const FieldSpec& F = *M.field();
    int p = M.p(), d = M.d(), n = M.n();
    int wmin = LaurentSeries::kInfinite;
    for (int t = 0; t < d; ++t) wmin = std::min(wmin, weight_multiset(M, t).front());
    int n0 = 0;
    while (wmin + n0 * (p - 1) < 1) ++n0;
    n0 += 1;
    int V = std::max(0, -module_min_valuation(M));
    int unknowns = d * n * n0;
    auto idx = [&](int j, int s, int k) { return (j * n + s) * n0 + k; };
    FMat cons(0, unknowns), map(0, unknowns);
    for (int j = 0; j < d; ++j) {
        const LaurentMatrix& X = M.frob(j);
        int src = (j + 1) % d;
        for (int a = 0; a < n; ++a)
            for (int e = -V; e < n0; ++e) {
                FMat& target = e < 0 ? cons : map;
                int row = target.add_row();
                for (int s = 0; s < n; ++s)
                    for (int k = 0; k < n0; ++k) {
                        if (e - p * k < -V) break;
                        Fq c = phi_coeff(X, a, s, e, k, p);
                        if (c != 0) target(row, idx(src, s, k)) = F.add(target(row, idx(src, s, k)), c);
                    }
                if (e >= 0) target(row, idx(j, a, e)) = F.sub(target(row, idx(j, a, e)), 1);
            }
    }
    auto basis = kernel(std::move(cons), F);
    std::vector<std::vector<Fq>> image;
    for (const auto& b : basis) {
        std::vector<Fq> y(static_cast<std::size_t>(map.rows()), 0);
        for (int r = 0; r < map.rows(); ++r) {
            Fq acc = 0;
            for (int c = 0; c < unknowns; ++c)
                if (map(r, c) != 0 && b[c] != 0) acc = F.add(acc, F.mul(map(r, c), b[c]));
            y[r] = acc;
        }
        image.push_back(std::move(y));
    }
    return unknowns - span_rank(image, map.rows(), F);
}

struct CohomReport {
    int h0_dim = 0;
    int h1sd_dim = 0;
    int chi = 0;
    std::string method = "both";
    bool agreement = true;
};

/// H^1_SD by the chi formula (h0 + chi) and by the truncated cokernel; the two
/// must agree.
inline CohomReport cohomology(const BKModule& M) {
    CohomReport rep;
    rep.h0_dim = h0_dim(M);
    rep.chi = chi(M);
    int formula = rep.h0_dim + rep.chi;
    int cok = h1sd_cokernel(M);
    rep.agreement = formula == cok;
    if (!rep.agreement)
        throw MethodDisagreement("h1sd: formula gives " + std::to_string(formula) + ", cokernel gives " +
                                 std::to_string(cok));
    rep.h1sd_dim = cok;
    return rep;
}

inline int h1sd_dim(const BKModule& M) { return cohomology(M).h1sd_dim; }

struct ExtReport {
    int ext1_sd = 0;
    int hom = 0;
    int count = 0; // sum over embeddings of #{(i, j) : i - j < 0}
};

inline int dimform_count(const BKModule& P, const BKModule& M) {
    int count = 0;
    for (int t = 0; t < P.d(); ++t) {
        auto wp = weight_multiset(P, t), wm = weight_multiset(M, t);
        for (int i : wm)
            for (int j : wp)
                if (i - j < 0) ++count;
    }
    return count;
}

/// dim Ext^1_SD(P, M) = dim H^1_SD(Hom(P, M)), checked against
/// dim Ext^1_SD - dim Hom = sum over embeddings of #{i - j < 0}.
inline ExtReport ext1_sd(const BKModule& P, const BKModule& M) {
    if (!is_strongly_divisible(P).sd()) throw NotStronglyDivisible("ext1_sd: P is not strongly divisible");
    if (!is_strongly_divisible(M).sd()) throw NotStronglyDivisible("ext1_sd: M is not strongly divisible");
    BKModule H = hom_module(P, M);
    CohomReport c = cohomology(H);
    ExtReport rep{c.h1sd_dim, c.h0_dim, dimform_count(P, M)};
    if (rep.ext1_sd - rep.hom != rep.count)
        throw FormulaMismatch("ext1_sd - hom = " + std::to_string(rep.ext1_sd - rep.hom) + " but the weight count is " +
                              std::to_string(rep.count));
    return rep;
}

inline int ext1_sd_dim(const BKModule& P, const BKModule& M) { return ext1_sd(P, M).ext1_sd; }

/// phi acting on g in Hom(P, M): component j is X_M[j] phi(G_{j+1}) X_P[j]^{-1}.
inline std::vector<LaurentMatrix> hom_frobenius(const BKModule& P, const BKModule& M, const std::vector<LaurentMatrix>& g) {
    std::vector<LaurentMatrix> out;
    int d = P.d();
    for (int j = 0; j < d; ++j) out.push_back(M.frob(j) * g[(j + 1) % d].frobenius() * inverse(P.frob(j)));
    return out;
}

/// f + phi(g) - g.
inline std::vector<LaurentMatrix> apply_coboundary(const BKModule& P, const BKModule& M,
                                                   const std::vector<LaurentMatrix>& f,
                                                   const std::vector<LaurentMatrix>& g) {
    auto pg = hom_frobenius(P, M, g);
    std::vector<LaurentMatrix> out;
    for (std::size_t j = 0; j < f.size(); ++j) out.push_back(f[j] + pg[j] - g[j]);
    return out;
}

/// An integral g with f + phi(g) - g integral, built from an adapted basis
/// n_i of P (X_P phi(n_i) = u^{r_i} z_i) by solving
/// X_M phi(m_i) + f X_P phi(n_i) in u^{r_i} M and sending n_i to m_i.
/// Returns nothing exactly when no such m_i exists, i.e. when the extension
/// built from f is not strongly divisible.
inline std::optional<std::vector<LaurentMatrix>> reduce_coboundary(const BKModule& P, const BKModule& M,
                                                                   const std::vector<LaurentMatrix>& f) {
    require_compatible(P, M);
    if (!is_strongly_divisible(P).sd()) throw NotStronglyDivisible("reduce_coboundary: P is not strongly divisible");
    if (!is_strongly_divisible(M).sd()) throw NotStronglyDivisible("reduce_coboundary: M is not strongly divisible");
    const FieldPtr& fld = P.field();
    const FieldSpec& F = *fld;
    int p = P.p(), d = P.d(), nP = P.n(), nM = M.n();
    std::vector<LaurentMatrix> g(static_cast<std::size_t>(d), LaurentMatrix(fld, nM, nP));
    for (int tau = 0; tau < d; ++tau) {
        AdaptedBasis ab = adapted_basis(P, tau);
        const LaurentMatrix& XM = M.frob(tau);
        LaurentMatrix b = f[tau] * P.frob(tau) * ab.basis.frobenius();
        int vM = std::min(0, XM.min_valuation());
        LaurentMatrix mcols(fld, nM, nP);
        for (int i = 0; i < nP; ++i) {
            int ri = ab.r[i];
            int c = std::max(1, (ri - vM + p - 1) / p);
            int lo = std::min(vM, ri);
            for (int a = 0; a < nM; ++a)
                if (b(a, i).has_exact_valuation()) lo = std::min(lo, b(a, i).val());
            FMat sys(0, nM * c);
            std::vector<Fq> rhs;
            for (int a = 0; a < nM; ++a)
                for (int e = lo; e < ri; ++e) {
                    int row = sys.add_row();
                    for (int s = 0; s < nM; ++s)
                        for (int k = 0; k < c; ++k) sys(row, s * c + k) = XM(a, s).coeff(e - p * k);
                    rhs.push_back(F.neg(b(a, i).coeff(e)));
                }
            auto sol = solve(sys, rhs, F);
            if (!sol) return std::nullopt;
            for (int s = 0; s < nM; ++s) {
                std::vector<Fq> poly(sol->begin() + s * c, sol->begin() + (s + 1) * c);
                mcols(s, i) = LaurentSeries::polynomial(fld, std::move(poly));
            }
        }
        g[(tau + 1) % d] = mcols * inverse(ab.basis);
    }
    return g;
}

struct DimformRow {
    int d = 1;
    std::vector<int> i; // weights of M
    std::vector<int> j; // weights of P
    Fq x = 1;           // unit of M; P has unit 1
    ExtReport ext;
};

/// Every ordered pair of rank-one strongly divisible modules over F_{p^d}
/// with weights in [0,p]^d, for d <= max_d. Only the ratio of the units
/// matters, so P carries x = 1 and M runs over x in {1, g}. ext1_sd throws
/// on any disagreement.
inline std::vector<DimformRow> verify_dimform(int p, int max_d) {
    if (!FieldSpec::is_prime(p)) throw InvalidArgument("verify_dimform: p must be prime");
    if (max_d < 1) throw InvalidArgument("verify_dimform: max_d must be positive");
    std::vector<DimformRow> rows;
    for (int d = 1; d <= max_d; ++d) {
        FieldPtr f = FieldSpec::standard(p, d);
        std::vector<Fq> xs{1};
        if (f->generator() != 1) xs.push_back(f->generator());
        std::vector<std::vector<int>> ws;
        std::vector<int> w(static_cast<std::size_t>(d), 0);
        for (;;) {
            ws.push_back(w);
            int k = d - 1;
            while (k >= 0 && ++w[k] > p) w[k--] = 0;
            if (k < 0) break;
        }
        for (const auto& wi : ws)
            for (const auto& wj : ws)
                for (Fq x : xs) {
                    BKModule M = rank_one(f, x, wi), P = rank_one(f, 1, wj);
                    rows.push_back({d, wi, wj, x, ext1_sd(P, M)});
                }
    }
    return rows;
}

} // namespace bkmod
