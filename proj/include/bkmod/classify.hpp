#pragma once

// Intermediate lattices u f_*N <= L <= f_*N for rank-one N over l = F_{p^D},
// restricted down to F_p. A lattice is L = V + u f_*N for an F-subspace V of
// the fiber F^D; it is phi-stable exactly when V is stable under
// Phi0 = (Frobenius matrix mod u). Writing S0 for the coordinates whose basis
// vector lies in V (delta = 0) and S1 for the rest, V = span(e_S0) + W with W
// inside F^{S1}, W stable under Psi = pr_{S1} Phi0 and free of coordinate
// vectors.

#include "bkmod/cohom.hpp"
#include "bkmod/factor.hpp"
#include "bkmod/indres.hpp"
#include "bkmod/lattice.hpp"
#include "bkmod/subspaces.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace bkmod {

/// f_* of phi(e_{t+1}) = x_t u^{r_t} e_t over F_p, presented directly with a
/// single embedding: column t+1 of the Frobenius matrix is x_t u^{r_t} e_t.
inline BKModule restricted_rank_one(const FieldPtr& f, const std::vector<Fq>& x, const std::vector<int>& r) {
    int D = static_cast<int>(r.size());
    if (D < 1 || static_cast<int>(x.size()) != D) throw InvalidArgument("restricted_rank_one: need one unit per exponent");
    LaurentMatrix X(f, D, D);
    for (int t = 0; t < D; ++t) {
        if (x[t] == 0) throw InvalidArgument("restricted_rank_one: units must be nonzero");
        X(t, (t + 1) % D) = LaurentSeries::monomial(f, x[t], r[t]);
    }
    return BKModule(f, 1, {X});
}

/// Ambient f_*N in total form (x_total at step 0, 1 elsewhere).
struct Ambient {
    RankOneData data;
    BKModule module;
    FMat phi0;
    bool irreducible = true;
};

inline Ambient make_ambient(const FieldPtr& f, const std::vector<int>& r, Fq x_total) {
    int D = static_cast<int>(r.size());
    std::vector<Fq> x(static_cast<std::size_t>(D), 1);
    x[0] = x_total;
    RankOneData data{f, D, r, x_total, std::nullopt};
    auto roots = f->roots(x_total, D);
    if (!roots.empty()) data.x = roots.front();
    BKModule A = restricted_rank_one(f, x, r);
    FMat phi0(D, D);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) phi0(a, b) = A.frob(0)(a, b).coeff(0);
    bool irr = is_irreducible_restricted(data);
    return Ambient{std::move(data), std::move(A), std::move(phi0), irr};
}

struct ClassificationFinding {
    RankOneData rank_one;
    std::vector<std::vector<Fq>> subspace; // RREF rows of V inside F^D
    std::vector<int> delta;
    bool sd = false;
    bool ambient_irreducible = true;
    WeightReport weight_report;
    bool proper = false;
    // for proper SD findings: some f_*N' (N' rank one, SD) isomorphic to the lattice
    std::optional<std::vector<int>> induced_as;
    Fq induced_x_total = 0;

    bool counterexample() const { return proper && sd && ambient_irreducible; }

    /// All lattice weights lie in [lo, hi].
    bool weights_within(int lo, int hi) const {
        for (const auto& e : weight_report.embeddings)
            for (int w : e.weights)
                if (w < lo || w > hi) return false;
        return true;
    }

    std::tuple<int, std::vector<int>, Fq, std::vector<Fq>> order_key() const {
        std::vector<Fq> k{static_cast<Fq>(subspace.size())};
        for (const auto& row : subspace) k.insert(k.end(), row.begin(), row.end());
        return {rank_one.D, rank_one.r, rank_one.x_total, k};
    }
};

inline void sort_findings(std::vector<ClassificationFinding>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.order_key() < b.order_key(); });
}

/// Builds and tests the lattice V + u A. Throws InvalidArgument when V is not
/// Phi0-stable.
inline ClassificationFinding evaluate_subspace(const Ambient& amb, const std::vector<std::vector<Fq>>& V) {
    int D = amb.data.D;
    Subspace S = span_of(V, D, *amb.data.field);
    Lattice L = from_subspace(amb.module, {S.rows});
    ClassificationFinding out;
    out.rank_one = amb.data;
    out.subspace = S.rows;
    out.ambient_irreducible = amb.irreducible;
    out.proper = S.dim() < D;
    BKModule M = to_module(L);
    out.weight_report = is_strongly_divisible(M);
    out.sd = out.weight_report.sd();
    out.delta = delta_profile(L);
    return out;
}

/// r_t and r_t + p delta_{t+1} - delta_t must lie in [0, p] for any strongly
/// divisible lattice with this delta-profile.
inline bool delta_pattern_admissible(const std::vector<int>& r, const std::vector<int>& delta, int p) {
    int D = static_cast<int>(r.size());
    for (int t = 0; t < D; ++t) {
        int w = r[t] + p * delta[(t + 1) % D] - delta[t];
        if (r[t] < 0 || r[t] > p || w < 0 || w > p) return false;
    }
    return true;
}

struct EnumerationStats {
    long long patterns = 0;
    long long patterns_weight_pruned = 0;
    long long patterns_unstable = 0;
    long long subspaces_visited = 0;
    long long surjectivity_pruned = 0;
    long long lattices = 0;
    long long sd = 0;
    long long proper_sd = 0;
    long long delta_mismatches = 0;
    long long weight_constraint_violations = 0;

    EnumerationStats& operator+=(const EnumerationStats& o) {
        patterns += o.patterns;
        patterns_weight_pruned += o.patterns_weight_pruned;
        patterns_unstable += o.patterns_unstable;
        subspaces_visited += o.subspaces_visited;
        surjectivity_pruned += o.surjectivity_pruned;
        lattices += o.lattices;
        sd += o.sd;
        proper_sd += o.proper_sd;
        delta_mismatches += o.delta_mismatches;
        weight_constraint_violations += o.weight_constraint_violations;
        return *this;
    }
};

struct EnumerationOptions {
    long long budget = 20'000'000;
    bool keep_all = false; // otherwise only findings that are sd are kept
};

struct Enumeration {
    std::vector<ClassificationFinding> findings;
    EnumerationStats stats;
};

/// Every lattice u A <= L <= A with L/uA surjecting onto each coordinate, for
/// A = f_*N with the given r and x_total.
inline Enumeration enumerate_lattices(const Ambient& amb, const EnumerationOptions& opt = {}) {
    const FieldSpec& F = *amb.data.field;
    const std::vector<int>& r = amb.data.r;
    int D = amb.data.D, p = F.p();
    for (int v : r)
        if (v < 0 || v > p) throw InvalidArgument("enumerate_lattices: exponents must lie in [0, p]");
    Enumeration out;
    EnumerationStats& st = out.stats;

    auto record = [&](ClassificationFinding fd, const std::vector<int>& pattern) {
        ++st.lattices;
        if (fd.delta != pattern) ++st.delta_mismatches;
        if (fd.sd) {
            ++st.sd;
            if (fd.proper) ++st.proper_sd;
            const auto& w = fd.weight_report.embeddings.front().weights;
            for (int t = 0; t < D; ++t) {
                int a = r[t], b = r[t] + p * fd.delta[(t + 1) % D] - fd.delta[t];
                if (std::find(w.begin(), w.end(), a) == w.end() || std::find(w.begin(), w.end(), b) == w.end())
                    ++st.weight_constraint_violations;
            }
        }
        if (opt.keep_all || fd.sd) out.findings.push_back(std::move(fd));
    };

    for (unsigned mask = 0; mask < (1u << D); ++mask) {
        ++st.patterns;
        std::vector<int> delta(static_cast<std::size_t>(D));
        std::vector<int> s0, s1;
        for (int t = 0; t < D; ++t) {
            bool in_v = (mask >> t) & 1u;
            delta[t] = in_v ? 0 : 1;
            (in_v ? s0 : s1).push_back(t);
        }
        if (!delta_pattern_admissible(r, delta, p)) {
            ++st.patterns_weight_pruned;
            continue;
        }
        // Phi0 e_t is a multiple of e_{t-1}; it must stay inside span(e_S0)
        bool stable = true;
        for (int t : s0) {
            int prev = (t + D - 1) % D;
            if (amb.phi0(prev, t) != 0 && delta[prev] != 0) stable = false;
        }
        if (!stable) {
            ++st.patterns_unstable;
            continue;
        }
        auto embed = [&](const std::vector<Fq>& w) {
            std::vector<std::vector<Fq>> V;
            for (int t : s0) {
                std::vector<Fq> e(static_cast<std::size_t>(D), 0);
                e[t] = 1;
                V.push_back(std::move(e));
            }
            if (!w.empty()) {
                std::vector<Fq> v(static_cast<std::size_t>(D), 0);
                for (std::size_t i = 0; i < s1.size(); ++i) v[s1[i]] = w[i];
                V.push_back(std::move(v));
            }
            return V;
        };
        if (s1.empty()) {
            record(evaluate_subspace(amb, embed({})), delta);
            continue;
        }
        int s = static_cast<int>(s1.size());
        FMat psi(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) psi(i, j) = amb.phi0(s1[i], s1[j]);
        for_each_coordinate_free_invariant_subspace(psi, F, opt.budget, [&](const Subspace& W) {
            ++st.subspaces_visited;
            if (!W.all_coordinates_used()) {
                ++st.surjectivity_pruned;
                return;
            }
            auto V = embed({});
            for (const auto& row : W.rows) {
                auto v = embed(row);
                V.push_back(v.back());
            }
            record(evaluate_subspace(amb, V), delta);
        });
    }
    sort_findings(out.findings);
    return out;
}

/// Lexicographically least rotation.
inline std::vector<int> rotation_representative(const std::vector<int>& r) {
    std::vector<int> best = r;
    for (std::size_t k = 1; k < r.size(); ++k) {
        std::vector<int> rot(r.begin() + static_cast<long>(k), r.end());
        rot.insert(rot.end(), r.begin(), r.begin() + static_cast<long>(k));
        best = std::min(best, rot);
    }
    return best;
}

/// Rotation-class representatives of [lo, hi]^D in increasing order.
inline std::vector<std::vector<int>> rotation_classes(int D, int lo, int hi) {
    std::vector<std::vector<int>> out;
    std::vector<int> r(static_cast<std::size_t>(D), lo);
    for (;;) {
        if (rotation_representative(r) == r) out.push_back(r);
        int k = D - 1;
        while (k >= 0 && r[k] == hi) r[k--] = lo;
        if (k < 0) break;
        ++r[k];
    }
    return out;
}

/// Tame exponent sum r_j p^j mod p^D - 1.
inline long long tame_exponent(const std::vector<int>& r, int p) {
    long long modulus = 1;
    for (std::size_t i = 0; i < r.size(); ++i) modulus *= p;
    modulus -= 1;
    long long E = 0, pj = 1;
    for (int v : r) {
        E = ((E + v * pj) % modulus + modulus) % modulus;
        pj = pj * p % modulus;
    }
    return E;
}

/// Exponent vectors r' in [0,p]^D whose restricted rank-one has the same
/// restricted generic fiber as r (E(r') = p^k E(r) for some k) and whose
/// sorted entries equal `weights`. An SD module isomorphic to some f_*N'
/// must have one; an empty result certifies that it is not of that form.
inline std::vector<std::vector<int>> induced_weight_matches(const std::vector<int>& r, int p, std::vector<int> weights) {
    int D = static_cast<int>(r.size());
    std::sort(weights.begin(), weights.end());
    long long modulus = 1;
    for (int i = 0; i < D; ++i) modulus *= p;
    modulus -= 1;
    std::vector<long long> targets;
    long long E = tame_exponent(r, p);
    for (int k = 0; k < D; ++k) {
        targets.push_back(E);
        E = E * p % modulus;
    }
    std::vector<std::vector<int>> out;
    std::vector<int> rp(static_cast<std::size_t>(D), 0);
    for (;;) {
        auto sorted = rp;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == weights &&
            std::find(targets.begin(), targets.end(), tame_exponent(rp, p)) != targets.end())
            out.push_back(rp);
        int k = D - 1;
        while (k >= 0 && rp[k] == p) rp[k--] = 0;
        if (k < 0) break;
        ++rp[k];
    }
    return out;
}

/// Searches for N' with f_*N' isomorphic to the lattice module M inside the
/// irreducible ambient. The generic fibers agree, so a nonzero morphism
/// M -> f_*N' is injective, and it is onto once the weight sums agree; such
/// r' are listed by induced_weight_matches.
inline std::optional<std::pair<std::vector<int>, Fq>> induced_isomorph(const BKModule& M, const RankOneData& data) {
    const FieldPtr& f = data.field;
    auto w = is_strongly_divisible(M).embeddings.front().weights;
    for (const auto& rp : induced_weight_matches(data.r, f->p(), w))
        for (Fq x = 1; x < f->q(); ++x)
            if (h0_dim(hom_module(M, make_ambient(f, rp, x).module)) > 0) return std::make_pair(rp, x);
    return std::nullopt;
}

inline void attach_induced(ClassificationFinding& fd) {
    Ambient amb = make_ambient(fd.rank_one.field, fd.rank_one.r, fd.rank_one.x_total);
    BKModule M = to_module(from_subspace(amb.module, {fd.subspace}));
    if (auto iso = induced_isomorph(M, fd.rank_one)) {
        fd.induced_as = iso->first;
        fd.induced_x_total = iso->second;
    }
}

enum class SweepMode { Qpcase, FLRange, Explore };

inline const char* sweep_mode_name(SweepMode m) {
    switch (m) {
    case SweepMode::Qpcase: return "qpcase";
    case SweepMode::FLRange: return "fl-range";
    case SweepMode::Explore: return "rank5-explore";
    }
    return "?";
}

struct SweepCell {
    int D = 1;
    std::vector<int> r;
    Fq x_total = 1;
    bool irreducible = true;
    bool enumerated = false; // reducible ambients cannot produce a counterexample and are skipped
    EnumerationStats stats;
};

struct SweepReport {
    SweepMode mode = SweepMode::Qpcase;
    int p = 2;
    int max_rank = 1;
    std::vector<SweepCell> cells;
    std::vector<ClassificationFinding> proper_sd; // irreducible ambient only
    std::vector<ClassificationFinding> counterexamples;
    EnumerationStats totals;
};

/// A finding that contradicts the statement checked by the sweep.
inline bool violates(const ClassificationFinding& fd, SweepMode mode, int p) {
    if (!fd.counterexample()) return false;
    return mode != SweepMode::FLRange || fd.weights_within(0, p - 1);
}

/// All D <= max_rank, all r in [0,p]^D up to rotation, x_total in {1, g} with
/// g a generator of F_{p^D}^x, every admissible subspace.
inline SweepReport sweep(int p, int max_rank, SweepMode mode, const EnumerationOptions& opt = {}) {
    if (!FieldSpec::is_prime(p)) throw InvalidArgument("sweep: p must be prime");
    if (max_rank < 1) throw InvalidArgument("sweep: max_rank must be positive");
    SweepReport rep;
    rep.mode = mode;
    rep.p = p;
    rep.max_rank = max_rank;
    for (int D = 1; D <= max_rank; ++D) {
        FieldPtr f = FieldSpec::standard(p, D);
        std::vector<Fq> xs{1};
        if (f->generator() != 1) xs.push_back(f->generator());
        for (const auto& r : rotation_classes(D, 0, p))
            for (Fq x : xs) {
                Ambient amb = make_ambient(f, r, x);
                SweepCell cell{D, r, x, amb.irreducible, false, {}};
                if (amb.irreducible) {
                    cell.enumerated = true;
                    Enumeration en = enumerate_lattices(amb, opt);
                    cell.stats = en.stats;
                    for (auto& fd : en.findings) {
                        if (fd.proper && fd.sd) attach_induced(fd);
                        if (violates(fd, mode, p)) rep.counterexamples.push_back(fd);
                        if (fd.proper && fd.sd) rep.proper_sd.push_back(std::move(fd));
                    }
                }
                rep.totals += cell.stats;
                rep.cells.push_back(std::move(cell));
            }
    }
    sort_findings(rep.proper_sd);
    sort_findings(rep.counterexamples);
    return rep;
}

inline std::string describe(const ClassificationFinding& fd) {
    std::string s = "D=" + std::to_string(fd.rank_one.D) + " r=(";
    for (std::size_t i = 0; i < fd.rank_one.r.size(); ++i) s += (i ? "," : "") + std::to_string(fd.rank_one.r[i]);
    s += ") x_total=" + std::to_string(fd.rank_one.x_total) + " dim V=" + std::to_string(fd.subspace.size());
    return s;
}

inline SweepReport verify_qpcase(int p, int max_rank = 4, const EnumerationOptions& opt = {}) {
    SweepReport rep = sweep(p, max_rank, SweepMode::Qpcase, opt);
    if (!rep.counterexamples.empty())
        throw CounterexampleFound("proper strongly divisible lattice with irreducible ambient: " + describe(rep.counterexamples.front()));
    return rep;
}

inline SweepReport verify_fl_range(int p, int max_rank, const EnumerationOptions& opt = {}) {
    SweepReport rep = sweep(p, max_rank, SweepMode::FLRange, opt);
    if (!rep.counterexamples.empty())
        throw CounterexampleFound("proper strongly divisible lattice with weights in [0, p-1]: " + describe(rep.counterexamples.front()));
    return rep;
}

} // namespace bkmod
