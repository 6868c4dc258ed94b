#pragma once

// JSON documents for modules, extension classes and reports. Keys are sorted
// (nlohmann::json stores objects in std::map) and numbers are decimal
// integers, so dump() of a parsed canonical document reproduces it byte for
// byte.
//
// Series: {"coeffs": [[c_0 .. c_{m-1}], ...], "prec": N, "val": v} with one
// coefficient vector per exponent v .. N-1. An exact series omits "prec" and
// lists coefficients up to its last nonzero term; the certified zero is
// {"coeffs": [], "val": 0}.

#include "bkmod/classify.hpp"
#include "bkmod/cohom.hpp"
#include "bkmod/factor.hpp"
#include "bkmod/indres.hpp"
#include "bkmod/module.hpp"
#include "bkmod/qpcase.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace bkmod {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";
inline constexpr const char* kOrientation = "j+1_to_j";

namespace detail {

inline const json& member(const json& obj, const char* key) {
    if (!obj.is_object()) throw InvalidArgument(std::string("expected an object holding \"") + key + "\"");
    auto it = obj.find(key);
    if (it == obj.end()) throw InvalidArgument(std::string("missing field \"") + key + "\"");
    return *it;
}

inline int as_int(const json& v, const char* what) {
    if (!v.is_number_integer()) throw InvalidArgument(std::string(what) + " must be an integer");
    long long x = v.get<long long>();
    if (x < -(1LL << 30) || x > (1LL << 30)) throw InvalidArgument(std::string(what) + " out of range");
    return static_cast<int>(x);
}

inline std::vector<int> int_list(const json& v, const char* what) {
    if (!v.is_array()) throw InvalidArgument(std::string(what) + " must be a list");
    std::vector<int> out;
    for (const auto& e : v) out.push_back(as_int(e, what));
    return out;
}

inline json element(const FieldSpec& F, Fq a) { return F.coeffs(a); }

inline Fq element_from(const FieldSpec& F, const json& v) { return F.from_coeffs(int_list(v, "field coefficient")); }

inline void require_header(const json& doc) {
    const json& v = member(doc, "format_version");
    if (!v.is_string() || v.get<std::string>() != kFormatVersion)
        throw InvalidArgument(std::string("unsupported format_version (expected \"") + kFormatVersion + "\")");
}

inline FieldPtr field_from(const json& doc) {
    int p = as_int(member(doc, "p"), "p");
    int m = as_int(member(doc, "m"), "m");
    std::vector<int> modulus = int_list(member(doc, "modulus"), "modulus");
    if (static_cast<int>(modulus.size()) != m + 1) throw InvalidArgument("modulus must have m + 1 coefficients");
    return FieldSpec::make(p, std::move(modulus));
}

} // namespace detail

// ---- series and matrices ----

inline json to_json(const LaurentSeries& s) {
    const FieldSpec& F = *s.field();
    json c = json::array();
    for (Fq a : s.coeffs()) c.push_back(detail::element(F, a));
    json out = {{"coeffs", c}};
    if (s.is_exact()) {
        out["val"] = s.known_zero() ? 0 : s.val();
    } else {
        out["val"] = s.val();
        out["prec"] = s.prec();
    }
    return out;
}

inline LaurentSeries series_from_json(const json& v, const FieldPtr& f) {
    int val = detail::as_int(detail::member(v, "val"), "val");
    const json& cj = detail::member(v, "coeffs");
    if (!cj.is_array()) throw InvalidArgument("coeffs must be a list");
    std::vector<Fq> c;
    for (const auto& e : cj) c.push_back(detail::element_from(*f, e));
    if (!v.contains("prec")) return LaurentSeries::from_coeffs(f, val, std::move(c));
    int prec = detail::as_int(v["prec"], "prec");
    if (prec < val) throw InvalidArgument("prec below val");
    if (static_cast<int>(c.size()) != prec - val) throw InvalidArgument("coeffs must hold prec - val entries");
    return LaurentSeries::from_coeffs(f, val, std::move(c), prec);
}

inline json to_json(const LaurentMatrix& X) {
    json rows = json::array();
    for (int a = 0; a < X.rows(); ++a) {
        json row = json::array();
        for (int b = 0; b < X.cols(); ++b) row.push_back(to_json(X(a, b)));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// rows x cols matrix; pass -1 to accept any consistent shape.
inline LaurentMatrix matrix_from_json(const json& v, const FieldPtr& f, int rows = -1, int cols = -1) {
    if (!v.is_array()) throw InvalidArgument("matrix must be a list of rows");
    int nr = static_cast<int>(v.size());
    if (rows >= 0 && nr != rows) throw InvalidArgument("matrix has " + std::to_string(nr) + " rows, expected " + std::to_string(rows));
    int nc = cols;
    if (nc < 0) nc = nr == 0 ? 0 : static_cast<int>(v[0].size());
    LaurentMatrix X(f, nr, nc);
    for (int a = 0; a < nr; ++a) {
        if (!v[a].is_array() || static_cast<int>(v[a].size()) != nc) throw InvalidArgument("matrix rows must all have the same length");
        for (int b = 0; b < nc; ++b) X(a, b) = series_from_json(v[a][b], f);
    }
    return X;
}

// ---- module documents ----

inline json field_header(const FieldSpec& F) {
    return {{"format_version", kFormatVersion}, {"p", F.p()}, {"m", F.m()}, {"modulus", F.modulus()}};
}

inline json to_json(const BKModule& M) {
    json doc = field_header(*M.field());
    doc["d"] = M.d();
    doc["n"] = M.n();
    doc["orientation"] = kOrientation;
    json fr = json::array();
    for (int j = 0; j < M.d(); ++j) fr.push_back(to_json(M.frob(j)));
    doc["frobenius"] = std::move(fr);
    return doc;
}

inline BKModule module_from_json(const json& doc) {
    detail::require_header(doc);
    const json& o = detail::member(doc, "orientation");
    if (!o.is_string() || o.get<std::string>() != kOrientation)
        throw InvalidArgument(std::string("orientation must be \"") + kOrientation + "\"");
    FieldPtr f = detail::field_from(doc);
    int d = detail::as_int(detail::member(doc, "d"), "d");
    int n = detail::as_int(detail::member(doc, "n"), "n");
    if (d < 1 || n < 1) throw InvalidArgument("d and n must be positive");
    if (f->m() % d != 0) throw InvalidArgument("d must divide m");
    const json& fr = detail::member(doc, "frobenius");
    if (!fr.is_array() || static_cast<int>(fr.size()) != d) throw InvalidArgument("frobenius must hold d matrices");
    std::vector<LaurentMatrix> mats;
    for (const auto& X : fr) mats.push_back(matrix_from_json(X, f, n, n));
    return BKModule(f, d, std::move(mats));
}

/// Extension class f = (f_j) with f_j : P_j -> M_j[1/u], rows = rank M,
/// cols = rank P.
inline json extension_class_to_json(const FieldSpec& F, const std::vector<LaurentMatrix>& f) {
    json doc = field_header(F);
    doc["d"] = static_cast<int>(f.size());
    json mats = json::array();
    for (const auto& X : f) mats.push_back(to_json(X));
    doc["matrices"] = std::move(mats);
    return doc;
}

inline std::vector<LaurentMatrix> extension_class_from_json(const json& doc, const BKModule& P, const BKModule& M) {
    detail::require_header(doc);
    FieldPtr f = detail::field_from(doc);
    if (!f->same_as(*P.field())) throw InvalidArgument("extension class lives over a different field");
    int d = detail::as_int(detail::member(doc, "d"), "d");
    if (d != P.d()) throw InvalidArgument("extension class has the wrong residue degree");
    const json& mats = detail::member(doc, "matrices");
    if (!mats.is_array() || static_cast<int>(mats.size()) != d) throw InvalidArgument("matrices must hold d entries");
    std::vector<LaurentMatrix> out;
    for (const auto& X : mats) out.push_back(matrix_from_json(X, P.field(), M.n(), P.n()));
    return out;
}

inline json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string canonical(const json& doc) { return doc.dump(); }

// ---- reports ----

inline json report(const std::string& command, int precision, json result) {
    return {{"command", command}, {"precision", precision}, {"result", std::move(result)}};
}

inline json to_json(const WeightReport& rep) {
    json emb = json::array();
    for (const auto& e : rep.embeddings) {
        json grM = json::object(), grMphi = json::object();
        for (auto [i, k] : e.grM) grM[std::to_string(i)] = k;
        for (auto [i, k] : e.grMphi) grMphi[std::to_string(i)] = k;
        json one = {{"weights", e.weights}, {"gr_M", grM}, {"gr_Mphi", grMphi}, {"sd", e.sd}};
        if (e.witness) {
            one["witness"] = {{"kind", e.witness->kind == SDWitness::Kind::WeightOutOfRange ? "weight_out_of_range" : "graded_mismatch"},
                              {"index", e.witness->index}};
        }
        emb.push_back(std::move(one));
    }
    return {{"embeddings", emb}, {"sd", rep.sd()}};
}

inline json to_json(const CohomReport& c) {
    return {{"h0_dim", c.h0_dim}, {"h1sd_dim", c.h1sd_dim}, {"chi", c.chi}, {"method", c.method}, {"agreement", c.agreement}};
}

inline json to_json(const ExtReport& e) { return {{"ext1_sd_dim", e.ext1_sd}, {"hom_dim", e.hom}, {"count", e.count}}; }

inline json to_json(const RankOneData& r) {
    const FieldSpec& F = *r.field;
    json out = {{"D", r.D}, {"r", r.r}, {"x_total", detail::element(F, r.x_total)},
                {"rotation_class", rotation_representative(r.r)}};
    if (r.x) out["x"] = detail::element(F, *r.x);
    return out;
}

inline json to_json(const EnumerationStats& s) {
    return {{"patterns", s.patterns},
            {"patterns_weight_pruned", s.patterns_weight_pruned},
            {"patterns_unstable", s.patterns_unstable},
            {"subspaces_visited", s.subspaces_visited},
            {"surjectivity_pruned", s.surjectivity_pruned},
            {"lattices", s.lattices},
            {"sd", s.sd},
            {"proper_sd", s.proper_sd},
            {"delta_mismatches", s.delta_mismatches},
            {"weight_constraint_violations", s.weight_constraint_violations}};
}

inline json to_json(const ClassificationFinding& fd) {
    const FieldSpec& F = *fd.rank_one.field;
    json V = json::array();
    for (const auto& row : fd.subspace) {
        json r = json::array();
        for (Fq a : row) r.push_back(detail::element(F, a));
        V.push_back(std::move(r));
    }
    json out = {{"ambient", to_json(fd.rank_one)},
                {"subspace", V},
                {"delta", fd.delta},
                {"sd", fd.sd},
                {"proper", fd.proper},
                {"ambient_irreducible", fd.ambient_irreducible},
                {"weights", to_json(fd.weight_report)},
                {"counterexample", fd.counterexample()}};
    if (fd.proper && fd.sd) {
        if (fd.induced_as)
            out["induced_as"] = {{"r", *fd.induced_as}, {"x_total", detail::element(F, fd.induced_x_total)}};
        else
            out["induced_as"] = nullptr;
    }
    return out;
}

inline json to_json(const SweepReport& rep) {
    json cells = json::array();
    for (const auto& c : rep.cells)
        cells.push_back({{"D", c.D}, {"r", c.r}, {"x_total", detail::element(*FieldSpec::standard(rep.p, c.D), c.x_total)}, {"irreducible", c.irreducible},
                         {"enumerated", c.enumerated}, {"stats", to_json(c.stats)}});
    json proper = json::array(), bad = json::array();
    for (const auto& fd : rep.proper_sd) proper.push_back(to_json(fd));
    for (const auto& fd : rep.counterexamples) bad.push_back(to_json(fd));
    return {{"mode", sweep_mode_name(rep.mode)}, {"p", rep.p},       {"max_rank", rep.max_rank},
            {"cells", cells},                    {"proper_sd", proper}, {"counterexamples", bad},
            {"totals", to_json(rep.totals)}};
}

inline json to_json(const DimformRow& row, const FieldSpec& F) {
    return {{"d", row.d}, {"i", row.i}, {"j", row.j}, {"x", detail::element(F, row.x)},
            {"hom", row.ext.hom}, {"ext", row.ext.ext1_sd}, {"count", row.ext.count}};
}

inline json to_json(const QpCaseResult& res) {
    const auto& prm = res.params;
    const FieldSpec& F = *res.lattice_frobenius.field();
    return {{"case", qpcase_name(res.which)},
            {"params", {{"alpha", detail::element(F, prm.alpha)}, {"beta", detail::element(F, prm.beta)}, {"x", detail::element(F, prm.x)}, {"r1", prm.r1}, {"r2", prm.r2}, {"r3", prm.r3}}},
            {"r", res.r},
            {"weights", res.weights},
            {"sd", res.sd},
            {"ambient_irreducible", res.ambient_irreducible},
            {"displayed_matches", res.displayed_matches},
            {"product_matches", res.product_matches},
            {"diagnosis_holds", res.diagnosis_holds}};
}

} // namespace bkmod
