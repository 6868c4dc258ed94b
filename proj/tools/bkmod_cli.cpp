// bkmod: batch front end. Every command prints one JSON report on stdout and
// a short human summary on stderr.
//
// exit codes: 0 ok, 2 malformed input, 3 insufficient precision,
// 4 counterexample or mismatch, 5 search budget exceeded.

#include "bkmod/bkmod.hpp"
#include "bkmod/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

using namespace bkmod;

namespace {

enum Exit { kOk = 0, kMalformed = 2, kPrecision = 3, kMismatch = 4, kBudget = 5 };

struct Context {
    std::string command;
    std::optional<int> precision; // --precision
    std::ostream& log = std::cerr;
};

BKModule load_module(const std::string& path, const Context& ctx) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    BKModule M = module_from_json(parse_document(ss.str()));
    if (ctx.precision) M = truncated(M, *ctx.precision);
    return M;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

int working_precision(const Context& ctx, int fallback) { return ctx.precision ? *ctx.precision : fallback; }

void emit(const Context& ctx, int precision, json result) {
    std::cout << canonical(report(ctx.command, precision, std::move(result))) << "\n";
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return "(" + s + ")";
}

// ---- module commands ----

int cmd_weights(const Context& ctx, const std::string& path) {
    BKModule M = load_module(path, ctx);
    WeightReport rep = is_strongly_divisible(M);
    for (int t = 0; t < M.d(); ++t) ctx.log << "embedding " << t << ": weights " << join(rep.embeddings[t].weights) << "\n";
    emit(ctx, working_precision(ctx, M.default_precision()), to_json(rep));
    return kOk;
}

int cmd_sd_check(const Context& ctx, const std::string& path) {
    BKModule M = load_module(path, ctx);
    WeightReport rep = is_strongly_divisible(M);
    ctx.log << (rep.sd() ? "strongly divisible" : "not strongly divisible") << "\n";
    emit(ctx, working_precision(ctx, M.default_precision()), to_json(rep));
    return kOk;
}

int cmd_h0(const Context& ctx, const std::string& path) {
    BKModule M = load_module(path, ctx);
    int h = h0_dim(M);
    ctx.log << "dim H^0 = " << h << "\n";
    emit(ctx, working_precision(ctx, M.default_precision()), {{"h0_dim", h}});
    return kOk;
}

int cmd_h1sd(const Context& ctx, const std::string& path) {
    BKModule M = load_module(path, ctx);
    CohomReport c = cohomology(M);
    ctx.log << "dim H^0 = " << c.h0_dim << ", dim H^1_SD = " << c.h1sd_dim << ", chi = " << c.chi << "\n";
    emit(ctx, working_precision(ctx, M.default_precision()), to_json(c));
    return kOk;
}

int cmd_ext_dim(const Context& ctx, const std::string& pp, const std::string& mp) {
    BKModule P = load_module(pp, ctx), M = load_module(mp, ctx);
    ExtReport e = ext1_sd(P, M);
    ctx.log << "dim Ext^1_SD = " << e.ext1_sd << ", dim Hom = " << e.hom << ", weight count = " << e.count << "\n";
    emit(ctx, working_precision(ctx, hom_module(P, M).default_precision()), to_json(e));
    return kOk;
}

int cmd_build_ext(const Context& ctx, const std::string& pp, const std::string& mp, const std::string& fp) {
    BKModule P = load_module(pp, ctx), M = load_module(mp, ctx);
    std::vector<LaurentMatrix> f = extension_class_from_json(load_json(fp), P, M);
    BKModule E = build_extension(P, M, f);
    WeightReport rep = is_strongly_divisible(E);
    auto g = reduce_coboundary(P, M, f);
    bool agree = rep.sd() == g.has_value();
    json result = {{"module", to_json(E)}, {"sd", rep.sd()}, {"weights", to_json(rep)}, {"coboundary_reduces", g.has_value()},
                   {"agreement", agree}};
    if (g) result["coboundary"] = extension_class_to_json(*P.field(), *g);
    ctx.log << "extension is " << (rep.sd() ? "" : "not ") << "strongly divisible; coboundary reduction "
            << (g ? "succeeds" : "fails") << "\n";
    emit(ctx, working_precision(ctx, E.default_precision()), std::move(result));
    if (!agree) {
        ctx.log << "mismatch: strong divisibility and coboundary reduction disagree\n";
        return kMismatch;
    }
    return kOk;
}

int cmd_normalize(const Context& ctx, const std::string& path) {
    BKModule N = load_module(path, ctx);
    RankOneData data = normalize_rank_one(N);
    BKModule nf = rank_one_normal_form(data);
    ctx.log << "r = " << join(data.r) << ", rotation class " << join(rotation_representative(data.r)) << "\n";
    emit(ctx, working_precision(ctx, N.default_precision()), {{"invariants", to_json(data)}, {"normal_form", to_json(nf)}});
    return kOk;
}

int cmd_restrict(const Context& ctx, const std::string& path, int d) {
    BKModule N = load_module(path, ctx);
    BKModule R = restrict_to(N, d);
    ctx.log << "restricted from d = " << N.d() << " to d = " << d << ", rank " << R.n() << "\n";
    emit(ctx, working_precision(ctx, R.default_precision()), {{"module", to_json(R)}});
    return kOk;
}

int cmd_induce(const Context& ctx, const std::string& path, int D) {
    BKModule M = load_module(path, ctx);
    BKModule I = induce(M, D);
    ctx.log << "induced from d = " << M.d() << " to d = " << D << "\n";
    emit(ctx, working_precision(ctx, I.default_precision()), {{"module", to_json(I)}});
    return kOk;
}

// ---- sweeps ----

int nwork(int p, int n) { return p * (n * (p + 1) + 2); }

int cmd_classify(const Context& ctx, int p, int max_rank, bool fl_range, bool explore, long long budget) {
    if (fl_range && explore) throw InvalidArgument("--fl-range and --rank5-explore are exclusive");
    SweepMode mode = explore ? SweepMode::Explore : fl_range ? SweepMode::FLRange : SweepMode::Qpcase;
    EnumerationOptions opt;
    opt.budget = budget;
    SweepReport rep = sweep(p, max_rank, mode, opt);
    long long certified = 0;
    for (const auto& fd : rep.proper_sd)
        if (fd.ambient_irreducible && !fd.induced_as) ++certified;
    ctx.log << sweep_mode_name(mode) << ": p = " << p << ", ranks <= " << max_rank << ", " << rep.cells.size()
            << " cells, " << rep.totals.lattices << " lattices, " << rep.proper_sd.size()
            << " proper strongly divisible lattices with irreducible ambient (" << certified
            << " not isomorphic to any induced rank-one module)\n";
    std::map<std::string, int> grouped;
    for (const auto& fd : rep.counterexamples) ++grouped[describe(fd)];
    for (const auto& [what, k] : grouped) ctx.log << "  finding: " << what << (k > 1 ? " (" + std::to_string(k) + " lattices)" : "") << "\n";
    json result = to_json(rep);
    result["not_induced"] = certified;
    emit(ctx, working_precision(ctx, nwork(p, max_rank)), std::move(result));
    // exploration findings are reported, not failures
    if (mode != SweepMode::Explore && !rep.counterexamples.empty()) return kMismatch;
    return kOk;
}

int cmd_verify_dimform(const Context& ctx, int p, int max_d) {
    std::vector<DimformRow> rows = verify_dimform(p, max_d);
    json table = json::array();
    for (const auto& row : rows) table.push_back(to_json(row, *FieldSpec::standard(p, row.d)));
    ctx.log << rows.size() << " ordered pairs checked: ext - hom = count in every row\n";
    emit(ctx, working_precision(ctx, nwork(p, 1)), {{"p", p}, {"max_d", max_d}, {"rows", table}});
    return kOk;
}

QpCaseParams fixed_params(const FieldSpec& F, QpCase c) {
    QpCaseParams prm;
    prm.r1 = 1;
    prm.r2 = 1;
    prm.r3 = F.p();
    if (c == QpCase::TwoSpecial) prm.alpha = F.neg(1);
    if (c == QpCase::TwoGeneric && F.neg(1) == 1) prm.alpha = F.generator(); // 1 + 1 = 0 over F_2
    if (c == QpCase::Four) prm.r3 = prm.r1;
    return prm;
}

int cmd_regress_qpcase(const Context& ctx, int p, int trials) {
    FieldPtr f = FieldSpec::standard(p, 2);
    json elim = json::array();
    for (QpCase c : {QpCase::One, QpCase::TwoGeneric, QpCase::TwoSpecial, QpCase::Three, QpCase::Four}) {
        QpCaseResult res = qpcase_matrices(f, c, fixed_params(*f, c));
        check_qpcase(res);
        ctx.log << qpcase_name(c) << ": weights " << join(res.weights)
                << (c == QpCase::Four ? ", r3 = r1 and the ambient is reducible" : ", p + 1 is a weight") << "\n";
        elim.push_back(to_json(res));
    }
    std::vector<QpCaseResult> reg = regression_case_matrices(f, trials);
    json regj = json::array();
    for (const auto& r : reg) regj.push_back(to_json(r));
    ctx.log << reg.size() << " random parameter sets over F_" << f->q() << " reproduce the displayed factorisations\n";
    SweepReport rep = sweep(p, 4, SweepMode::Qpcase);
    ctx.log << "sweep up to rank 4: " << rep.totals.lattices << " lattices, " << rep.counterexamples.size()
            << " proper strongly divisible lattices with irreducible ambient\n";
    json result = {{"eliminations", elim}, {"regression", regj}, {"sweep", to_json(rep)}};
    emit(ctx, working_precision(ctx, nwork(p, 4)), std::move(result));
    return rep.counterexamples.empty() ? kOk : kMismatch;
}

int fail(const Context& ctx, int code, const char* kind, const std::string& msg) {
    json err = {{"command", ctx.command}, {"error", {{"kind", kind}, {"message", msg}}}, {"exit_code", code}};
    std::cout << canonical(err) << "\n";
    ctx.log << "error (" << kind << "): " << msg << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Breuil-Kisin modules over finite fields: weights, cohomology, classification sweeps"};
    app.require_subcommand(1);
    std::optional<int> precision;
    app.add_option("--precision", precision, "working precision N (overrides the default p(n(p+1)+2))")->check(CLI::PositiveNumber);

    std::string mod, mod2, fpath;
    int degree = 0, p = 0, max_rank = 0, max_d = 0, trials = 20;
    bool fl_range = false, explore = false;
    long long budget = EnumerationOptions{}.budget;

    auto* weights = app.add_subcommand("weights", "weight multisets per embedding");
    auto* sd = app.add_subcommand("sd-check", "strong divisibility with graded tables");
    auto* h0 = app.add_subcommand("h0", "dim H^0");
    auto* h1 = app.add_subcommand("h1sd", "dim H^1_SD by both methods");
    for (auto* s : {weights, sd, h0, h1}) s->add_option("module", mod, "module document")->required();
    auto* ext = app.add_subcommand("ext-dim", "dim Ext^1_SD(P, M)");
    auto* bext = app.add_subcommand("build-ext", "extension of P by M from a class f");
    for (auto* s : {ext, bext}) {
        s->add_option("P", mod, "module document")->required();
        s->add_option("M", mod2, "module document")->required();
    }
    bext->add_option("f", fpath, "extension class document")->required();
    auto* norm = app.add_subcommand("normalize-rank1", "rank-one normal form");
    norm->add_option("module", mod, "module document")->required();
    auto* res = app.add_subcommand("restrict", "restriction of scalars f_*");
    auto* ind = app.add_subcommand("induce", "base change f^*");
    for (auto* s : {res, ind}) {
        s->add_option("module", mod, "module document")->required();
        s->add_option("--to-degree", degree, "target residue degree")->required();
    }
    auto* cls = app.add_subcommand("classify", "lattice sweep over restricted rank-one ambients");
    cls->add_option("--p", p, "prime")->required();
    cls->add_option("--max-rank", max_rank, "largest D")->required();
    cls->add_flag("--fl-range", fl_range, "only weights in [0, p-1] count as findings");
    cls->add_flag("--rank5-explore", explore, "report findings without failing");
    cls->add_option("--budget", budget, "subspace budget per ambient");
    auto* dim = app.add_subcommand("verify-dimform", "ext - hom = weight count for rank-one pairs");
    dim->add_option("--p", p, "prime")->required();
    dim->add_option("--max-d", max_d, "largest residue degree")->required();
    auto* qp = app.add_subcommand("regress-qpcase", "case eliminations, displayed factorisations and the rank <= 4 sweep");
    qp->add_option("--p", p, "prime")->required();
    qp->add_option("--trials", trials, "random parameter sets per case")->check(CLI::NonNegativeNumber);

    Context ctx;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kMalformed;
    }
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.precision = precision;

    try {
        if (*weights) return cmd_weights(ctx, mod);
        if (*sd) return cmd_sd_check(ctx, mod);
        if (*h0) return cmd_h0(ctx, mod);
        if (*h1) return cmd_h1sd(ctx, mod);
        if (*ext) return cmd_ext_dim(ctx, mod, mod2);
        if (*bext) return cmd_build_ext(ctx, mod, mod2, fpath);
        if (*norm) return cmd_normalize(ctx, mod);
        if (*res) return cmd_restrict(ctx, mod, degree);
        if (*ind) return cmd_induce(ctx, mod, degree);
        if (*cls) return cmd_classify(ctx, p, max_rank, fl_range, explore, budget);
        if (*dim) return cmd_verify_dimform(ctx, p, max_d);
        if (*qp) return cmd_regress_qpcase(ctx, p, trials);
    } catch (const InsufficientPrecision& e) {
        return fail(ctx, kPrecision, "InsufficientPrecision", e.what());
    } catch (const SearchBudgetExceeded& e) {
        return fail(ctx, kBudget, "SearchBudgetExceeded", e.what());
    } catch (const CounterexampleFound& e) {
        return fail(ctx, kMismatch, "CounterexampleFound", e.what());
    } catch (const RegressionMismatch& e) {
        return fail(ctx, kMismatch, "RegressionMismatch", e.what());
    } catch (const FormulaMismatch& e) {
        return fail(ctx, kMismatch, "FormulaMismatch", e.what());
    } catch (const MethodDisagreement& e) {
        return fail(ctx, kMismatch, "MethodDisagreement", e.what());
    } catch (const Error& e) {
        return fail(ctx, kMalformed, "InvalidInput", e.what());
    }
    return kMalformed;
}
