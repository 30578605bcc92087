#include "solvgeom/carnot.hpp"
#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"
#include "solvgeom/report.hpp"
#include "solvgeom/serialize.hpp"
#include "solvgeom/so6_family.hpp"
#include "solvgeom/symmetric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace solvgeom;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string command;
    std::string target;
    std::string space;
    std::string twist_spec;
    std::string golden;
    std::string out;
    std::string seed_text;
    std::optional<double> tol;
    int n = 0, p = 0, q = 0, r = 0, s = 0;
    int trials = 200;
    int grid = 25;
};

std::uint64_t parse_seed(const std::string& text) {
    if (text.empty()) return kDefaultSeed;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used, 0);
        if (used != text.size()) throw ParseError("bad seed '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad seed '" + text + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

int finish(const Report& report) {
    std::cout << report.text();
    return report.passed() ? kExitPass : kExitFail;
}

std::string eigen_type_text(const EigenvalueType& t) {
    std::string a, b;
    for (std::size_t i = 0; i < t.eigenvalues.size(); ++i) {
        a += (i ? "," : "") + std::to_string(t.eigenvalues[i]);
        b += (i ? "," : "") + std::to_string(t.multiplicities[i]);
    }
    return "(" + a + ";" + b + ")";
}

void structural_checks(Report& rep, const MetricLieAlgebra& alg, double tol) {
    const auto v = validate(alg);
    rep.check("jacobi", v.jacobi_residual <= kTolExact, v.jacobi_residual, kTolExact);
    rep.check("gram_positive", v.gram_min_eig > 0.0, v.gram_min_eig, 0.0);
    if (alg.decoration()) {
        const auto iw = iwasawa_check(alg);
        rep.check("iwasawa_a_abelian", iw.cond_i, iw.cond_i, 0.0);
        rep.check("iwasawa_ad_symmetric", iw.cond_ii, iw.cond_ii, 0.0);
        rep.check("iwasawa_positive_element", iw.cond_iii, iw.cond_iii, 0.0);
    }
    const auto e = einstein_verdict(alg, tol);
    rep.check("einstein", e.is_einstein, e.residual, tol);
    rep.note("einstein_constant", format_number(e.lambda));
    if (e.is_einstein && alg.decoration()) {
        try {
            rep.note("eigenvalue_type", eigen_type_text(eigenvalue_type(alg)));
        } catch (const DomainError& ex) {
            rep.add({"eigenvalue_type", Status::Fail, ex.what(), "-", "plumbing"});
        }
    }
}

std::optional<DataTriple> carnot_triple(const Options& o, std::uint64_t seed, Report& rep) {
    if (o.s == 0) return DataTriple{o.r, 0, {}};
    SearchOptions so;
    so.trials = o.trials;
    so.seed = seed;
    const auto res = search_uniform(o.r, o.s, so);
    rep.evidence("uniform_search_best_residual", res.best_residual, kTolOpt, "uniform subspace search");
    if (res.candidates.empty()) return std::nullopt;
    return DataTriple{o.r, o.s, res.candidates.front().basis};
}

int cmd_verify(const Options& o, std::uint64_t seed, const std::string& echo) {
    const double tol = o.tol.value_or(1e-9);
    Report rep(echo, seed);
    MetricLieAlgebra alg;
    std::optional<double> expected_lambda;
    if (o.target == "complex-hyperbolic" || o.target == "quaternionic-hyperbolic") {
        const auto t = o.target == "complex-hyperbolic" ? complex_hyperbolic_triple(o.n) : quaternionic_hyperbolic_triple(o.n);
        alg = build_solvmanifold(t);
        expected_lambda = -0.25 * (t.r + 4 * t.s);
    } else if (o.target == "carnot") {
        if (o.r < 1 || o.s < 0) throw DomainError("carnot needs --r >= 1 and --s >= 0");
        const auto t = carnot_triple(o, seed, rep);
        if (!t) {
            rep.add({"uniform_subspace", Status::Fail, "none found", format_number(kTolOpt), "uniform subspace search"});
            return finish(rep);
        }
        alg = build_solvmanifold(*t);
        expected_lambda = -0.25 * (o.r + 4 * o.s);
    } else if (o.target == "symmetric") {
        alg = build_space(o.space, o.p, o.q, o.n).base;
    } else {
        alg = deserialize(read_file(o.target));
    }
    structural_checks(rep, alg, tol);
    if (expected_lambda) {
        const double lam = einstein_verdict(alg, tol).lambda;
        const double err = std::abs(lam - *expected_lambda);
        rep.check("einstein_constant_carnot", err <= 1e-10, lam, 1e-10, "ric(A,A) = -(r+4s)/4");
    }
    return finish(rep);
}

int cmd_carnot_search(const Options& o, std::uint64_t seed, const std::string& echo) {
    if (o.r < 2 || o.s < 1) throw DomainError("search needs --r >= 2 and --s >= 1");
    Report rep(echo, seed);
    SearchOptions so;
    so.trials = o.trials;
    so.seed = seed;
    so.tol = o.tol.value_or(kTolOpt);
    const auto res = search_uniform(o.r, o.s, so);
    rep.evidence("best_residual", res.best_residual, so.tol, "uniform subspace search");
    rep.note("candidates", std::to_string(res.candidates.size()));
    rep.note("trials", std::to_string(res.trials));
    return finish(rep);
}

int cmd_carnot_classify(const Options& o, std::uint64_t seed, const std::string& echo) {
    Report rep(echo, seed);
    SearchOptions so;
    so.trials = o.trials;
    so.seed = seed;
    const auto counts = classify_so4(so);
    const int expected[7] = {0, 1, 2, 2, 2, 1, 1};
    for (const auto& c : counts) {
        const std::string s = std::to_string(c.s);
        if (c.s <= 3) {
            rep.check("so4_classes_s" + s, c.search_classes == expected[c.s], c.search_classes, 0,
                      "isometry classes of so(4) uniform subspaces");
        } else {
            rep.check("so4_classes_s" + s + "_duality", c.duality_classes == expected[c.s], c.duality_classes, 0,
                      "complement duality s <-> 6-s");
            rep.note("so4_classes_s" + s + "_search", std::to_string(c.search_classes));
        }
    }
    return finish(rep);
}

DataTriple triple_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        DataTriple t;
        t.r = doc.at("r").get<int>();
        for (const auto& m : doc.at("j")) {
            Eigen::MatrixXd J(t.r, t.r);
            if (static_cast<int>(m.size()) != t.r) throw ParseError("j matrix has the wrong number of rows");
            for (int a = 0; a < t.r; ++a) {
                if (static_cast<int>(m[a].size()) != t.r) throw ParseError("j matrix has the wrong number of columns");
                for (int b = 0; b < t.r; ++b) J(a, b) = m[a][b].get<double>();
            }
            t.j.push_back(J);
        }
        t.s = static_cast<int>(t.j.size());
        return t;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed triple: ") + ex.what());
    }
}

int cmd_carnot_verify(const Options& o, std::uint64_t seed, const std::string& echo) {
    const double tol = o.tol.value_or(1e-9);
    const DataTriple t = triple_from_json(read_file(o.target));
    Report rep(echo, seed);
    const auto alg = build_solvmanifold(t);
    const auto v = einstein_verdict(alg, tol);
    const auto c = einstein_conditions(t);
    const double cond = std::max(c.cond_i_residual, c.cond_ii_residual);
    rep.evidence("conditions_residual", cond, tol, "(j_a,j_b) = delta, sum j^2 = -s Id");
    rep.check("conditions_match_verdict", (cond <= tol) == v.is_einstein, v.residual, tol,
              "Einstein iff the two j-conditions hold");
    rep.check("einstein", v.is_einstein, v.residual, tol);
    return finish(rep);
}

int cmd_family(const Options& o, std::uint64_t seed, const std::string& echo) {
    if (o.grid < 2) throw DomainError("--grid must be at least 2");
    const auto rows = family_report(o.grid, seed);
    const std::string csv = family_csv(rows);
    Report rep(echo, seed);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.einstein_residual);
    rep.check("family_einstein", worst <= 1e-9, worst, 1e-9, "every W(r,s,t) gives an Einstein solvmanifold");
    rep.note("rows", std::to_string(rows.size()));
    if (o.out.empty()) {
        std::cout << csv;
        std::cerr << rep.text();
        return rep.passed() ? kExitPass : kExitFail;
    }
    write_output(o.out, csv);
    return finish(rep);
}

bool normal_real_form(const Options& o) {
    return (o.space == "so_pq" && o.q <= o.p + 1) || o.space == "sl_nR";
}

struct ParsedTwist {
    TwistAssignment twist;
    std::optional<WitnessPair> witness;
    bool trivial_type_iv = false;
};

ParsedTwist parse_twist(const RootDecoratedAlgebra& alg, const Options& o, const std::string& spec) {
    ParsedTwist out;
    out.twist.parity.assign(alg.n_dim(), 0);
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, '+')) {
        TwistAssignment t;
        if (part == "standard") {
            if (o.space == "so_nH") {
                t = standard_twist_so_nH(alg);
                if (o.n >= 6) out.witness = witness_so_nH(alg);
            } else if (o.space == "sl_nH") {
                t = standard_twist_sl_nH(alg);
                if (o.n >= 3) out.witness = witness_sl_nH(alg);
            } else if (o.space == "type4_sl") {
                const auto iv = type_iv_twist(alg);
                t = iv.twist;
                out.trivial_type_iv = !iv.nonsymmetric;
                if (o.n >= 3) out.witness = witness_type_iv(alg);
            } else {
                throw ParseError("no named twist for space '" + o.space + "'");
            }
        } else if (part.rfind("wa:", 0) == 0) {
            const int a = std::stoi(part.substr(3));
            t = wa_twist(alg, a);
            if (o.p >= 2) out.witness = witness_wa(alg, a);
        } else if (part.rfind("rh:", 0) == 0) {
            std::vector<int> subset;
            std::stringstream ls(part.substr(3));
            std::string item;
            while (std::getline(ls, item, ','))
                if (!item.empty()) subset.push_back(std::stoi(item) - 1);
            t = restricted_height_twist(alg, simple_roots(alg), subset);
        } else if (part.rfind("bits:", 0) == 0) {
            t = twist_from_bits(alg.n_dim(), std::stoull(part.substr(5), nullptr, 0));
        } else {
            throw ParseError("unknown twist '" + part + "'");
        }
        out.twist = twist_xor(out.twist, t);
    }
    return out;
}

void twist_checks(Report& rep, const RootDecoratedAlgebra& alg, const Options& o, double tol) {
    if (o.twist_spec == "enumerate") {
        const auto en = enumerate_twists(alg);
        rep.note("twist_solution_dim", std::to_string(en.solution_dim));
        rep.note("twist_restricted_height_dim", std::to_string(en.rh_dim));
        rep.note("twist_quotient_dim", std::to_string(en.quotient_dim));
        rep.check("restricted_height_twists_valid", en.rh_valid, en.rh_dim, 0, "restricted-height twists are isometric");
        if (normal_real_form(o))
            rep.check("normal_form_rigidity", en.quotient_dim == 0, en.quotient_dim, 0,
                      "normal real form: only restricted-height twists");
        for (std::size_t c = 0; c < en.coset_representatives.size(); ++c) {
            const auto T = twist_from_bits(en.n_dim, en.coset_representatives[c]);
            const auto pr = einstein_preservation_check(alg, T, kTolExact);
            char name[64];
            std::snprintf(name, sizeof name, "class_0x%llX_ric_match",
                          static_cast<unsigned long long>(en.coset_representatives[c]));
            rep.check(name, pr.ric_match && pr.einstein, pr.max_difference, kTolExact, "twisted Ricci equals Ricci");
        }
        return;
    }
    const auto parsed = parse_twist(alg, o, o.twist_spec);
    if (parsed.trivial_type_iv) rep.note("type_iv_twist", "identity only (abelian nilradical)");
    const auto closure = twist_closure_check(alg, parsed.twist);
    rep.check("twist_closure", closure.ok, static_cast<double>(closure.violations.size()), 0);
    if (!closure.ok) return;
    const auto pr = einstein_preservation_check(alg, parsed.twist, kTolExact);
    rep.check("twist_ric_match", pr.ric_match, pr.max_difference, kTolExact, "twisted Ricci equals Ricci");
    rep.check("twist_einstein", pr.einstein, pr.lambda_twisted, tol, "same Einstein constant after twisting");
    const auto tw = twist(alg, parsed.twist);
    const auto back = twist(tw, parsed.twist);
    const double inv = (back.base.tensor().data() == alg.base.tensor().data()) ? 0.0 : 1.0;
    rep.check("twist_involution", inv == 0.0, inv, 0);
    if (parsed.witness) {
        const double k0 = sectional(alg.base, parsed.witness->x, parsed.witness->y);
        const double k1 = sectional(tw.base, parsed.witness->x, parsed.witness->y);
        rep.note("witness", parsed.witness->description);
        rep.evidence("witness_curvature_untwisted", k0, 0.0);
        rep.check("witness_positive_curvature", k1 > 1e-6, k1, 1e-6, "positively curved plane after twisting");
    }
}

std::string table_mismatch(const std::string& got, const std::string& want) {
    std::istringstream a(got), b(want);
    std::string la, lb;
    int line = 1;
    while (true) {
        const bool ha = static_cast<bool>(std::getline(a, la));
        const bool hb = static_cast<bool>(std::getline(b, lb));
        if (!ha && !hb) return "";
        if (la != lb || ha != hb) return "line " + std::to_string(line) + ": got '" + la + "' want '" + lb + "'";
        ++line;
    }
}

int cmd_symmetric(const std::string& sub, const Options& o, std::uint64_t seed, const std::string& echo) {
    const double tol = o.tol.value_or(1e-9);
    const auto alg = build_space(o.space, o.p, o.q, o.n);
    if (sub == "table" && o.golden.empty()) {
        const std::string table = bracket_table(alg);
        if (o.out.empty()) std::cout << table;
        else write_output(o.out, table);
        return kExitPass;
    }
    Report rep(echo, seed);
    if (sub != "table") {
        structural_checks(rep, alg.base, tol);
        rep.note("space", alg.space);
        rep.note("norm_constant", format_number(alg.norm_constant));
        std::string roots;
        std::vector<std::string> seen;
        for (const auto& name : alg.root_names)
            if (std::find(seen.begin(), seen.end(), name) == seen.end()) {
                seen.push_back(name);
                roots += (roots.empty() ? "" : " ") + name;
            }
        rep.note("roots", roots);
        if (!o.twist_spec.empty()) twist_checks(rep, alg, o, tol);
        else if (sub == "twist") throw ParseError("symmetric twist needs --twist");
    }
    if (!o.golden.empty()) {
        const std::string table = bracket_table(alg);
        if (!o.out.empty()) write_output(o.out, table);
        const std::string diff = table_mismatch(table, read_file(o.golden));
        if (!diff.empty()) std::cerr << diff << "\n";
        rep.check("bracket_table_golden", diff.empty(), diff.empty() ? 0.0 : 1.0, 0, "reference bracket table");
    }
    return finish(rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature and Einstein checks for metric solvable Lie algebras"};
    app.require_subcommand(1);
    Options o;
    auto common = [&o](CLI::App* c) {
        c->add_option("--tol", o.tol, "Tolerance")->check(CLI::PositiveNumber);
        c->add_option("--seed", o.seed_text, "RNG seed (decimal or 0x hex)");
        c->add_option("--trials", o.trials, "Search restarts")->check(CLI::PositiveNumber);
        c->add_option("--out", o.out, "Output file");
    };

    auto* verify = app.add_subcommand("verify", "Check an algebra: JSON file or builtin");
    verify->add_option("target", o.target,
                       "complex-hyperbolic | quaternionic-hyperbolic | carnot | symmetric | path to JSON")
        ->required();
    verify->add_option("--n", o.n);
    verify->add_option("--r", o.r);
    verify->add_option("--s", o.s);
    verify->add_option("--p", o.p);
    verify->add_option("--q", o.q);
    verify->add_option("--space", o.space);
    common(verify);

    auto* carnot = app.add_subcommand("carnot", "Carnot solvmanifolds and uniform subspaces");
    carnot->require_subcommand(1);
    auto* search = carnot->add_subcommand("search", "Search for uniform subspaces of so(r)");
    search->add_option("--r", o.r)->required();
    search->add_option("--s", o.s)->required();
    common(search);
    auto* classify = carnot->add_subcommand("classify-so4", "Count uniform subspaces of so(4) up to equivalence");
    common(classify);
    auto* cverify = carnot->add_subcommand("verify", "Check a data triple given as JSON {r, j}");
    cverify->add_option("triple", o.target)->required();
    common(cverify);

    auto* family = app.add_subcommand("family", "so(6) family of Carnot solvmanifolds");
    family->require_subcommand(1);
    auto* freport = family->add_subcommand("report", "CSV over a grid of the parameter sphere");
    freport->add_option("--grid", o.grid)->check(CLI::Range(2, 400));
    common(freport);

    auto* sym = app.add_subcommand("symmetric", "Symmetric-space solvable algebras and their twists");
    sym->require_subcommand(1);
    std::vector<CLI::App*> sym_subs;
    for (const char* name : {"build", "twist", "table"}) {
        auto* c = sym->add_subcommand(name);
        c->add_option("--space", o.space, "so_pq su_pq sp_pq so_nH sl_nH type4_sl sl_nR")->required();
        c->add_option("--n", o.n);
        c->add_option("--p", o.p);
        c->add_option("--q", o.q);
        c->add_option("--twist,--set", o.twist_spec, "standard | wa:<a> | rh:<i,j> | bits:<mask> | enumerate, joined by +");
        c->add_option("--golden", o.golden, "Golden bracket table");
        common(c);
        sym_subs.push_back(c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }

    std::string echo = "solvgeom";
    for (int i = 1; i < argc; ++i) echo += std::string(" ") + argv[i];
    const auto start = std::chrono::steady_clock::now();
    int code = kExitUsage;
    try {
        const std::uint64_t seed = parse_seed(o.seed_text);
        if (*verify) code = cmd_verify(o, seed, echo);
        else if (*search) code = cmd_carnot_search(o, seed, echo);
        else if (*classify) code = cmd_carnot_classify(o, seed, echo);
        else if (*cverify) code = cmd_carnot_verify(o, seed, echo);
        else if (*freport) code = cmd_family(o, seed, echo);
        else
            for (auto* c : sym_subs)
                if (*c) code = cmd_symmetric(c->get_name(), o, seed, echo);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: number out of range: " << e.what() << "\n";
        return kExitUsage;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "# runtime %.3f s\n", secs);
    return code;
}
