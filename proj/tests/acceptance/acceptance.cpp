// One pass/fail line per acceptance criterion, with the runtime bound included
// in the verdict. Usage: solvgeom_acceptance [--criterion N]
#include "solvgeom/carnot.hpp"
#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"
#include "solvgeom/so6_family.hpp"
#include "solvgeom/symmetric.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace solvgeom;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

void fail_if(Outcome& out, bool bad, const std::string& what) {
    if (bad) {
        out.ok = false;
        out.detail += (out.detail.empty() ? "" : "; ") + what;
    }
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Eigen::MatrixXd skew(int r, std::mt19937_64& rng) {
    const Eigen::MatrixXd m = random_normal(r, r, rng);
    return m - m.transpose();
}

Outcome einstein_constants() {
    Outcome out;
    const DataTriple t = complex_hyperbolic_triple(2);
    const auto alg = build_solvmanifold(t);
    const auto ric = ricci(alg);
    // Block formulas: ric(A,A) = -(r+4s)/4, ric on v = -(r+4s)/4 - ..., all equal -3/2 here.
    double worst = 0.0;
    for (int i = 0; i < alg.dim(); ++i)
        for (int j = 0; j < alg.dim(); ++j)
            worst = std::max(worst, std::abs(ric(i, j) - (i == j ? -1.5 : 0.0)));
    const auto v = einstein_verdict(alg, 1e-10);
    fail_if(out, worst > 1e-10, "max |Ric + 3/2 G| = " + num(worst));
    fail_if(out, !v.is_einstein || std::abs(v.lambda + 1.5) > 1e-10, "lambda = " + num(v.lambda));
    if (out.ok) out.detail = "lambda = " + num(v.lambda) + ", max deviation " + num(worst);
    return out;
}

std::vector<DataTriple> generated_triples() {
    std::vector<DataTriple> ts;
    for (int n = 2; n <= 6; ++n) ts.push_back(complex_hyperbolic_triple(n));
    for (int n = 2; n <= 4; ++n) ts.push_back(quaternionic_hyperbolic_triple(n));
    const auto q = so4_basis();
    ts.push_back({4, 1, {q[0]}});
    ts.push_back({4, 2, {q[0], q[1]}});
    ts.push_back({4, 3, {q[0], q[1], q[2]}});
    ts.push_back({4, 2, {q[0], q[4]}});
    ts.push_back({4, 2, {q[3], q[5]}});
    ts.push_back({4, 2, {(q[0] + q[3]) / std::sqrt(2.0), q[1]}});
    // so(3) acting diagonally on R^3: all of so(3) is uniform, proper subsets are not.
    const auto s3 = so_basis(3);
    ts.push_back({3, 3, {s3[0], s3[1], s3[2]}});
    ts.push_back({3, 1, {s3[0]}});
    ts.push_back({3, 2, {s3[0], s3[2]}});
    std::mt19937_64 rng = stream_rng(kDefaultSeed, 2);
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector3d p = random_normal(3, 1, rng);
        ts.push_back(family_triple(w_of(p(0), p(1), p(2))));
    }
    const std::size_t base = ts.size();
    for (std::size_t k = 0; k < base; ++k)
        for (double eps : {1e-3, 1e-1}) {
            DataTriple t = ts[k];
            for (auto& m : t.j) m += eps * skew(t.r, rng);
            ts.push_back(t);
        }
    for (int k = 0; k < 4; ++k) {
        DataTriple t{5, 2, {}};
        for (int i = 0; i < 2; ++i) t.j.push_back(skew(5, rng));
        ts.push_back(t);
    }
    return ts;
}

Outcome einstein_equivalence() {
    Outcome out;
    const auto ts = generated_triples();
    int agree_einstein = 0, disagreements = 0;
    for (const auto& t : ts) {
        const auto c = einstein_conditions(t);
        const bool cond = c.cond_i_residual <= 1e-9 && c.cond_ii_residual <= 1e-9;
        const bool verdict = einstein_verdict(build_solvmanifold(t), 1e-9).is_einstein;
        if (cond != verdict) ++disagreements;
        if (cond && verdict) ++agree_einstein;
    }
    fail_if(out, ts.size() < 50, "only " + std::to_string(ts.size()) + " triples");
    fail_if(out, disagreements != 0, std::to_string(disagreements) + " disagreements");
    if (out.ok)
        out.detail = std::to_string(ts.size()) + " triples, " + std::to_string(agree_einstein) +
                     " Einstein, 0 disagreements";
    return out;
}

Outcome so4_classification() {
    Outcome out;
    SearchOptions so;
    so.trials = 200;
    const auto counts = classify_so4(so);
    const int expected[7] = {0, 1, 2, 2, 2, 1, 1};
    std::string summary;
    for (const auto& c : counts) {
        const int got = c.s <= 3 ? c.search_classes : c.duality_classes;
        fail_if(out, got != expected[c.s], "s=" + std::to_string(c.s) + ": " + std::to_string(got) +
                                                " classes, expected " + std::to_string(expected[c.s]));
        summary += (summary.empty() ? "" : " ") + std::to_string(got);
    }
    fail_if(out, counts.size() != 6, "missing s values");
    if (out.ok) out.detail = "classes for s=1..6: " + summary;
    return out;
}

Outcome nonexistence_evidence() {
    Outcome out;
    SearchOptions so;
    so.trials = 500;
    std::string summary;
    for (auto [r, s] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}, std::pair{5, 2}}) {
        const auto res = search_uniform(r, s, so);
        fail_if(out, res.best_residual < 0.05,
                "(" + std::to_string(r) + "," + std::to_string(s) + ") best residual " + num(res.best_residual));
        summary += "(" + std::to_string(r) + "," + std::to_string(s) + ") " + num(res.best_residual) + " ";
    }
    if (out.ok) out.detail = "evidence only, best residuals " + summary;
    return out;
}

Outcome family_checks() {
    Outcome out;
    std::mt19937_64 rng = stream_rng(kDefaultSeed, 5);
    double sq = 0.0, cz = 0.0, uncorrected = 0.0, corrected = 0.0;
    int bad_dim = 0;
    for (int k = 0; k < 100; ++k) {
        const Eigen::Vector3d v = random_normal(3, 1, rng).normalized();
        const auto p = w_of(v(0), v(1), v(2));
        Eigen::MatrixXd sum = 3.0 * Eigen::MatrixXd::Identity(6, 6);
        for (const auto& d : p.D) sum += d * d;
        sq = std::max(sq, sum.cwiseAbs().maxCoeff());
        cz = std::max(cz, std::abs(angle_to_centralizer(p) - std::abs(p.t)));
        const double numeric = bracket_angle(p);
        uncorrected = std::max(uncorrected, std::abs(bracket_angle_uncorrected_form(p.r, p.s, p.t) - numeric));
        corrected = std::max(corrected, std::abs(bracket_angle_closed_form(p.r, p.s, p.t) - numeric));
        if (centralizer_in_so6(p).dim != 1) ++bad_dim;
    }
    // The locus t^2 = (r^2 + s^2)/2.
    for (int k = 0; k < 20; ++k) {
        const double phi = 2.0 * M_PI * k / 20.0 + 0.1;
        const double t = (k % 2 ? -1.0 : 1.0) / std::sqrt(3.0);
        const double rho = std::sqrt(2.0 / 3.0);
        if (centralizer_in_so6(w_of(rho * std::cos(phi), rho * std::sin(phi), t)).dim != 1) ++bad_dim;
    }
    fail_if(out, sq > 1e-10, "sum D_i^2 + 3 Id = " + num(sq));
    fail_if(out, cz > 1e-9, "centralizer angle error " + num(cz));
    fail_if(out, uncorrected > 1e-6, "uncorrected bracket-angle closed form off by " + num(uncorrected));
    fail_if(out, bad_dim != 0, std::to_string(bad_dim) + " points with centralizer dimension != 1");
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("corrected closed form within ") + num(corrected);
    return out;
}

Outcome negative_curvature() {
    Outcome out;
    const auto m = negative_curvature_margin(w_of(1, 0, 0));
    fail_if(out, !(m.min_margin > 0.0), "min margin " + num(m.min_margin));
    fail_if(out, !(m.max_sectional < 0.0), "max sectional " + num(m.max_sectional));
    fail_if(out, m.sectional_samples < 10000, "only " + std::to_string(m.sectional_samples) + " sectional samples");
    if (out.ok)
        out.detail = "evidence only, min margin " + num(m.min_margin) + ", max sectional " + num(m.max_sectional);
    return out;
}

Outcome bracket_tables() {
    Outcome out;
    const std::string dir = SOLVGEOM_TABLE_DIR;
    const std::vector<std::pair<std::string, RootDecoratedAlgebra>> cases{
        {"so4H.txt", build_so_nH(4)}, {"so5H.txt", build_so_nH(5)}, {"sl3H.txt", build_sl_nH(3)}};
    for (const auto& [file, alg] : cases) fail_if(out, bracket_table(alg) != read_file(dir + "/" + file), file);
    if (out.ok) out.detail = "3 tables byte-identical";
    return out;
}

struct NamedTwist {
    std::string name;
    RootDecoratedAlgebra alg;
    TwistAssignment twist;
};

std::vector<NamedTwist> listed_twists() {
    std::vector<NamedTwist> v;
    const auto so13 = build_so_pq(1, 3), so24 = build_so_pq(2, 4), su13 = build_su_pq(1, 3);
    v.push_back({"so(1,3) wa:1", so13, wa_twist(so13, 1)});
    v.push_back({"so(2,4) wa:1", so24, wa_twist(so24, 1)});
    const auto en = enumerate_twists(su13);
    for (std::size_t k = 1; k < en.coset_representatives.size(); ++k)
        v.push_back({"su(1,3) class " + std::to_string(k), su13, twist_from_bits(su13.n_dim(), en.coset_representatives[k])});
    for (int n : {4, 5}) {
        const auto a = build_so_nH(n);
        v.push_back({"so(" + std::to_string(n) + ",H)", a, standard_twist_so_nH(a)});
    }
    const auto sl3 = build_sl_nH(3);
    v.push_back({"sl(3,H)", sl3, standard_twist_sl_nH(sl3)});
    const auto iv = build_type_iv_sl(3);
    v.push_back({"type IV sl(3)", iv, type_iv_twist(iv).twist});
    return v;
}

Outcome twisted_ricci() {
    Outcome out;
    double worst = 0.0;
    int count = 0;
    for (const auto& t : listed_twists()) {
        const auto pres = einstein_preservation_check(t.alg, t.twist, 1e-10);
        fail_if(out, !pres.ric_match, t.name + " Ricci differs by " + num(pres.max_difference));
        fail_if(out, !pres.einstein, t.name + " not Einstein");
        worst = std::max(worst, pres.max_difference);
        ++count;
    }
    if (out.ok) out.detail = std::to_string(count) + " twists, max Ricci difference " + num(worst);
    return out;
}

Outcome witnesses() {
    Outcome out;
    std::string summary;
    auto run = [&](const std::string& name, const RootDecoratedAlgebra& alg, const TwistAssignment& T,
                   const WitnessPair& w) {
        const double k = sectional(twist(alg, T).base, w.x, w.y);
        fail_if(out, !(k > 1e-6), name + " K = " + num(k));
        summary += name + " " + num(k) + " ";
    };
    const auto so24 = build_so_pq(2, 4);
    run("so(2,4)", so24, wa_twist(so24, 1), witness_wa(so24, 1));
    const auto so6 = build_so_nH(6);
    run("so(6,H)", so6, standard_twist_so_nH(so6), witness_so_nH(so6));
    const auto sl3 = build_sl_nH(3);
    run("sl(3,H)", sl3, standard_twist_sl_nH(sl3), witness_sl_nH(sl3));
    const auto iv = build_type_iv_sl(3);
    run("type IV sl(3)", iv, type_iv_twist(iv).twist, witness_type_iv(iv));
    if (out.ok) out.detail = "K: " + summary;
    return out;
}

Outcome rigidity() {
    Outcome out;
    for (const auto& alg : {build_so_pq(2, 2), build_so_pq(2, 3), build_sl_nR(3)}) {
        const auto en = enumerate_twists(alg);
        fail_if(out, !en.rh_valid, alg.space + ": invalid restricted-height twist");
        fail_if(out, en.quotient_dim != 0, alg.space + ": " + std::to_string(en.quotient_dim) + " extra classes");
    }
    if (out.ok) out.detail = "identity class only for so(2,2), so(2,3), sl(3,R)";
    return out;
}

Outcome structural() {
    Outcome out;
    double jac = 0.0, rank_one = 0.0;
    std::vector<MetricLieAlgebra> algs;
    for (const auto& t : generated_triples()) algs.push_back(build_solvmanifold(t));
    std::vector<RootDecoratedAlgebra> sym{build_so_pq(1, 3), build_so_pq(2, 2), build_so_pq(2, 3), build_so_pq(2, 4),
                                          build_su_pq(1, 3), build_su_pq(2, 3), build_sp_pq(1, 3), build_sp_pq(1, 2),
                                          build_so_nH(4),    build_so_nH(5),    build_so_nH(6),    build_sl_nH(2),
                                          build_sl_nH(3),    build_type_iv_sl(2), build_type_iv_sl(3), build_sl_nR(3),
                                          build_sl_nR(4)};
    for (const auto& s : sym) algs.push_back(s.base);
    for (const auto& a : algs) jac = std::max(jac, validate(a).jacobi_residual);
    fail_if(out, jac > 1e-10, "Jacobi residual " + num(jac));

    for (const auto& t : listed_twists()) {
        const auto back = twist(twist(t.alg, t.twist), t.twist);
        fail_if(out, !(back.base.tensor().data() == t.alg.base.tensor().data()), t.name + " twist is not an involution");
    }
    int reduced = 0;
    for (const auto& s : sym) {
        if (s.a_dim() < 2) continue;
        const auto v = einstein_verdict(s.base, 1e-9);
        const auto r = einstein_verdict(rank_one_reduction(s.base), 1e-9);
        fail_if(out, v.is_einstein != r.is_einstein, s.space + " rank-one verdict changed");
        rank_one = std::max(rank_one, std::abs(v.lambda - r.lambda));
        ++reduced;
    }
    fail_if(out, rank_one > 1e-9, "rank-one Einstein constant shift " + num(rank_one));
    if (out.ok)
        out.detail = std::to_string(algs.size()) + " algebras, Jacobi " + num(jac) + ", " + std::to_string(reduced) +
                     " rank-one reductions within " + num(rank_one);
    return out;
}

struct Criterion {
    const char* title;
    double bound_s;  // 0: no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {"einstein constants of the complex hyperbolic plane", 1, einstein_constants},
        {"Einstein conditions agree with the Ricci verdict", 10, einstein_equivalence},
        {"so(4) uniform subspace classes", 300, so4_classification},
        {"no uniform subspaces for (3,1) (3,2) (5,1) (5,2)", 300, nonexistence_evidence},
        {"so(6) family invariants", 60, family_checks},
        {"negative curvature at W(1,0,0)", 120, negative_curvature},
        {"bracket tables", 5, bracket_tables},
        {"twists preserve Ricci", 30, twisted_ricci},
        {"positive-curvature witnesses", 5, witnesses},
        {"normal real form rigidity", 30, rigidity},
        {"structural suites", 0, structural},
    };
    bool all_ok = true;
    for (int c = 1; c <= 11; ++c) {
        if (only && c != only) continue;
        const auto& crit = all[c - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = crit.run();
        } catch (const std::exception& e) {
            out = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (crit.bound_s > 0 && secs >= crit.bound_s) fail_if(out, true, "runtime " + num(secs) + " s over " + num(crit.bound_s) + " s");
        const std::string bound = crit.bound_s > 0 ? num(crit.bound_s) + "s" : "unbounded";
        std::printf("criterion %d\t%s\t%s\t%.2fs/%s\t%s\n", c, out.ok ? "pass" : "fail", crit.title, secs,
                    bound.c_str(), out.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && out.ok;
    }
    return all_ok ? 0 : 1;
}
