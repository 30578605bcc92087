#include "solvgeom/carnot.hpp"
#include "solvgeom/error.hpp"
#include "solvgeom/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace solvgeom {

double so_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return -(a.cwiseProduct(b.transpose())).sum() / static_cast<double>(a.rows());
}

namespace {

void check_triple(const DataTriple& t) {
    if (t.r < 1 || t.s < 0) throw DomainError("data triple needs r >= 1, s >= 0");
    if (static_cast<int>(t.j.size()) != t.s) throw DimensionError("data triple: expected s matrices");
    for (const auto& m : t.j) {
        if (m.rows() != t.r || m.cols() != t.r) throw DimensionError("data triple: matrices must be r x r");
        if (!m.allFinite()) throw DomainError("data triple: non-finite entry");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m + m.transpose()).cwiseAbs().maxCoeff() > kTolExact * scale)
            throw DomainError("data triple: j(Z) is not skew-symmetric");
    }
}

Eigen::MatrixXd sub_gram(const MetricLieAlgebra& alg, const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd g(m, m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) g(p, q) = alg.gram()(idx[p], idx[q]);
    return g;
}

// Columns: orthonormal vectors of span{e_idx} in full coordinates.
Eigen::MatrixXd subspace_frame(const MetricLieAlgebra& alg, const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(alg.dim(), m);
    if (m == 0) return out;
    Eigen::LLT<Eigen::MatrixXd> llt(sub_gram(alg, idx));
    const Eigen::MatrixXd L = llt.matrixL();
    const Eigen::MatrixXd coef = L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
    for (int p = 0; p < m; ++p) out.row(idx[p]) = coef.row(p);
    return out;
}

}  // namespace

DataTriple complex_hyperbolic_triple(int n) {
    if (n < 2) throw DomainError("complex hyperbolic space needs n >= 2");
    DataTriple t{2 * (n - 1), 1, {}};
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(t.r, t.r);
    for (int b = 0; b < n - 1; ++b) {
        J(2 * b + 1, 2 * b) = 1.0;
        J(2 * b, 2 * b + 1) = -1.0;
    }
    t.j.push_back(J);
    return t;
}

DataTriple quaternionic_hyperbolic_triple(int n) {
    if (n < 2) throw DomainError("quaternionic hyperbolic space needs n >= 2");
    DataTriple t{4 * (n - 1), 3, {}};
    for (int u = 1; u <= 3; ++u) {
        const Eigen::Matrix4d L = quat_left(Eigen::Vector4d::Unit(u));
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(t.r, t.r);
        for (int b = 0; b < n - 1; ++b) J.block(4 * b, 4 * b, 4, 4) = L;
        t.j.push_back(J);
    }
    return t;
}

MetricLieAlgebra build_solvmanifold(const DataTriple& t) {
    check_triple(t);
    const int r = t.r, s = t.s;
    const int n = 1 + r + s;
    std::vector<StructureEntry> entries;
    for (int a = 0; a < r; ++a) entries.push_back({0, 1 + a, 1 + a, 0.5});
    for (int k = 0; k < s; ++k) entries.push_back({0, 1 + r + k, 1 + r + k, 1.0});
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b)
            for (int k = 0; k < s; ++k) {
                const double v = t.j[k](b, a);
                if (v != 0.0) entries.push_back({1 + a, 1 + b, 1 + r + k, v});
            }
    std::vector<std::string> labels{"A"};
    for (int a = 0; a < r; ++a) labels.push_back("X" + std::to_string(a + 1));
    for (int k = 0; k < s; ++k) labels.push_back("Z" + std::to_string(k + 1));
    IwasawaDecoration dec;
    dec.a_indices = {0};
    for (int i = 1; i < n; ++i) {
        dec.n_indices.push_back(i);
        dec.roots.push_back(Eigen::VectorXd::Constant(1, i <= r ? 0.5 : 1.0));
    }
    return MetricLieAlgebra(n, entries, Eigen::MatrixXd(), labels, dec);
}

DataTriple j_from_brackets(const MetricLieAlgebra& alg, const std::vector<int>& v_idx, const std::vector<int>& z_idx) {
    const int n = alg.dim();
    std::vector<char> in_z(n, 0);
    for (int i : z_idx) {
        if (i < 0 || i >= n) throw DomainError("z index out of range");
        in_z[i] = 1;
    }
    for (int i : v_idx)
        if (i < 0 || i >= n || in_z[i]) throw DomainError("bad v index");
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, alg.ad_basis(i).cwiseAbs().maxCoeff());
    const double atol = kTolExact * scale;

    std::vector<int> nil = v_idx;
    nil.insert(nil.end(), z_idx.begin(), z_idx.end());
    for (int zi : z_idx)
        for (int x : nil)
            if (alg.ad_basis(zi).col(x).cwiseAbs().maxCoeff() > atol) throw DomainError("z is not central in v + z");
    for (int a : v_idx)
        for (int b : v_idx) {
            const Eigen::VectorXd w = alg.ad_basis(a).col(b);
            for (int k = 0; k < n; ++k)
                if (!in_z[k] && std::abs(w(k)) > atol) throw DomainError("[v, v] is not contained in z");
        }

    const Eigen::MatrixXd Fv = subspace_frame(alg, v_idx);
    const Eigen::MatrixXd Fz = subspace_frame(alg, z_idx);
    DataTriple t;
    t.r = static_cast<int>(v_idx.size());
    t.s = static_cast<int>(z_idx.size());
    t.j.assign(t.s, Eigen::MatrixXd::Zero(t.r, t.r));
    for (int a = 0; a < t.r; ++a)
        for (int b = 0; b < t.r; ++b) {
            // (j(Z_k) x_b)_a = <[x_b, x_a], Z_k>
            const Eigen::VectorXd w = alg.bracket(Fv.col(b), Fv.col(a));
            for (int k = 0; k < t.s; ++k) t.j[k](a, b) = alg.inner(w, Fz.col(k));
        }
    return t;
}

DataTriple j_from_brackets(const MetricLieAlgebra& alg, int r, int s) {
    if (1 + r + s != alg.dim()) throw DimensionError("j_from_brackets: dimension is not 1 + r + s");
    std::vector<int> v(r), z(s);
    std::iota(v.begin(), v.end(), 1);
    std::iota(z.begin(), z.end(), 1 + r);
    return j_from_brackets(alg, v, z);
}

StructureTensor brackets_from_j(const DataTriple& t) {
    check_triple(t);
    StructureTensor c(t.r + t.s);
    for (int a = 0; a < t.r; ++a)
        for (int b = 0; b < t.r; ++b)
            for (int k = 0; k < t.s; ++k) c(a, b, t.r + k) = t.j[k](b, a);
    return c;
}

EinsteinConditions einstein_conditions(const DataTriple& t) {
    check_triple(t);
    if (t.s == 0) throw DomainError("einstein_conditions: s = 0");
    EinsteinConditions out;
    for (int a = 0; a < t.s; ++a)
        for (int b = 0; b < t.s; ++b)
            out.cond_i_residual = std::max(out.cond_i_residual, std::abs(so_inner(t.j[a], t.j[b]) - (a == b ? 1.0 : 0.0)));
    Eigen::MatrixXd sum = t.s * Eigen::MatrixXd::Identity(t.r, t.r);
    for (const auto& m : t.j) sum += m * m;
    out.cond_ii_residual = sum.cwiseAbs().maxCoeff();
    return out;
}

std::vector<Eigen::MatrixXd> so_orthonormalize(const std::vector<Eigen::MatrixXd>& mats) {
    const int s = static_cast<int>(mats.size());
    if (s == 0) return {};
    Eigen::MatrixXd g(s, s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) g(a, b) = so_inner(mats[a], mats[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()));
    const double top = std::max(1e-300, es.eigenvalues().maxCoeff());
    if (!(es.eigenvalues().minCoeff() > 1e-12 * top)) throw DomainError("basis is linearly dependent");
    const Eigen::MatrixXd w = es.operatorInverseSqrt();
    std::vector<Eigen::MatrixXd> out(s, Eigen::MatrixXd::Zero(mats[0].rows(), mats[0].cols()));
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k) out[i] += w(k, i) * mats[k];
    return out;
}

double uniform_residual(const UniformSubspaceCandidate& cand) {
    if (cand.basis.empty()) return 0.0;
    const auto alphas = so_orthonormalize(cand.basis);
    Eigen::MatrixXd sum = static_cast<double>(alphas.size()) * Eigen::MatrixXd::Identity(cand.r, cand.r);
    for (const auto& a : alphas) sum += a * a;
    return sum.cwiseAbs().maxCoeff();
}

bool is_uniform(const UniformSubspaceCandidate& cand, double tol) {
    return uniform_residual(cand) <= tol;
}

Eigen::Matrix4d quat_left(const Eigen::Vector4d& q) {
    Eigen::Matrix4d m;
    m << q(0), -q(1), -q(2), -q(3),
         q(1),  q(0), -q(3),  q(2),
         q(2),  q(3),  q(0), -q(1),
         q(3), -q(2),  q(1),  q(0);
    return m;
}

Eigen::Matrix4d quat_right(const Eigen::Vector4d& q) {
    Eigen::Matrix4d m;
    m << q(0), -q(1), -q(2), -q(3),
         q(1),  q(0),  q(3), -q(2),
         q(2), -q(3),  q(0),  q(1),
         q(3),  q(2), -q(1),  q(0);
    return m;
}

std::vector<Eigen::MatrixXd> so4_basis() {
    std::vector<Eigen::MatrixXd> out;
    for (int k = 1; k <= 3; ++k) out.push_back(quat_left(Eigen::Vector4d::Unit(k)));
    for (int k = 1; k <= 3; ++k) out.push_back(quat_right(Eigen::Vector4d::Unit(k)));
    return out;
}

UniformSubspaceCandidate so4_subspace(const Eigen::MatrixXd& coeff) {
    if (coeff.cols() != 6) throw DimensionError("so(4) coefficients need 6 columns");
    const auto basis = so4_basis();
    UniformSubspaceCandidate c;
    c.r = 4;
    for (Eigen::Index i = 0; i < coeff.rows(); ++i) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
        for (int k = 0; k < 6; ++k) m += coeff(i, k) * basis[k];
        c.basis.push_back(m);
    }
    return c;
}

bool so4_criterion(const Eigen::MatrixXd& coeff, double tol) {
    if (coeff.cols() != 6) throw DimensionError("so(4) coefficients need 6 columns");
    const Eigen::Index s = coeff.rows();
    if ((coeff * coeff.transpose() - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff() > 1e-9)
        throw DomainError("so4_criterion: rows are not orthonormal");
    const Eigen::MatrixXd cross = coeff.leftCols(3).transpose() * coeff.rightCols(3);
    return s == 0 || cross.cwiseAbs().maxCoeff() <= tol;
}

std::vector<Eigen::MatrixXd> so_basis(int r) {
    std::vector<Eigen::MatrixXd> out;
    const double f = std::sqrt(r / 2.0);
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
            m(a, b) = f;
            m(b, a) = -f;
            out.push_back(m);
        }
    return out;
}

namespace {

Eigen::VectorXd so_coords(const Eigen::MatrixXd& m, const std::vector<Eigen::MatrixXd>& basis) {
    Eigen::VectorXd v(basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c) v(c) = so_inner(m, basis[c]);
    return v;
}

Eigen::MatrixXd from_coords(const Eigen::VectorXd& v, const std::vector<Eigen::MatrixXd>& basis, int r) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t c = 0; c < basis.size(); ++c) m += v(c) * basis[c];
    return m;
}

}  // namespace

UniformSubspaceCandidate complement_uniform(const UniformSubspaceCandidate& cand, double tol) {
    if (!is_uniform(cand, tol)) throw DomainError("complement_uniform: input is not uniform");
    const int r = cand.r;
    const auto basis = so_basis(r);
    const int N = static_cast<int>(basis.size());
    UniformSubspaceCandidate out;
    out.r = r;
    const auto alphas = so_orthonormalize(cand.basis);
    Eigen::MatrixXd Q(N, alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) Q.col(i) = so_coords(alphas[i], basis);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(N, N) - Q * Q.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (P + P.transpose()));
    for (int c = 0; c < N; ++c)
        if (es.eigenvalues()(c) > 0.5) out.basis.push_back(from_coords(es.eigenvectors().col(c), basis, r));
    return out;
}

int centralizer_dimension(const std::vector<Eigen::MatrixXd>& mats, int r) {
    const auto basis = so_basis(r);
    const int N = static_cast<int>(basis.size());
    if (mats.empty()) return N;
    Eigen::MatrixXd map(static_cast<Eigen::Index>(mats.size()) * r * r, N);
    for (int c = 0; c < N; ++c) {
        Eigen::VectorXd col(map.rows());
        for (std::size_t i = 0; i < mats.size(); ++i) {
            const Eigen::MatrixXd br = basis[c] * mats[i] - mats[i] * basis[c];
            col.segment(static_cast<Eigen::Index>(i) * r * r, r * r) = Eigen::Map<const Eigen::VectorXd>(br.data(), r * r);
        }
        map.col(c) = col;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map);
    const auto& sv = svd.singularValues();
    const double top = std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * top) ++rank;
    return N - rank;
}

namespace {

struct FrameObjective {
    int r;
    int s;
    std::vector<Eigen::MatrixXd> basis;

    std::vector<Eigen::MatrixXd> alphas(const Eigen::MatrixXd& Y) const {
        std::vector<Eigen::MatrixXd> out;
        for (int i = 0; i < s; ++i) out.push_back(from_coords(Y.col(i), basis, r));
        return out;
    }

    Eigen::MatrixXd residual_matrix(const Eigen::MatrixXd& Y) const {
        Eigen::MatrixXd M = s * Eigen::MatrixXd::Identity(r, r);
        for (const auto& a : alphas(Y)) M += a * a;
        return M;
    }

    double value(const Eigen::MatrixXd& Y, Eigen::MatrixXd* grad) const {
        const auto as = alphas(Y);
        Eigen::MatrixXd M = s * Eigen::MatrixXd::Identity(r, r);
        for (const auto& a : as) M += a * a;
        if (grad) {
            grad->resize(Y.rows(), Y.cols());
            const double f = std::sqrt(r / 2.0);
            for (int i = 0; i < s; ++i) {
                const Eigen::MatrixXd S = as[i] * M + M * as[i];
                int c = 0;
                for (int a = 0; a < r; ++a)
                    for (int b = a + 1; b < r; ++b) (*grad)(c++, i) = -4.0 * f * S(a, b);
            }
        }
        return M.squaredNorm();
    }
};

Eigen::MatrixXd polar(const Eigen::MatrixXd& Y) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().transpose();
}

Eigen::MatrixXd descend(const FrameObjective& obj, Eigen::MatrixXd Y, int max_iter) {
    Eigen::MatrixXd G;
    double f = obj.value(Y, &G);
    double step = 0.1;
    for (int it = 0; it < max_iter && f > 1e-30; ++it) {
        const Eigen::MatrixXd YtG = Y.transpose() * G;
        const Eigen::MatrixXd rg = G - Y * (0.5 * (YtG + YtG.transpose()));
        const double gn2 = rg.squaredNorm();
        if (gn2 < 1e-30) break;
        step = std::min(step * 2.0, 10.0);
        bool moved = false;
        for (int h = 0; h < 60; ++h) {
            const Eigen::MatrixXd Yn = polar(Y - step * rg);
            Eigen::MatrixXd Gn;
            const double fn = obj.value(Yn, &Gn);
            if (fn <= f - 1e-4 * step * gn2) {
                Y = Yn;
                G = Gn;
                f = fn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return Y;
}

bool frame_less(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

}  // namespace

SearchResult search_uniform(int r, int s, const SearchOptions& opt) {
    if (r < 2) throw DomainError("search_uniform: r must be at least 2");
    const int N = r * (r - 1) / 2;
    if (s < 1 || s > N) throw DomainError("search_uniform: need 1 <= s <= dim so(r)");
    if (opt.trials < 1) throw DomainError("search_uniform: trials must be positive");
    FrameObjective obj{r, s, so_basis(r)};

    struct Run {
        Eigen::MatrixXd Y;
        double frob = 0.0;
        double spectral = 0.0;
    };
    std::vector<Run> runs(opt.trials);
    const std::uint64_t base = splitmix64(opt.seed) ^ (static_cast<std::uint64_t>(r) << 32 | static_cast<std::uint64_t>(s));
    parallel_for(opt.trials, [&](int t) {
        auto rng = stream_rng(base, static_cast<std::uint64_t>(t));
        Eigen::MatrixXd Y = polar(random_normal(N, s, rng));
        Y = descend(obj, Y, opt.max_iterations);
        const Eigen::MatrixXd M = obj.residual_matrix(Y);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
        runs[t] = {Y, M.norm(), es.eigenvalues().cwiseAbs().maxCoeff()};
    });

    SearchResult out;
    out.trials = opt.trials;
    out.best_residual = runs[0].spectral;
    for (const auto& run : runs) out.best_residual = std::min(out.best_residual, run.spectral);

    std::vector<int> order;
    for (int t = 0; t < opt.trials; ++t)
        if (runs[t].frob <= opt.tol) order.push_back(t);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (runs[a].frob != runs[b].frob) return runs[a].frob < runs[b].frob;
        return frame_less(runs[a].Y, runs[b].Y);
    });
    for (int t : order) {
        UniformSubspaceCandidate c;
        c.r = r;
        c.basis = obj.alphas(runs[t].Y);
        out.candidates.push_back(std::move(c));
        out.candidate_residuals.push_back(runs[t].frob);
    }
    return out;
}

std::vector<double> equivalence_invariants(const UniformSubspaceCandidate& cand) {
    const int r = cand.r;
    const auto alphas = so_orthonormalize(cand.basis);
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(r, r);
    Eigen::MatrixXd comm = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        sq += alphas[i] * alphas[i];
        for (std::size_t j = i + 1; j < alphas.size(); ++j) {
            const Eigen::MatrixXd c = alphas[i] * alphas[j] - alphas[j] * alphas[i];
            comm += c.transpose() * c;
        }
    }
    auto spectrum = [](const Eigen::MatrixXd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    };
    std::vector<double> out;
    auto push = [&](double v) {
        double rv = std::round(v * 1e8) / 1e8;
        out.push_back(rv == 0.0 ? 0.0 : rv);
    };
    for (double v : spectrum(sq)) push(v);
    for (double v : spectrum(comm)) push(v);
    push(centralizer_dimension(alphas, r));
    return out;
}

bool same_fingerprint(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

namespace {

std::vector<std::vector<double>> cluster(const std::vector<std::vector<double>>& fps) {
    std::vector<std::vector<double>> reps;
    for (const auto& f : fps) {
        bool found = false;
        for (const auto& r : reps)
            if (same_fingerprint(f, r)) found = true;
        if (!found) reps.push_back(f);
    }
    return reps;
}

}  // namespace

std::vector<So4ClassCount> classify_so4(const SearchOptions& opt) {
    std::vector<So4ClassCount> out;
    std::vector<std::vector<UniformSubspaceCandidate>> reps(7);
    reps[0].push_back(UniformSubspaceCandidate{4, {}});
    for (int s = 1; s <= 6; ++s) {
        SearchOptions o = opt;
        o.seed = opt.seed + static_cast<std::uint64_t>(s);
        const SearchResult res = search_uniform(4, s, o);
        So4ClassCount cc;
        cc.s = s;
        cc.candidates = static_cast<int>(res.candidates.size());
        cc.best_residual = res.best_residual;
        for (const auto& cand : res.candidates) {
            const auto f = equivalence_invariants(cand);
            bool found = false;
            for (const auto& r : cc.fingerprints)
                if (same_fingerprint(f, r)) found = true;
            if (!found) {
                cc.fingerprints.push_back(f);
                reps[s].push_back(cand);
            }
        }
        cc.search_classes = static_cast<int>(cc.fingerprints.size());
        out.push_back(cc);
    }
    for (int s = 4; s <= 6; ++s) {
        std::vector<std::vector<double>> fps;
        for (const auto& rep : reps[6 - s]) fps.push_back(equivalence_invariants(complement_uniform(rep)));
        out[s - 1].duality_classes = static_cast<int>(cluster(fps).size());
    }
    return out;
}

}  // namespace solvgeom
