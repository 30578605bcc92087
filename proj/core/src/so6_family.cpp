#include "solvgeom/so6_family.hpp"
#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"
#include "solvgeom/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace solvgeom {

Eigen::MatrixXd tau(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != 3 || X.cols() != 3 || Y.rows() != 3 || Y.cols() != 3)
        throw DimensionError("tau expects 3x3 blocks");
    if ((X + X.transpose()).cwiseAbs().maxCoeff() > kTolExact) throw DomainError("tau: X is not skew-symmetric");
    if ((Y - Y.transpose()).cwiseAbs().maxCoeff() > kTolExact) throw DomainError("tau: Y is not symmetric");
    Eigen::MatrixXd m(6, 6);
    m << X, Y, -Y, X;
    return m;
}

AbcBasis basis_abc() {
    const double k = std::sqrt(1.5);
    const Eigen::Matrix3d Z = Eigen::Matrix3d::Zero();
    std::array<Eigen::Matrix3d, 3> X;
    X[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    X[1] << 0, 0, -1, 0, 0, 0, 1, 0, 0;
    X[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    AbcBasis b;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Matrix3d Xi = k * X[i];
        const Eigen::Matrix3d Yi = Xi.cwiseAbs();
        Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
        d(i, i) = std::sqrt(3.0);
        b.A[i] = tau(Xi, Z);
        b.B[i] = tau(Z, Yi);
        b.C[i] = tau(Z, d);
    }
    return b;
}

FamilyPoint w_of(double r, double s, double t, const std::array<int, 6>& mask) {
    const double nrm = std::sqrt(r * r + s * s + t * t);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DomainError("w_of: (r, s, t) must be a nonzero finite vector");
    FamilyPoint p;
    p.r = r / nrm;
    p.s = s / nrm;
    p.t = t / nrm;
    const AbcBasis b = basis_abc();
    for (int i = 0; i < 3; ++i)
        p.D[i] = p.r * b.A[i] + p.s * (mask[i] < 0 ? -1.0 : 1.0) * b.B[i] + p.t * (mask[3 + i] < 0 ? -1.0 : 1.0) * b.C[i];
    return p;
}

UniformSubspaceCandidate family_subspace(const FamilyPoint& p) {
    return UniformSubspaceCandidate{6, {p.D[0], p.D[1], p.D[2]}};
}

DataTriple family_triple(const FamilyPoint& p) {
    return DataTriple{6, 3, {p.D[0], p.D[1], p.D[2]}};
}

namespace {

Eigen::VectorXd so_vec(const Eigen::MatrixXd& m, const std::vector<Eigen::MatrixXd>& basis) {
    Eigen::VectorXd v(basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c) v(c) = so_inner(m, basis[c]);
    return v;
}

// Orthonormal columns spanning the coordinate vectors (rank by relative tolerance).
Eigen::MatrixXd orth(const Eigen::MatrixXd& V, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double top = std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * top) ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace

Centralizer centralizer_in_so6(const FamilyPoint& p) {
    const auto basis = so_basis(6);
    const int N = static_cast<int>(basis.size());
    Eigen::MatrixXd map(3 * 36, N);
    for (int c = 0; c < N; ++c)
        for (int i = 0; i < 3; ++i) {
            const Eigen::MatrixXd br = basis[c] * p.D[i] - p.D[i] * basis[c];
            map.block(i * 36, c, 36, 1) = Eigen::Map<const Eigen::VectorXd>(br.data(), 36);
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
    Centralizer out;
    out.singular_values = svd.singularValues().reverse();
    const double top = std::max(1.0, svd.singularValues()(0));
    for (int c = 0; c < N; ++c) {
        if (svd.singularValues()(c) <= 1e-10 * top) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
            for (int k = 0; k < N; ++k) m += svd.matrixV()(k, c) * basis[k];
            out.basis.push_back(m);
        }
    }
    out.dim = static_cast<int>(out.basis.size());
    return out;
}

double angle_to_centralizer(const FamilyPoint& p) {
    const auto basis = so_basis(6);
    const Centralizer cz = centralizer_in_so6(p);
    if (cz.dim == 0) return 0.0;
    Eigen::MatrixXd W(basis.size(), 3), C(basis.size(), cz.dim);
    for (int i = 0; i < 3; ++i) W.col(i) = so_vec(p.D[i], basis);
    for (int i = 0; i < cz.dim; ++i) C.col(i) = so_vec(cz.basis[i], basis);
    const Eigen::MatrixXd QW = orth(W, 1e-12);
    const Eigen::MatrixXd QC = orth(C, 1e-12);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(QW.transpose() * QC);
    return std::min(1.0, svd.singularValues()(0));
}

double bracket_angle(const FamilyPoint& p) {
    const auto basis = so_basis(6);
    Eigen::MatrixXd W(basis.size(), 3), B(basis.size(), 3);
    const auto& D = p.D;
    const Eigen::MatrixXd br[3] = {D[0] * D[1] - D[1] * D[0], D[2] * D[0] - D[0] * D[2], D[1] * D[2] - D[2] * D[1]};
    for (int i = 0; i < 3; ++i) {
        W.col(i) = so_vec(D[i], basis);
        B.col(i) = so_vec(br[i], basis);
    }
    if (B.cwiseAbs().maxCoeff() <= 1e-12) throw DomainError("bracket_angle: [W, W] = 0");
    const Eigen::MatrixXd QB = orth(B, 1e-9);
    const Eigen::MatrixXd QW = orth(W, 1e-12);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(QB.transpose() * QW);
    return std::min(1.0, svd.singularValues()(0));
}

double bracket_angle_uncorrected_form(double r, double s, double t) {
    const double rs = r * r + s * s;
    if (rs == 0.0) return 0.0;
    const double den = rs + 4 * t * t - 2 * std::abs(t * t + std::sqrt(2.0) * s * t);
    return std::abs(r) * std::sqrt(rs / den);
}

double bracket_angle_closed_form(double r, double s, double t) {
    const double rs = r * r + s * s;
    if (rs == 0.0) return 0.0;
    const double q = t * t + std::sqrt(2.0) * s * t;
    const double den = rs + 4 * t * t + (q > 0 ? -2 * q : 4 * q);
    return std::abs(r) * std::sqrt(rs / den);
}

std::array<double, 3> cyclic_bracket_products(const FamilyPoint& p) {
    const auto& D = p.D;
    auto br = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) -> Eigen::MatrixXd { return a * b - b * a; };
    return {so_inner(br(D[0], D[1]), D[2]), so_inner(br(D[1], D[2]), D[0]), so_inner(br(D[2], D[0]), D[1])};
}

double curvature_margin(const std::array<Eigen::MatrixXd, 3>& j, const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                        const Eigen::VectorXd& Z, const Eigen::VectorXd& W) {
    Eigen::MatrixXd jZ = Eigen::MatrixXd::Zero(6, 6), jW = Eigen::MatrixXd::Zero(6, 6);
    for (int k = 0; k < 3; ++k) {
        jZ += Z(k) * j[k];
        jW += W(k) * j[k];
    }
    const double lhs = (0.5 * X.squaredNorm() + Z.squaredNorm()) * (0.5 * Y.squaredNorm() + W.squaredNorm());
    const double rhs = -(jZ * X).dot(jW * Y) + 0.25 * (jZ * Y + jW * X).squaredNorm();
    return lhs - rhs;
}

double plane_margin(const std::array<Eigen::MatrixXd, 3>& j, const Eigen::VectorXd& p0, const Eigen::VectorXd& q0) {
    Eigen::VectorXd p = p0.normalized();
    Eigen::VectorXd q = q0 - q0.dot(p) * p;
    q.normalize();
    const double pv = p.head(6).dot(q.head(6));
    const double d = q.head(6).squaredNorm() - p.head(6).squaredNorm();
    const double th = 0.5 * std::atan2(-2.0 * pv, d);
    const Eigen::VectorXd a = std::cos(th) * p + std::sin(th) * q;
    const Eigen::VectorXd b = -std::sin(th) * p + std::cos(th) * q;
    return curvature_margin(j, a.head(6), b.head(6), a.tail(3), b.tail(3));
}

namespace {

Eigen::MatrixXd polar2(const Eigen::MatrixXd& Y) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().transpose();
}

double descend_margin(const std::array<Eigen::MatrixXd, 3>& j, Eigen::MatrixXd Y) {
    auto f = [&](const Eigen::MatrixXd& M) { return plane_margin(j, M.col(0), M.col(1)); };
    auto grad = [&](const Eigen::MatrixXd& M) {
        Eigen::MatrixXd g(M.rows(), M.cols());
        const double h = 1e-6;
        for (Eigen::Index i = 0; i < M.size(); ++i) {
            Eigen::MatrixXd a = M, b = M;
            a(i) += h;
            b(i) -= h;
            g(i) = (f(a) - f(b)) / (2 * h);
        }
        const Eigen::MatrixXd ytg = M.transpose() * g;
        return Eigen::MatrixXd(g - M * (0.5 * (ytg + ytg.transpose())));
    };
    double fy = f(Y);
    double step = 0.1;
    for (int it = 0; it < 300; ++it) {
        const Eigen::MatrixXd g = grad(Y);
        const double gn2 = g.squaredNorm();
        if (gn2 < 1e-20) break;
        step = std::min(step * 2.0, 1.0);
        bool moved = false;
        for (int h = 0; h < 40; ++h) {
            const Eigen::MatrixXd Yn = polar2(Y - step * g);
            const double fn = f(Yn);
            if (fn <= fy - 1e-4 * step * gn2) {
                Y = Yn;
                fy = fn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return fy;
}

}  // namespace

MarginResult negative_curvature_margin(const FamilyPoint& p, const MarginSampler& sampler) {
    MarginResult out;
    const auto& j = p.D;
    constexpr double inf = std::numeric_limits<double>::infinity();

    const int chunks = 16;
    std::vector<double> chunk_min(chunks, inf);
    parallel_for(chunks, [&](int c) {
        auto rng = stream_rng(sampler.seed, 1000 + static_cast<std::uint64_t>(c));
        for (int i = c; i < sampler.n_random; i += chunks) {
            const Eigen::MatrixXd m = random_normal(9, 2, rng);
            chunk_min[c] = std::min(chunk_min[c], plane_margin(j, m.col(0), m.col(1)));
        }
    });
    out.min_random_margin = *std::min_element(chunk_min.begin(), chunk_min.end());

    std::vector<double> desc(std::max(0, sampler.n_descent), inf);
    parallel_for(sampler.n_descent, [&](int d) {
        auto rng = stream_rng(sampler.seed, 5000 + static_cast<std::uint64_t>(d));
        desc[d] = descend_margin(j, polar2(random_normal(9, 2, rng)));
    });
    out.min_descent_margin = desc.empty() ? inf : *std::min_element(desc.begin(), desc.end());
    out.min_margin = std::min(out.min_random_margin, out.min_descent_margin);

    const MetricLieAlgebra alg = build_solvmanifold(family_triple(p));
    std::vector<double> chunk_max(chunks, -inf);
    parallel_for(chunks, [&](int c) {
        auto rng = stream_rng(sampler.seed, 9000 + static_cast<std::uint64_t>(c));
        for (int i = c; i < sampler.n_sectional; i += chunks) {
            const Eigen::MatrixXd m = random_normal(alg.dim(), 2, rng);
            chunk_max[c] = std::max(chunk_max[c], sectional(alg, m.col(0), m.col(1)));
        }
    });
    out.max_sectional = *std::max_element(chunk_max.begin(), chunk_max.end());
    out.sectional_samples = sampler.n_sectional;
    return out;
}

std::vector<FamilyRow> family_report(int grid, std::uint64_t seed, int planes) {
    if (grid < 2) throw DomainError("family_report: grid resolution must be at least 2");
    const double pi = std::acos(-1.0);
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < grid; ++i) {
        const double th = 0.5 * pi * i / (grid - 1);
        if (i == 0) {
            pts.push_back({0.0, 0.0, 1.0});
            continue;
        }
        for (int k = 0; k < 2 * grid; ++k) {
            const double ph = 2.0 * pi * k / (2 * grid);
            if (i == grid - 1 && ph >= pi - 1e-12) continue;
            const double t = (i == grid - 1) ? 0.0 : std::cos(th);
            pts.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), t});
        }
    }
    std::vector<FamilyRow> rows(pts.size());
    parallel_for(static_cast<int>(pts.size()), [&](int idx) {
        const FamilyPoint p = w_of(pts[idx][0], pts[idx][1], pts[idx][2]);
        FamilyRow row;
        row.r = p.r;
        row.s = p.s;
        row.t = p.t;
        const MetricLieAlgebra alg = build_solvmanifold(family_triple(p));
        const Eigen::MatrixXd ric = ricci(alg);
        row.einstein_residual = einstein_verdict_of(ric, alg.gram()).residual;
        row.cos_centralizer = angle_to_centralizer(p);
        try {
            row.cos_bracket = bracket_angle(p);
        } catch (const DomainError&) {
            row.cos_bracket = std::numeric_limits<double>::quiet_NaN();
        }
        auto rng = stream_rng(seed, static_cast<std::uint64_t>(idx));
        row.min_sectional = std::numeric_limits<double>::infinity();
        row.max_sectional = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < planes; ++k) {
            const Eigen::MatrixXd m = random_normal(alg.dim(), 2, rng);
            const double K = sectional(alg, m.col(0), m.col(1));
            row.min_sectional = std::min(row.min_sectional, K);
            row.max_sectional = std::max(row.max_sectional, K);
        }
        rows[idx] = row;
    });
    return rows;
}

std::string family_csv(const std::vector<FamilyRow>& rows) {
    std::string out = "r,s,t,einstein_residual,cos_centralizer,cos_bracket,min_sectional,max_sectional\n";
    char buf[512];
    for (const auto& w : rows) {
        auto f = [](double v) {
            char b[40];
            if (std::isnan(v)) return std::string("nan");
            std::snprintf(b, sizeof b, "%.10g", v == 0.0 ? 0.0 : v);
            return std::string(b);
        };
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%s,%s,%s,%s\n", f(w.r).c_str(), f(w.s).c_str(), f(w.t).c_str(),
                      f(w.einstein_residual).c_str(), f(w.cos_centralizer).c_str(), f(w.cos_bracket).c_str(),
                      f(w.min_sectional).c_str(), f(w.max_sectional).c_str());
        out += buf;
    }
    return out;
}

}  // namespace solvgeom
