#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace solvgeom {

namespace {

Eigen::MatrixXd combine_on(const MetricLieAlgebra& algebra, const Eigen::VectorXd& x_on) {
    const int n = algebra.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        if (x_on(i) != 0.0) m += x_on(i) * algebra.ad_on(i);
    return m;
}

Eigen::VectorXd u_on(const MetricLieAlgebra& algebra, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const int n = algebra.dim();
    Eigen::VectorXd u(n);
    for (int d = 0; d < n; ++d) {
        const Eigen::MatrixXd& ad = algebra.ad_on(d);
        u(d) = 0.5 * (y.dot(ad * x) + x.dot(ad * y));
    }
    return u;
}

Eigen::VectorXd h_on(const MetricLieAlgebra& algebra) {
    const int n = algebra.dim();
    Eigen::VectorXd h(n);
    for (int d = 0; d < n; ++d) h(d) = algebra.ad_on(d).trace();
    return h;
}

}  // namespace

Eigen::VectorXd u_map(const MetricLieAlgebra& algebra, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != algebra.dim() || y.size() != algebra.dim()) throw DimensionError("u_map: wrong vector length");
    const Eigen::MatrixXd& Fi = algebra.frame_inverse();
    return algebra.frame() * u_on(algebra, Fi * x, Fi * y);
}

Eigen::VectorXd mean_curvature(const MetricLieAlgebra& algebra) {
    return algebra.frame() * h_on(algebra);
}

Eigen::MatrixXd ricci(const MetricLieAlgebra& algebra) {
    const int n = algebra.dim();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd T3 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) T3.noalias() += algebra.ad_on(i) * algebra.ad_on(i).transpose();
    const Eigen::MatrixXd adH = combine_on(algebra, h_on(algebra));
    for (int x = 0; x < n; ++x)
        for (int y = x; y < n; ++y) {
            const Eigen::MatrixXd& ax = algebra.ad_on(x);
            const Eigen::MatrixXd& ay = algebra.ad_on(y);
            const double t1 = ax.cwiseProduct(ay).sum();
            const double b = ax.cwiseProduct(ay.transpose()).sum();
            const double uh = 0.5 * (adH(y, x) + adH(x, y));
            const double v = -0.5 * t1 - 0.5 * b + 0.25 * T3(x, y) - uh;
            R(x, y) = v;
            R(y, x) = v;
        }
    const Eigen::MatrixXd& Fi = algebra.frame_inverse();
    Eigen::MatrixXd out = Fi.transpose() * R * Fi;
    return 0.5 * (out + out.transpose());
}

EinsteinVerdict einstein_verdict_of(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& gram, double tol) {
    EinsteinVerdict v;
    const double rmax = ric.cwiseAbs().maxCoeff();
    if (rmax == 0.0) {
        v.is_einstein = true;
        return v;
    }
    v.lambda = gram.llt().solve(ric).trace() / static_cast<double>(ric.rows());
    v.residual = (ric - v.lambda * gram).cwiseAbs().maxCoeff() / rmax;
    v.is_einstein = v.residual <= tol;
    return v;
}

EinsteinVerdict einstein_verdict(const MetricLieAlgebra& algebra, double tol) {
    return einstein_verdict_of(ricci(algebra), algebra.gram(), tol);
}

double sectional(const MetricLieAlgebra& algebra, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != algebra.dim() || y.size() != algebra.dim()) throw DimensionError("sectional: wrong vector length");
    const Eigen::MatrixXd& Fi = algebra.frame_inverse();
    Eigen::VectorXd u = Fi * x;
    Eigen::VectorXd v = Fi * y;
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw DomainError("sectional: zero vector");
    u /= nu;
    v -= v.dot(u) * u;
    if (v.norm() <= 1e-12 * nv) throw DomainError("sectional: vectors are linearly dependent");
    v.normalize();

    const Eigen::MatrixXd adu = combine_on(algebra, u);
    const Eigen::MatrixXd adv = combine_on(algebra, v);
    const Eigen::VectorXd uv = adu * v;
    const Eigen::VectorXd Uuv = u_on(algebra, u, v);
    const Eigen::VectorXd Uuu = u_on(algebra, u, u);
    const Eigen::VectorXd Uvv = u_on(algebra, v, v);
    return -0.75 * uv.squaredNorm()
           - 0.5 * (adu * uv).dot(v)
           + 0.5 * (adv * uv).dot(u)
           + Uuv.squaredNorm()
           - Uuu.dot(Uvv);
}

namespace {

// Best rational approximation p/q with q <= max_den (continued fractions).
bool rationalize(double x, int max_den, double tol, long long& p, long long& q) {
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        const long long ai = static_cast<long long>(a);
        const long long h2 = ai * h1 + h0;
        const long long k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (std::abs(x - static_cast<double>(h1) / k1) <= tol * std::max(1.0, std::abs(x))) {
            p = h1;
            q = k1;
            return true;
        }
        const double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return false;
}

}  // namespace

EigenvalueType eigenvalue_type(const MetricLieAlgebra& algebra, double tol) {
    const auto& dec = algebra.decoration();
    if (!dec) throw DomainError("eigenvalue_type requires an Iwasawa decoration");
    const auto& N = dec->n_indices;
    const int dn = static_cast<int>(N.size());
    if (dn == 0) throw DomainError("eigenvalue_type: empty nilradical");
    const Eigen::MatrixXd adH = algebra.ad_matrix(mean_curvature(algebra));
    Eigen::MatrixXd M(dn, dn);
    for (int p = 0; p < dn; ++p)
        for (int q = 0; q < dn; ++q) M(p, q) = adH(N[p], N[q]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double scale = std::max(1e-300, ev.cwiseAbs().maxCoeff());
    std::vector<double> re;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).imag()) > tol * scale) throw DomainError("eigenvalue_type: non-real eigenvalue");
        if (!(ev(i).real() > tol * scale)) throw DomainError("eigenvalue_type: non-positive eigenvalue");
        re.push_back(ev(i).real());
    }
    std::sort(re.begin(), re.end());

    std::vector<double> distinct;
    std::vector<int> mult;
    for (double v : re) {
        if (!distinct.empty() && std::abs(v - distinct.back()) <= tol * scale) {
            ++mult.back();
        } else {
            distinct.push_back(v);
            mult.push_back(1);
        }
    }

    std::vector<long long> num, den;
    for (double v : distinct) {
        long long p = 0, q = 1;
        if (!rationalize(v / distinct.front(), 64, tol, p, q)) throw DomainError("irrational eigenvalue ratio");
        num.push_back(p);
        den.push_back(q);
    }
    long long l = 1;
    for (long long q : den) l = std::lcm(l, q);
    std::vector<long long> mu;
    long long g = 0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        mu.push_back(num[i] * (l / den[i]));
        g = std::gcd(g, mu.back());
    }
    for (auto& m : mu) m /= g;

    EigenvalueType out;
    out.eigenvalues = mu;
    out.multiplicities = mult;
    out.scale = static_cast<double>(mu.front()) / distinct.front();
    return out;
}

MetricLieAlgebra rank_one_reduction(const MetricLieAlgebra& algebra) {
    const auto& dec = algebra.decoration();
    if (!dec) throw DomainError("rank_one_reduction requires an Iwasawa decoration");
    const int n = algebra.dim();
    const auto& N = dec->n_indices;
    const int dn = static_cast<int>(N.size());
    const Eigen::VectorXd H = mean_curvature(algebra);
    const double hn = std::sqrt(algebra.inner(H, H));
    if (!(hn > 1e-12)) throw DomainError("rank_one_reduction: mean curvature vector is zero");
    const Eigen::VectorXd h = H / hn;

    const int m = dn + 1;
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, m);
    V.col(0) = h;
    for (int p = 0; p < dn; ++p) V(N[p], p + 1) = 1.0;

    std::vector<char> in_n(n, 0);
    for (int i : N) in_n[i] = 1;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, algebra.ad_basis(i).cwiseAbs().maxCoeff());

    // Brackets land in n (ideal); read off n-coordinates directly.
    auto n_coords = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd out(dn);
        for (int i = 0; i < n; ++i)
            if (!in_n[i] && std::abs(w(i)) > kTolExact * std::max(1.0, scale))
                throw DomainError("rank_one_reduction: n is not an ideal");
        for (int p = 0; p < dn; ++p) out(p) = w(N[p]);
        return out;
    };

    std::vector<StructureEntry> entries;
    const Eigen::MatrixXd adh = algebra.ad_matrix(h);
    for (int q = 0; q < dn; ++q) {
        const Eigen::VectorXd w = n_coords(adh.col(N[q]));
        for (int k = 0; k < dn; ++k)
            if (w(k) != 0.0) entries.push_back({0, q + 1, k + 1, w(k)});
    }
    for (int p = 0; p < dn; ++p)
        for (int q = p + 1; q < dn; ++q)
            for (int k = 0; k < dn; ++k) {
                const double v = algebra.c(N[p], N[q], N[k]);
                if (v != 0.0) entries.push_back({p + 1, q + 1, k + 1, v});
            }
    for (int p = 0; p < dn; ++p)
        for (int q = p + 1; q < dn; ++q)
            n_coords(algebra.ad_basis(N[p]).col(N[q]));

    Eigen::MatrixXd G = V.transpose() * algebra.gram() * V;
    G = 0.5 * (G + G.transpose());

    std::vector<std::string> labels{"H"};
    for (int i : N) labels.push_back(algebra.label(i));

    IwasawaDecoration d;
    d.a_indices = {0};
    for (int p = 0; p < dn; ++p) d.n_indices.push_back(p + 1);
    bool h_in_a = true;
    for (int i : N)
        if (std::abs(h(i)) > 1e-12) h_in_a = false;
    if (!dec->roots.empty() && h_in_a) {
        for (int p = 0; p < dn; ++p) {
            double v = 0.0;
            for (std::size_t k = 0; k < dec->a_indices.size(); ++k) v += h(dec->a_indices[k]) * dec->roots[p](k);
            d.roots.push_back(Eigen::VectorXd::Constant(1, v));
        }
    }
    return MetricLieAlgebra(m, entries, G, labels, d);
}

}  // namespace solvgeom
