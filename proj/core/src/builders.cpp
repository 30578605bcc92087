#include "solvgeom/symmetric.hpp"

#include "solvgeom/error.hpp"

#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>

namespace solvgeom {

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;
const cd I(0.0, 1.0);
const double kSqrt2 = std::sqrt(2.0);

struct NBasisItem {
    Mat m;
    std::string tag;
    int w_column = 0;
};

Eigen::VectorXd flatten(const Mat& m) {
    const Eigen::Index sz = m.size();
    Eigen::VectorXd v(2 * sz);
    for (Eigen::Index t = 0; t < sz; ++t) {
        v(t) = m.data()[t].real();
        v(sz + t) = m.data()[t].imag();
    }
    return v;
}

std::string format_coefficient(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Names roots by their coordinates over the smallest nonzero root entry.
std::vector<std::string> root_names_of(const std::vector<Eigen::VectorXd>& roots) {
    double unit = 0.0;
    for (const auto& r : roots)
        for (Eigen::Index k = 0; k < r.size(); ++k)
            if (std::abs(r(k)) > 1e-9 && (unit == 0.0 || std::abs(r(k)) < unit)) unit = std::abs(r(k));
    std::vector<std::string> names;
    for (const auto& r : roots) {
        std::string s;
        for (Eigen::Index k = 0; k < r.size(); ++k) {
            const double c = unit > 0.0 ? r(k) / unit : 0.0;
            if (std::abs(c) < 1e-9) continue;
            const double ac = std::abs(c);
            std::string mag;
            if (std::abs(ac - 1.0) > 1e-9)
                mag = std::abs(ac - std::round(ac)) < 1e-9 ? std::to_string(static_cast<long long>(std::round(ac)))
                                                            : format_coefficient(ac);
            if (c < 0) s += "-";
            else if (!s.empty()) s += "+";
            s += mag + "w" + std::to_string(k + 1);
        }
        names.push_back(s.empty() ? "0" : s);
    }
    return names;
}

RootDecoratedAlgebra assemble(const std::string& space, const std::vector<Mat>& a_basis,
                              std::vector<NBasisItem> n_items, const std::vector<std::string>& a_tags) {
    const int p = static_cast<int>(a_basis.size());
    if (p == 0) throw DomainError("empty Cartan subspace");

    // Structure constants [a_k, x] on the raw n list to get roots, then regroup n by root.
    std::vector<Mat> all = a_basis;
    for (const auto& it : n_items) all.push_back(it.m);
    int d = static_cast<int>(all.size());
    auto solve_brackets = [&](const std::vector<Mat>& basis) {
        const int dd = static_cast<int>(basis.size());
        Eigen::MatrixXd V(flatten(basis[0]).size(), dd);
        for (int i = 0; i < dd; ++i) V.col(i) = flatten(basis[i]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
        if (qr.rank() < dd) throw DomainError("matrix basis is linearly dependent");
        StructureTensor c(dd);
        for (int i = 0; i < dd; ++i)
            for (int j = i + 1; j < dd; ++j) {
                const Mat br = basis[i] * basis[j] - basis[j] * basis[i];
                const Eigen::VectorXd v = flatten(br);
                const Eigen::VectorXd x = qr.solve(v);
                if ((V * x - v).norm() > 1e-9 * std::max(1.0, v.norm()))
                    throw DomainError("matrix basis is not closed under brackets");
                for (int k = 0; k < dd; ++k) {
                    const double val = std::abs(x(k)) < 1e-12 ? 0.0 : x(k);
                    c(i, j, k) = val;
                    c(j, i, k) = -val;
                }
            }
        return c;
    };

    StructureTensor c0 = solve_brackets(all);
    std::vector<Eigen::VectorXd> raw_roots;
    for (int x = p; x < d; ++x) {
        Eigen::VectorXd r(p);
        for (int k = 0; k < p; ++k) {
            r(k) = c0(k, x, x);
            for (int y = 0; y < d; ++y)
                if (y != x && std::abs(c0(k, x, y)) > 1e-9)
                    throw DomainError("n basis vector " + n_items[x - p].tag + " is not a root vector");
        }
        raw_roots.push_back(r);
    }
    // Stable grouping by root in order of first appearance.
    std::vector<int> order;
    std::vector<bool> used(raw_roots.size(), false);
    for (std::size_t s = 0; s < raw_roots.size(); ++s) {
        if (used[s]) continue;
        for (std::size_t t = s; t < raw_roots.size(); ++t)
            if (!used[t] && (raw_roots[t] - raw_roots[s]).cwiseAbs().maxCoeff() < 1e-9) {
                used[t] = true;
                order.push_back(static_cast<int>(t));
            }
    }
    std::vector<NBasisItem> grouped;
    std::vector<Eigen::VectorXd> roots;
    for (int t : order) {
        grouped.push_back(n_items[t]);
        roots.push_back(raw_roots[t]);
    }
    n_items = std::move(grouped);
    all = a_basis;
    for (const auto& it : n_items) all.push_back(it.m);
    const StructureTensor c = solve_brackets(all);

    // Killing normalization: B(h,h) = 2 tr(ad_n(h)^2) against Re tr(h h).
    double kappa = 0.0;
    for (int k = 0; k < p; ++k) {
        const double bhh = 2.0 * std::accumulate(roots.begin(), roots.end(), 0.0,
                                                 [k](double s, const Eigen::VectorXd& r) { return s + r(k) * r(k); });
        const double tr = (a_basis[k] * a_basis[k]).trace().real();
        const double ck = bhh / tr;
        if (k == 0) kappa = ck;
        else if (std::abs(ck - kappa) > 1e-9 * std::abs(kappa))
            throw DomainError("inconsistent Killing normalization on a");
    }

    std::vector<Mat> sym;
    for (const auto& m : all) sym.push_back(0.5 * (m + m.adjoint()));
    Eigen::MatrixXd G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) G(i, j) = G(j, i) = kappa * (sym[i] * sym[j]).trace().real();

    double norm = G(p, p);
    for (int i = p; i < d; ++i) {
        if (std::abs(G(i, i) - G(p, p)) > 1e-10 * G(p, p)) norm = 0.0;
        for (int j = 0; j < d; ++j)
            if (j != i && std::abs(G(i, j)) > 1e-10 * std::abs(G(i, i)))
                throw DomainError("n basis is not orthogonal for the symmetric metric");
    }
    if (norm > 0.0) G /= norm;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (std::abs(G(i, j)) < 1e-14) G(i, j) = 0.0;

    std::vector<StructureEntry> entries;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (c(i, j, k) != 0.0) entries.push_back({i, j, k, c(i, j, k)});

    RootDecoratedAlgebra out;
    out.tags = a_tags;
    for (const auto& it : n_items) {
        out.tags.push_back(it.tag);
        out.w_column.push_back(it.w_column);
    }
    IwasawaDecoration dec;
    for (int k = 0; k < p; ++k) dec.a_indices.push_back(k);
    for (int x = p; x < d; ++x) dec.n_indices.push_back(x);
    dec.roots = roots;
    out.base = MetricLieAlgebra(d, entries, G, out.tags, dec);
    out.root_names = root_names_of(roots);
    out.space = space;
    out.norm_constant = norm;
    return out;
}

std::vector<std::string> h_tags(int p) {
    std::vector<std::string> t;
    for (int k = 1; k <= p; ++k) t.push_back("H_" + std::to_string(k));
    return t;
}

// Quaternion units as complex 2x2 matrices.
Mat quat_unit(char u) {
    Mat q = Mat::Zero(2, 2);
    switch (u) {
        case '1': q << 1, 0, 0, 1; break;
        case 'i': q << I, 0, 0, -I; break;
        case 'j': q << 0, -1, 1, 0; break;
        default: {
            Mat qi(2, 2), qj(2, 2);
            qi << I, 0, 0, -I;
            qj << 0, -1, 1, 0;
            q = qi * qj;
        }
    }
    return q;
}

RootDecoratedAlgebra build_pq(char field, int p, int q) {
    if (p < 1) throw DomainError("p must be at least 1");
    if (p > q) throw DomainError("p must not exceed q");
    const int N = p + q, m = q - p;
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N);
    for (int t = p; t < N; ++t) M(t, t) = -1.0;
    auto e = [N](int t) { return Eigen::VectorXd::Unit(N, t); };
    std::vector<Eigen::VectorXd> up, um, g;
    for (int k = 0; k < p; ++k) {
        up.push_back((e(k) + e(p + k)) / kSqrt2);
        um.push_back((e(k) - e(p + k)) / kSqrt2);
    }
    for (int c = 0; c < m; ++c) g.push_back(e(2 * p + c));
    const std::string units = field == 'R' ? "1" : field == 'C' ? "1i" : "1ijk";

    auto emb = [&](const Eigen::MatrixXd& real, char u) -> Mat {
        if (field == 'H') {
            const Mat qu = quat_unit(u);
            Mat out(2 * N, 2 * N);
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s) out.block(r * N, s * N, N, N) = real.cast<cd>() * qu(r, s);
            return out;
        }
        if (field == 'C' && u == 'i') return real.cast<cd>() * I;
        return real.cast<cd>();
    };
    auto rv = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, char u) {
        if (u == '1') return emb(M * (a * b.transpose() - b * a.transpose()), '1');
        return emb(M * (a * b.transpose() + b * a.transpose()), u);
    };
    auto prefix = [](char u) { return u == '1' ? std::string() : std::string(1, u); };

    std::vector<Mat> a;
    for (int k = 0; k < p; ++k) a.push_back(emb(M * (um[k] * up[k].transpose() - up[k] * um[k].transpose()), '1'));
    std::vector<NBasisItem> nb;
    for (int k = 0; k < p; ++k)
        for (int c = 0; c < m; ++c)
            for (char u : units)
                nb.push_back({rv(um[k], g[c], u),
                              prefix(u) + "W_" + std::to_string(k + 1) + "," + std::to_string(c + 1), c + 1});
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < j; ++i)
            for (char u : units) {
                const std::string idx = std::to_string(j + 1) + "," + std::to_string(i + 1);
                nb.push_back({rv(um[j], um[i], u), prefix(u) + "P_" + idx, 0});
                nb.push_back({rv(um[j], up[i], u), prefix(u) + "M_" + idx, 0});
            }
    if (field != 'R')
        for (int k = 0; k < p; ++k)
            for (char u : units.substr(1))
                nb.push_back({emb(M * (um[k] * um[k].transpose()), u), prefix(u) + "T_" + std::to_string(k + 1), 0});
    if (nb.empty()) throw DomainError("nilradical is trivial");
    const std::string name = std::string(field == 'R' ? "so" : field == 'C' ? "su" : "sp") + "(" +
                             std::to_string(p) + "," + std::to_string(q) + ")";
    return assemble(name, a, nb, h_tags(p));
}

// Skew unit E_ij - E_ji, 1-based.
Mat skew_unit(int N, int i, int j) {
    Mat m = Mat::Zero(N, N);
    m(i - 1, j - 1) += 1.0;
    m(j - 1, i - 1) -= 1.0;
    return m;
}

Mat unit_matrix(int N, int i, int j) {
    Mat m = Mat::Zero(N, N);
    m(i - 1, j - 1) = 1.0;
    return m;
}

}  // namespace

RootDecoratedAlgebra build_so_pq(int p, int q) { return build_pq('R', p, q); }
RootDecoratedAlgebra build_su_pq(int p, int q) { return build_pq('C', p, q); }
RootDecoratedAlgebra build_sp_pq(int p, int q) { return build_pq('H', p, q); }

RootDecoratedAlgebra build_so_nH(int n) {
    if (n < 4) throw DomainError("so(n,H) needs n >= 4");
    const int N = 2 * n, m = n / 2;
    auto E = [N](int i, int j) { return skew_unit(N, i, j); };
    std::vector<Mat> a;
    for (int j = 1; j <= m; ++j) a.push_back(I / kSqrt2 * (E(2 * j - 1, 2 * j) - E(n + 2 * j - 1, n + 2 * j)));
    std::vector<NBasisItem> nb;
    for (int j = 1; j <= m; ++j)
        for (int k = j + 1; k <= m; ++k)
            for (int sg : {1, -1}) {
                const double pm = sg, mp = -sg;
                const Mat A = 0.5 * ((E(2*j-1, 2*k-1) + mp * E(2*j, 2*k) + E(n+2*j-1, n+2*k-1) + mp * E(n+2*j, n+2*k)) +
                                     I * (mp * E(2*j-1, 2*k) - E(2*j, 2*k-1) + pm * E(n+2*j-1, n+2*k) + E(n+2*j, n+2*k-1)));
                const Mat B = 0.5 * ((E(2*j-1, 2*k) + pm * E(2*j, 2*k-1) + E(n+2*j-1, n+2*k) + pm * E(n+2*j, n+2*k-1)) +
                                     I * (pm * E(2*j-1, 2*k-1) - E(2*j, 2*k) + mp * E(n+2*j-1, n+2*k-1) + E(n+2*j, n+2*k)));
                const Mat C = 0.5 * ((E(2*j-1, n+2*k) + mp * E(2*j, n+2*k-1) + mp * E(2*k-1, n+2*j) + E(2*k, n+2*j-1)) +
                                     I * (mp * E(2*j-1, n+2*k-1) - E(2*j, n+2*k) + pm * E(2*k-1, n+2*j-1) + E(2*k, n+2*j)));
                const Mat D = 0.5 * ((E(2*j-1, n+2*k-1) + E(2*k-1, n+2*j-1) + pm * E(2*j, n+2*k) + pm * E(2*k, n+2*j)) +
                                     I * (pm * E(2*j-1, n+2*k) - E(2*j, n+2*k-1) + E(2*k-1, n+2*j) + mp * E(2*k, n+2*j-1)));
                const std::string sfx = std::string(sg > 0 ? "+" : "-") + "_" + std::to_string(j) + std::to_string(k);
                nb.push_back({A, "A" + sfx, 0});
                nb.push_back({B, "B" + sfx, 0});
                nb.push_back({C, "C" + sfx, 0});
                nb.push_back({D, "D" + sfx, 0});
            }
    for (int k = 1; k <= m; ++k)
        nb.push_back({1 / kSqrt2 * ((E(2*k-1, n+2*k-1) + E(2*k, n+2*k)) + I * (E(2*k-1, n+2*k) - E(2*k, n+2*k-1))),
                      "G_" + std::to_string(k), 0});
    if (n % 2)
        for (int k = 1; k <= m; ++k) {
            const std::string s = "_" + std::to_string(k);
            nb.push_back({1 / kSqrt2 * ((E(2*k, n) + E(n+2*k, 2*n)) + I * (E(2*k-1, n) - E(n+2*k-1, 2*n))), "X" + s, 0});
            nb.push_back({1 / kSqrt2 * ((E(2*k-1, n) + E(n+2*k-1, 2*n)) - I * (E(2*k, n) - E(n+2*k, 2*n))), "Y" + s, 0});
            nb.push_back({1 / kSqrt2 * ((E(2*k, 2*n) + E(n, n+2*k)) + I * (E(2*k-1, 2*n) - E(n, n+2*k-1))), "Z" + s, 0});
            nb.push_back({1 / kSqrt2 * ((E(2*k-1, 2*n) + E(n, n+2*k-1)) - I * (E(2*k, 2*n) - E(n, n+2*k))), "W" + s, 0});
        }
    return assemble("so(" + std::to_string(n) + ",H)", a, nb, h_tags(m));
}

RootDecoratedAlgebra build_sl_nH(int n) {
    if (n < 2) throw DomainError("sl(n,H) needs n >= 2");
    const int N = 2 * n;
    auto F = [N](int i, int j) { return unit_matrix(N, i, j); };
    std::vector<Mat> a;
    for (int k = 1; k < n; ++k) a.push_back(F(k, k) - F(k + 1, k + 1) + F(n + k, n + k) - F(n + k + 1, n + k + 1));
    std::vector<NBasisItem> nb;
    for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
            const std::string s = "_" + std::to_string(j) + std::to_string(k);
            nb.push_back({I * kSqrt2 * (F(j, k) - F(n + j, n + k)), "A" + s, 0});
            nb.push_back({I * kSqrt2 * (F(j, n + k) + F(n + j, k)), "B" + s, 0});
            nb.push_back({cd(kSqrt2) * (F(j, n + k) - F(n + j, k)), "C" + s, 0});
            nb.push_back({cd(kSqrt2) * (F(j, k) + F(n + j, n + k)), "D" + s, 0});
        }
    return assemble("sl(" + std::to_string(n) + ",H)", a, nb, h_tags(n - 1));
}

RootDecoratedAlgebra build_type_iv_sl(int n) {
    if (n < 2) throw DomainError("type IV sl(n,C) needs n >= 2");
    auto F = [n](int i, int j) { return unit_matrix(n, i, j); };
    std::vector<Mat> a;
    for (int k = 1; k < n; ++k) a.push_back(F(k, k) - F(k + 1, k + 1));
    std::vector<NBasisItem> nb;
    for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
            const std::string s = "_" + std::to_string(j) + std::to_string(k);
            nb.push_back({F(j, k), "X" + s, 0});
            nb.push_back({I * F(j, k), "JX" + s, 0});
        }
    return assemble("sl(" + std::to_string(n) + ",C)", a, nb, h_tags(n - 1));
}

RootDecoratedAlgebra build_sl_nR(int n) {
    if (n < 2) throw DomainError("sl(n,R) needs n >= 2");
    auto F = [n](int i, int j) { return unit_matrix(n, i, j); };
    std::vector<Mat> a;
    for (int k = 1; k < n; ++k) a.push_back(F(k, k) - F(k + 1, k + 1));
    std::vector<NBasisItem> nb;
    for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) nb.push_back({F(j, k), "E_" + std::to_string(j) + std::to_string(k), 0});
    return assemble("sl(" + std::to_string(n) + ",R)", a, nb, h_tags(n - 1));
}

RootDecoratedAlgebra build_space(const std::string& space, int p, int q, int n) {
    if (space == "so_pq") return build_so_pq(p, q);
    if (space == "su_pq") return build_su_pq(p, q);
    if (space == "sp_pq") return build_sp_pq(p, q);
    if (space == "so_nH") return build_so_nH(n);
    if (space == "sl_nH") return build_sl_nH(n);
    if (space == "type4_sl") return build_type_iv_sl(n);
    if (space == "sl_nR") return build_sl_nR(n);
    throw DomainError("unknown space '" + space + "'");
}

}  // namespace solvgeom
