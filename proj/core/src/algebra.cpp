#include "solvgeom/algebra.hpp"
#include "solvgeom/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace solvgeom {

StructureTensor::StructureTensor(int dim)
    : n_(dim), data_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {
    if (dim < 0) throw DimensionError("negative dimension");
}

Eigen::VectorXd unit_vector(int n, int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    return e;
}

namespace {

Eigen::MatrixXd modified_gram_schmidt(const Eigen::MatrixXd& G) {
    const int n = static_cast<int>(G.rows());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXd v = unit_vector(n, a);
        // two passes keep the frame orthonormal to roundoff for graded grams
        for (int pass = 0; pass < 2; ++pass) {
            for (int b = 0; b < a; ++b) {
                const double proj = F.col(b).dot(G * v);
                v -= proj * F.col(b);
            }
        }
        const double nrm2 = v.dot(G * v);
        if (!(nrm2 > 0.0)) throw DomainError("gram matrix is not positive definite");
        F.col(a) = v / std::sqrt(nrm2);
    }
    return F;
}

}  // namespace

MetricLieAlgebra::MetricLieAlgebra(int dim,
                                   const std::vector<StructureEntry>& entries,
                                   Eigen::MatrixXd gram,
                                   std::vector<std::string> labels,
                                   std::optional<IwasawaDecoration> decoration)
    : n_(dim), tensor_(dim), labels_(std::move(labels)), decoration_(std::move(decoration)) {
    if (dim <= 0) throw DomainError("algebra dimension must be positive");
    for (const auto& e : entries) {
        if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim)
            throw DomainError("structure index out of range");
        if (!std::isfinite(e.value)) throw DomainError("non-finite structure constant");
        if (e.i == e.j) {
            if (e.value != 0.0) throw DomainError("antisymmetry violated: c[i][i][k] != 0");
            continue;
        }
        const int i = std::min(e.i, e.j);
        const int j = std::max(e.i, e.j);
        const double v = e.i < e.j ? e.value : -e.value;
        tensor_(i, j, e.k) += v;
        tensor_(j, i, e.k) -= v;
    }

    if (gram.size() == 0) gram = Eigen::MatrixXd::Identity(dim, dim);
    if (gram.rows() != dim || gram.cols() != dim) throw DimensionError("gram has wrong shape");
    if (!gram.allFinite()) throw DomainError("non-finite gram entry");
    const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw DomainError("gram is not symmetric");
    gram_ = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 1e-14 * scale))
        throw DomainError("gram is not positive definite");

    if (!labels_.empty() && static_cast<int>(labels_.size()) != dim)
        throw DimensionError("label count does not match dimension");

    if (decoration_) {
        std::vector<int> seen(dim, 0);
        for (int i : decoration_->a_indices) {
            if (i < 0 || i >= dim || seen[i]++) throw DomainError("bad a index in decoration");
        }
        for (int i : decoration_->n_indices) {
            if (i < 0 || i >= dim || seen[i]++) throw DomainError("bad n index in decoration");
        }
        const auto& roots = decoration_->roots;
        if (!roots.empty()) {
            if (roots.size() != decoration_->n_indices.size())
                throw DimensionError("one root per n index expected");
            for (const auto& r : roots)
                if (r.size() != static_cast<Eigen::Index>(decoration_->a_indices.size()))
                    throw DimensionError("root length must equal dim a");
        }
    }
    build_caches();
}

MetricLieAlgebra MetricLieAlgebra::from_tensor(const StructureTensor& c,
                                               Eigen::MatrixXd gram,
                                               std::vector<std::string> labels,
                                               std::optional<IwasawaDecoration> decoration,
                                               double zero_tol) {
    const int n = c.dim();
    std::vector<StructureEntry> entries;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = 0.5 * (c(i, j, k) - c(j, i, k));
                if (std::abs(v) > zero_tol) entries.push_back({i, j, k, v});
            }
    return MetricLieAlgebra(n, entries, std::move(gram), std::move(labels), std::move(decoration));
}

void MetricLieAlgebra::build_caches() {
    const int n = n_;
    ad_.assign(n, Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) ad_[i](k, j) = tensor_(i, j, k);

    gram_inv_ = gram_.llt().solve(Eigen::MatrixXd::Identity(n, n));
    frame_ = modified_gram_schmidt(gram_);
    frame_inv_ = frame_.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));

    ad_on_.assign(n, Eigen::MatrixXd::Zero(n, n));
    for (int a = 0; a < n; ++a) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            if (frame_(i, a) != 0.0) m += frame_(i, a) * ad_[i];
        ad_on_[a] = frame_inv_ * m * frame_;
    }
}

std::vector<StructureEntry> MetricLieAlgebra::entries() const {
    std::vector<StructureEntry> out;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                if (tensor_(i, j, k) != 0.0) out.push_back({i, j, k, tensor_(i, j, k)});
    return out;
}

std::string MetricLieAlgebra::label(int i) const {
    if (i < 0 || i >= n_) throw DimensionError("label index out of range");
    if (!labels_.empty()) return labels_[i];
    return "e" + std::to_string(i);
}

int MetricLieAlgebra::index_of(const std::string& label) const {
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i)
        if (labels_[i] == label) return i;
    return -1;
}

void MetricLieAlgebra::check_dimension(const Eigen::VectorXd& x) const {
    if (x.size() != n_)
        throw DimensionError("vector of length " + std::to_string(x.size()) +
                             " for algebra of dimension " + std::to_string(n_));
}

Eigen::VectorXd MetricLieAlgebra::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    check_dimension(x);
    check_dimension(y);
    return ad_matrix(x) * y;
}

Eigen::MatrixXd MetricLieAlgebra::ad_matrix(const Eigen::VectorXd& x) const {
    check_dimension(x);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        if (x(i) != 0.0) m += x(i) * ad_[i];
    return m;
}

Eigen::MatrixXd MetricLieAlgebra::metric_adjoint(const Eigen::MatrixXd& m) const {
    if (m.rows() != n_ || m.cols() != n_) throw DimensionError("metric_adjoint: wrong shape");
    return gram_inv_ * m.transpose() * gram_;
}

double MetricLieAlgebra::inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    check_dimension(x);
    check_dimension(y);
    return x.dot(gram_ * y);
}

MetricLieAlgebra MetricLieAlgebra::with_gram(const Eigen::MatrixXd& gram) const {
    return MetricLieAlgebra(n_, entries(), gram, labels_, decoration_);
}

MetricLieAlgebra MetricLieAlgebra::with_entries(const std::vector<StructureEntry>& entries) const {
    return MetricLieAlgebra(n_, entries, gram_, labels_, decoration_);
}

ValidationReport validate(const StructureTensor& c, const Eigen::MatrixXd& gram, double tol) {
    ValidationReport rep;
    const int n = c.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                rep.antisym_residual = std::max(rep.antisym_residual, std::abs(c(i, j, k) + c(j, i, k)));

    // P[(i,j),(k,l)] = sum_m c[i][j][m] c[m][k][l]
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> left(c.data().data(), n * n, n);
    const Eigen::Map<const RowMat> right(c.data().data(), n, n * n);
    const RowMat P = left * right;
    auto at = [&](int i, int j, int k, int l) { return P(i * n + j, k * n + l); };
    double jac = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    jac = std::max(jac, std::abs(at(i, j, k, l) + at(j, k, i, l) + at(k, i, j, l)));
    rep.jacobi_residual = jac;

    if (gram.rows() == n && gram.cols() == n && gram.allFinite() && n > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
        rep.gram_min_eig = es.eigenvalues().minCoeff();
    } else {
        rep.gram_min_eig = 0.0;
    }
    rep.passed = rep.jacobi_residual <= tol && rep.antisym_residual <= tol && rep.gram_min_eig > 0.0;
    return rep;
}

ValidationReport validate(const MetricLieAlgebra& algebra, double tol) {
    return validate(algebra.tensor(), algebra.gram(), tol);
}

Eigen::MatrixXd killing_form(const MetricLieAlgebra& algebra) {
    const int n = algebra.dim();
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = (algebra.ad_basis(i).cwiseProduct(algebra.ad_basis(j).transpose())).sum();
            B(i, j) = v;
            B(j, i) = v;
        }
    return B;
}

namespace {

// Minimum-norm point of the convex hull of the columns of P (Frank-Wolfe with
// exact line search). Returns a point x; callers test min_i <x, P_i> > 0.
Eigen::VectorXd hull_min_norm(const Eigen::MatrixXd& P, int iters) {
    Eigen::VectorXd x = P.rowwise().mean();
    for (int it = 0; it < iters; ++it) {
        const Eigen::VectorXd g = P.transpose() * x;
        Eigen::Index s;
        g.minCoeff(&s);
        const Eigen::VectorXd d = P.col(s) - x;
        const double dd = d.squaredNorm();
        if (dd == 0.0) break;
        const double step = std::clamp(-x.dot(d) / dd, 0.0, 1.0);
        if (step == 0.0) break;
        x += step * d;
        if ((P.transpose() * x).minCoeff() > 0.0 && it > 8) break;
    }
    return x;
}

}  // namespace

IwasawaCheck iwasawa_check(const MetricLieAlgebra& algebra, double tol) {
    const auto& dec = algebra.decoration();
    if (!dec) throw DomainError("iwasawa_check requires an Iwasawa decoration");
    const int n = algebra.dim();
    const auto& A = dec->a_indices;
    const auto& N = dec->n_indices;
    std::vector<char> in_n(n, 0);
    for (int i : N) in_n[i] = 1;

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, algebra.ad_basis(i).cwiseAbs().maxCoeff());
    const double atol = tol * std::max(1.0, scale);

    for (int i = 0; i < n; ++i)
        for (int j : N)
            for (int k = 0; k < n; ++k)
                if (!in_n[k] && std::abs(algebra.c(i, j, k)) > atol)
                    throw DomainError("n_indices do not span an ideal");

    IwasawaCheck out;
    out.cond_i = true;
    for (std::size_t p = 0; p < A.size(); ++p)
        for (std::size_t q = p + 1; q < A.size(); ++q)
            for (int k = 0; k < n; ++k)
                if (std::abs(algebra.c(A[p], A[q], k)) > atol) out.cond_i = false;

    out.cond_ii = true;
    Eigen::MatrixXd stacked(n * n, A.size());
    for (std::size_t p = 0; p < A.size(); ++p) {
        const Eigen::MatrixXd& ad = algebra.ad_basis(A[p]);
        if ((algebra.metric_adjoint(ad) - ad).cwiseAbs().maxCoeff() > atol) out.cond_ii = false;
        stacked.col(p) = Eigen::Map<const Eigen::VectorXd>(ad.data(), n * n);
    }
    if (!A.empty()) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
        if (svd.singularValues().minCoeff() <= atol) out.cond_ii = false;
    }

    if (A.empty()) return out;
    const int dn = static_cast<int>(N.size());
    if (dn == 0) {
        out.cond_iii = true;
        out.witness = unit_vector(static_cast<int>(A.size()), 0);
        return out;
    }

    // Symmetric matrices of ad(a_k)|n in an orthonormal frame of n.
    Eigen::MatrixXd Gn(dn, dn);
    for (int p = 0; p < dn; ++p)
        for (int q = 0; q < dn; ++q) Gn(p, q) = algebra.gram()(N[p], N[q]);
    Eigen::LLT<Eigen::MatrixXd> llt(Gn);
    const Eigen::MatrixXd L = llt.matrixL();
    std::vector<Eigen::MatrixXd> S;
    for (int a : A) {
        Eigen::MatrixXd M(dn, dn);
        for (int p = 0; p < dn; ++p)
            for (int q = 0; q < dn; ++q) M(p, q) = algebra.ad_basis(a)(N[p], N[q]);
        Eigen::MatrixXd Sk = L.transpose() * M * L.transpose().inverse();
        S.push_back(0.5 * (Sk + Sk.transpose()));
    }

    // Joint eigenvectors from a generic combination.
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(dn, dn);
    for (auto& Sk : S) comb += unif(rng) * Sk;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(comb);
    Eigen::MatrixXd P(A.size(), dn);
    for (int v = 0; v < dn; ++v) {
        const Eigen::VectorXd ev = es.eigenvectors().col(v);
        for (std::size_t k = 0; k < A.size(); ++k) P(k, v) = ev.dot(S[k] * ev);
    }

    const double pscale = std::max(1e-300, P.cwiseAbs().maxCoeff());
    const Eigen::VectorXd x = hull_min_norm(P / pscale, 20000);
    const double margin = (P.transpose() * x).minCoeff() / pscale;
    if (x.norm() > 0.0 && margin > tol * x.norm()) {
        out.cond_iii = true;
        out.witness = x / x.norm();
    }
    return out;
}

}  // namespace solvgeom
