#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace solvgeom {

inline constexpr double kTolExact = 1e-10;
inline constexpr double kTolOpt = 1e-6;

/**
 * @brief Iwasawa decoration s = a + n.
 *
 * roots[k] holds the numeric root functional of n-basis vector n_indices[k],
 * evaluated on the a-basis (length = a_indices.size()). May be empty.
 */
struct IwasawaDecoration {
    std::vector<int> a_indices;
    std::vector<int> n_indices;
    std::vector<Eigen::VectorXd> roots;
};

/**
 * @brief Dense structure tensor c(i,j,k) with [e_i,e_j] = sum_k c(i,j,k) e_k.
 *
 * No symmetry is assumed, so this type can hold invalid input for validate().
 */
class StructureTensor {
public:
    StructureTensor() = default;
    explicit StructureTensor(int dim);

    int dim() const { return n_; }
    double& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    int n_ = 0;
    std::vector<double> data_;
};

struct StructureEntry {
    int i;
    int j;
    int k;
    double value;
};

/**
 * @brief Finite-dimensional real Lie algebra with an inner product.
 *
 * Brackets are given by entries with i<j; the other half is derived, so
 * antisymmetry holds by construction. The orthonormal frame (modified
 * Gram-Schmidt on the gram matrix) and the structure constants in that
 * frame are computed once at construction; the object is immutable.
 */
class MetricLieAlgebra {
public:
    MetricLieAlgebra() = default;

    // Throws DomainError for i==j entries, out-of-range indices, non-finite
    // values, a non-symmetric or non-positive gram, or inconsistent decoration.
    // Entries with i>j are folded into (j,i) with a sign flip.
    MetricLieAlgebra(int dim,
                     const std::vector<StructureEntry>& entries,
                     Eigen::MatrixXd gram = Eigen::MatrixXd(),
                     std::vector<std::string> labels = {},
                     std::optional<IwasawaDecoration> decoration = std::nullopt);

    // Takes the antisymmetric part of the i<j half of a dense tensor.
    static MetricLieAlgebra from_tensor(const StructureTensor& c,
                                        Eigen::MatrixXd gram = Eigen::MatrixXd(),
                                        std::vector<std::string> labels = {},
                                        std::optional<IwasawaDecoration> decoration = std::nullopt,
                                        double zero_tol = 0.0);

    int dim() const { return n_; }
    double c(int i, int j, int k) const { return tensor_(i, j, k); }
    const StructureTensor& tensor() const { return tensor_; }
    // Canonical sparse entries, i<j, sorted, nonzero.
    std::vector<StructureEntry> entries() const;

    const Eigen::MatrixXd& gram() const { return gram_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(int i) const;
    int index_of(const std::string& label) const;  // -1 if absent
    const std::optional<IwasawaDecoration>& decoration() const { return decoration_; }

    Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    Eigen::MatrixXd ad_matrix(const Eigen::VectorXd& x) const;
    // ad(e_i)
    const Eigen::MatrixXd& ad_basis(int i) const { return ad_[i]; }
    Eigen::MatrixXd metric_adjoint(const Eigen::MatrixXd& m) const;
    double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

    // Columns of frame() are the coordinates of an orthonormal basis X_a.
    const Eigen::MatrixXd& frame() const { return frame_; }
    const Eigen::MatrixXd& frame_inverse() const { return frame_inv_; }
    // ad(X_a) in the orthonormal frame: ad_on(a)(d,b) = <[X_a,X_b],X_d>.
    const Eigen::MatrixXd& ad_on(int a) const { return ad_on_[a]; }

    // Same brackets and labels with another gram / decoration.
    MetricLieAlgebra with_gram(const Eigen::MatrixXd& gram) const;
    MetricLieAlgebra with_entries(const std::vector<StructureEntry>& entries) const;

private:
    void check_dimension(const Eigen::VectorXd& x) const;
    void build_caches();

    int n_ = 0;
    StructureTensor tensor_;
    Eigen::MatrixXd gram_;
    Eigen::MatrixXd gram_inv_;
    std::vector<std::string> labels_;
    std::optional<IwasawaDecoration> decoration_;
    std::vector<Eigen::MatrixXd> ad_;
    Eigen::MatrixXd frame_;
    Eigen::MatrixXd frame_inv_;
    std::vector<Eigen::MatrixXd> ad_on_;
};

struct ValidationReport {
    double jacobi_residual = 0.0;
    double antisym_residual = 0.0;
    double gram_min_eig = 0.0;
    bool passed = false;
};

ValidationReport validate(const StructureTensor& c, const Eigen::MatrixXd& gram, double tol = kTolExact);
ValidationReport validate(const MetricLieAlgebra& algebra, double tol = kTolExact);

// B(i,j) = tr(ad e_i ad e_j)
Eigen::MatrixXd killing_form(const MetricLieAlgebra& algebra);

struct IwasawaCheck {
    bool cond_i = false;    // a abelian
    bool cond_ii = false;   // ad(A) symmetric, nonzero
    bool cond_iii = false;  // some A with ad(A)|n positive-definite
    Eigen::VectorXd witness;  // coefficients over a_indices when cond_iii holds
};

// Throws DomainError if there is no decoration or n is not an ideal.
IwasawaCheck iwasawa_check(const MetricLieAlgebra& algebra, double tol = kTolExact);

// Basis vector e_i of length n.
Eigen::VectorXd unit_vector(int n, int i);

}  // namespace solvgeom
