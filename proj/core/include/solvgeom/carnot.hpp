#pragma once

#include "solvgeom/algebra.hpp"
#include "solvgeom/random.hpp"

#include <cstdint>
#include <vector>

namespace solvgeom {

/**
 * @brief Data triple (v, z, j): j[k] is j(Z_k) as an r x r skew matrix for an
 * orthonormal basis Z_1..Z_s of z.
 */
struct DataTriple {
    int r = 0;
    int s = 0;
    std::vector<Eigen::MatrixXd> j;
};

// s skew r x r matrices spanning a subspace of so(r).
struct UniformSubspaceCandidate {
    int r = 0;
    std::vector<Eigen::MatrixXd> basis;
    int s() const { return static_cast<int>(basis.size()); }
};

// (a, b) = -(1/r) tr(a b)
double so_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Basis [A, v_1..v_r, z_1..z_s]: [A,v]=v/2, [A,z]=z, <[X,Y],Z_k> = <j(Z_k)X, Y>.
MetricLieAlgebra build_solvmanifold(const DataTriple& triple);

// Complex hyperbolic space CH^n: r = 2(n-1), s = 1, j(Z) = standard complex structure.
DataTriple complex_hyperbolic_triple(int n);
// Quaternionic hyperbolic space HH^n: r = 4(n-1), s = 3, j(Z_k) = left multiplication by i, j, k.
DataTriple quaternionic_hyperbolic_triple(int n);

// Reads j off the brackets. v and z index lists; their spans are orthonormalized.
DataTriple j_from_brackets(const MetricLieAlgebra& algebra, const std::vector<int>& v_indices,
                           const std::vector<int>& z_indices);
// For algebras from build_solvmanifold (v = 1..r, z = r+1..r+s).
DataTriple j_from_brackets(const MetricLieAlgebra& algebra, int r, int s);

// Bracket tensor on n = v + z (dimension r + s).
StructureTensor brackets_from_j(const DataTriple& triple);

struct EinsteinConditions {
    double cond_i_residual = 0.0;   // max |(j_a, j_b) - delta_ab|
    double cond_ii_residual = 0.0;  // ||sum j_k^2 + s Id||_max
};
EinsteinConditions einstein_conditions(const DataTriple& triple);

// Orthonormal basis of the span under (,) (symmetric orthonormalization).
// Throws DomainError if the matrices are dependent.
std::vector<Eigen::MatrixXd> so_orthonormalize(const std::vector<Eigen::MatrixXd>& mats);

// ||sum a_i^2 + s Id||_max after orthonormalization; 0 for s = 0.
double uniform_residual(const UniformSubspaceCandidate& cand);
bool is_uniform(const UniformSubspaceCandidate& cand, double tol = 1e-9);

// Left / right multiplication by the quaternion q = (q0, q1, q2, q3) on R^4 = H.
Eigen::Matrix4d quat_left(const Eigen::Vector4d& q);
Eigen::Matrix4d quat_right(const Eigen::Vector4d& q);
// (L(i), L(j), L(k), R(i), R(j), R(k)); orthonormal under (,).
std::vector<Eigen::MatrixXd> so4_basis();
UniformSubspaceCandidate so4_subspace(const Eigen::MatrixXd& coeff);
// Columns 1-3 orthogonal to columns 4-6. Throws DomainError if rows are not orthonormal.
bool so4_criterion(const Eigen::MatrixXd& coeff, double tol = 1e-9);

// Orthonormal basis e_ab = sqrt(r/2)(E_ab - E_ba), a<b.
std::vector<Eigen::MatrixXd> so_basis(int r);

// (,)-orthogonal complement in so(r). Throws DomainError if cand is not uniform.
UniformSubspaceCandidate complement_uniform(const UniformSubspaceCandidate& cand, double tol = 1e-9);

struct SearchOptions {
    int trials = 200;
    std::uint64_t seed = kDefaultSeed;
    double tol = kTolOpt;
    int max_iterations = 5000;
};

struct SearchResult {
    std::vector<UniformSubspaceCandidate> candidates;  // sorted by (residual, frame)
    std::vector<double> candidate_residuals;
    double best_residual = 0.0;  // min over restarts of ||sum a_i^2 + s Id||_2
    int trials = 0;
};

// Projected gradient descent on (,)-orthonormal s-frames with random restarts.
SearchResult search_uniform(int r, int s, const SearchOptions& options = {});

// Sorted spectra of sum a_i^2 and sum_{i<j} [a_i,a_j]^T [a_i,a_j], then the
// centralizer dimension; rounded to 8 decimals. Necessary for equivalence only.
std::vector<double> equivalence_invariants(const UniformSubspaceCandidate& cand);
bool same_fingerprint(const std::vector<double>& a, const std::vector<double>& b, double tol = 1e-6);

// Dimension of {X in so(r) : [X, a_i] = 0 for all i}.
int centralizer_dimension(const std::vector<Eigen::MatrixXd>& mats, int r);

struct So4ClassCount {
    int s = 0;
    int search_classes = 0;     // from search + fingerprint clustering
    int duality_classes = -1;   // from complements of the (6-s)-classes; -1 if not computed
    int candidates = 0;
    double best_residual = 0.0;
    std::vector<std::vector<double>> fingerprints;
};

// Search and clustering for s = 1..6 in so(4); s = 4..6 also by complement duality.
std::vector<So4ClassCount> classify_so4(const SearchOptions& options = {});

}  // namespace solvgeom
