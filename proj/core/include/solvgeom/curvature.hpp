#pragma once

#include "solvgeom/algebra.hpp"

#include <vector>

namespace solvgeom {

struct EinsteinVerdict {
    bool is_einstein = false;
    double lambda = 0.0;
    double residual = 0.0;  // ||Ric - lambda G||_max / ||Ric||_max
};

struct EigenvalueType {
    std::vector<long long> eigenvalues;  // ascending, coprime
    std::vector<int> multiplicities;
    double scale = 0.0;                  // ad(scale * H)|n has the eigenvalues above
};

// <U(x,y), z> = 1/2 <[z,x],y> + 1/2 <[z,y],x>
Eigen::VectorXd u_map(const MetricLieAlgebra& algebra, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// H = sum_i U(X_i, X_i); <H, X> = tr ad(X)
Eigen::VectorXd mean_curvature(const MetricLieAlgebra& algebra);

// Ricci form in the original basis.
Eigen::MatrixXd ricci(const MetricLieAlgebra& algebra);

EinsteinVerdict einstein_verdict(const MetricLieAlgebra& algebra, double tol = 1e-9);
EinsteinVerdict einstein_verdict_of(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& gram, double tol = 1e-9);

// Sectional curvature of span{x, y}. Throws DomainError if x, y are dependent.
double sectional(const MetricLieAlgebra& algebra, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Integer-normalized spectrum of ad(H) on n. Throws DomainError for complex or
// non-positive eigenvalues and for "irrational eigenvalue ratio".
EigenvalueType eigenvalue_type(const MetricLieAlgebra& algebra, double tol = 1e-6);

// Metric subalgebra R H + n with the induced inner product; basis (H/|H|, n).
MetricLieAlgebra rank_one_reduction(const MetricLieAlgebra& algebra);

}  // namespace solvgeom
