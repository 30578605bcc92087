#pragma once

#include "solvgeom/carnot.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace solvgeom {

// [[X, Y], [-Y, X]] for X skew, Y symmetric (3x3). Throws on shape/symmetry violations.
Eigen::MatrixXd tau(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

struct AbcBasis {
    std::array<Eigen::MatrixXd, 3> A;
    std::array<Eigen::MatrixXd, 3> B;
    std::array<Eigen::MatrixXd, 3> C;
};
AbcBasis basis_abc();

struct FamilyPoint {
    double r = 1.0;
    double s = 0.0;
    double t = 0.0;
    std::array<Eigen::MatrixXd, 3> D;  // D_i = r A_i + s B_i + t C_i
};

// sign_mask flips B_1..B_3 (entries 0-2) and C_1..C_3 (entries 3-5) when -1.
// (r, s, t) is renormalized; throws DomainError for the zero vector.
FamilyPoint w_of(double r, double s, double t, const std::array<int, 6>& sign_mask = {1, 1, 1, 1, 1, 1});

UniformSubspaceCandidate family_subspace(const FamilyPoint& p);
// r = 6, s = 3, j(Z_i) = D_i
DataTriple family_triple(const FamilyPoint& p);

struct Centralizer {
    int dim = 0;
    std::vector<Eigen::MatrixXd> basis;
    Eigen::VectorXd singular_values;  // of the stacked map X -> ([X, D_i])_i, ascending
};
Centralizer centralizer_in_so6(const FamilyPoint& p);

// Largest cosine between W and its centralizer (principal angle).
double angle_to_centralizer(const FamilyPoint& p);

// Largest cosine between [W, W] and W, from the cross-Gram of orthonormal bases.
// Throws DomainError if [W, W] = 0.
double bracket_angle(const FamilyPoint& p);
// |r| sqrt((r^2+s^2)/(r^2+s^2+4t^2-2|t^2+sqrt2 st|)). Wrong where t^2 + sqrt2 st < 0.
double bracket_angle_uncorrected_form(double r, double s, double t);
// Same maximization with xy+yz+zx ranging over [-1/2, 1].
double bracket_angle_closed_form(double r, double s, double t);

// <[D1,D2],D3>, <[D2,D3],D1>, <[D3,D1],D2> under (,).
std::array<double, 3> cyclic_bracket_products(const FamilyPoint& p);

// (|X|^2/2 + |Z|^2)(|Y|^2/2 + |W|^2) + <j(Z)X, j(W)Y> - |j(Z)Y + j(W)X|^2 / 4
double curvature_margin(const std::array<Eigen::MatrixXd, 3>& j, const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                        const Eigen::VectorXd& Z, const Eigen::VectorXd& W);
// Margin of the plane spanned by p, q in n = R^6 + R^3 (rotated so X ⟂ Y, Z ⟂ W).
double plane_margin(const std::array<Eigen::MatrixXd, 3>& j, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct MarginSampler {
    int n_random = 10000;
    int n_descent = 100;
    int n_sectional = 10000;
    std::uint64_t seed = kDefaultSeed;
};

struct MarginResult {
    double min_margin = 0.0;         // min over random samples and descents
    double min_random_margin = 0.0;
    double min_descent_margin = 0.0;
    double max_sectional = 0.0;      // max over random planes of the full solvmanifold
    int sectional_samples = 0;
};

// Numerical evidence only: sampling cannot prove the inequality.
MarginResult negative_curvature_margin(const FamilyPoint& p, const MarginSampler& sampler = {});

struct FamilyRow {
    double r = 0.0;
    double s = 0.0;
    double t = 0.0;
    double einstein_residual = 0.0;
    double cos_centralizer = 0.0;
    double cos_bracket = 0.0;  // NaN when [W, W] = 0
    double min_sectional = 0.0;
    double max_sectional = 0.0;
};

// Grid over the t >= 0 hemisphere; s >= 0 on the equator. Deterministic order.
std::vector<FamilyRow> family_report(int grid_resolution, std::uint64_t seed = kDefaultSeed, int planes_per_row = 200);
std::string family_csv(const std::vector<FamilyRow>& rows);

}  // namespace solvgeom
