#pragma once

// Reference curvature through the Levi-Civita connection of a left-invariant
// metric, computed directly in the given (non-orthonormal) basis.

#include "solvgeom/algebra.hpp"

#include <Eigen/Dense>
#include <vector>

namespace oracle {

// L[i](:, j) = coordinates of nabla_{e_i} e_j.
inline std::vector<Eigen::MatrixXd> connection(const solvgeom::StructureTensor& c, const Eigen::MatrixXd& G) {
    const int n = c.dim();
    const Eigen::MatrixXd Gi = G.inverse();
    std::vector<Eigen::MatrixXd> ad(n, Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) ad[i](k, j) = c(i, j, k);
    std::vector<Eigen::MatrixXd> star(n);
    for (int i = 0; i < n; ++i) star[i] = Gi * ad[i].transpose() * G;
    std::vector<Eigen::MatrixXd> L(n, Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            L[i].col(j) = 0.5 * (ad[i].col(j) - star[i].col(j) - star[j].col(i));
    return L;
}

// R(e_i, e_j) as a matrix.
inline Eigen::MatrixXd curvature_operator(const solvgeom::StructureTensor& c, const std::vector<Eigen::MatrixXd>& L,
                                          const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const int n = c.dim();
    Eigen::MatrixXd Lx = Eigen::MatrixXd::Zero(n, n), Ly = Eigen::MatrixXd::Zero(n, n), Lxy = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd xy = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) xy(k) += x(i) * y(j) * c(i, j, k);
    for (int i = 0; i < n; ++i) {
        Lx += x(i) * L[i];
        Ly += y(i) * L[i];
        Lxy += xy(i) * L[i];
    }
    return Lx * Ly - Ly * Lx - Lxy;
}

inline Eigen::MatrixXd ricci(const solvgeom::StructureTensor& c, const Eigen::MatrixXd& G) {
    const int n = c.dim();
    const auto L = connection(c, G);
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Eigen::VectorXd ea = Eigen::VectorXd::Unit(n, a);
        for (int b = 0; b < n; ++b) {
            // Ric(e_a, e_b) = tr(X -> R(X, e_a) e_b)
            double tr = 0.0;
            for (int x = 0; x < n; ++x) {
                const Eigen::MatrixXd R = curvature_operator(c, L, Eigen::VectorXd::Unit(n, x), ea);
                tr += R(x, b);
            }
            ric(a, b) = tr;
        }
    }
    // Ric in coordinates: Ric(e_a, e_b) is a bilinear form; no G factor needed.
    return ric;
}

inline double sectional(const solvgeom::StructureTensor& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y) {
    const auto L = connection(c, G);
    const Eigen::VectorXd Ryy = curvature_operator(c, L, x, y) * y;
    const double num = x.dot(G * Ryy);
    const double den = x.dot(G * x) * y.dot(G * y) - std::pow(x.dot(G * y), 2);
    return num / den;
}

inline double jacobi_residual(const solvgeom::StructureTensor& c) {
    const int n = c.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m)
                        s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

}  // namespace oracle
