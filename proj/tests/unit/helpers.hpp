#pragma once

#include "solvgeom/algebra.hpp"
#include "solvgeom/carnot.hpp"

#include <cmath>
#include <random>

namespace testing_util {

inline solvgeom::MetricLieAlgebra heisenberg() {
    return solvgeom::MetricLieAlgebra(3, {{0, 1, 2, 1.0}}, Eigen::MatrixXd(), {"X", "Y", "Z"});
}

inline solvgeom::MetricLieAlgebra so3() {
    return solvgeom::MetricLieAlgebra(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}});
}

// R A + R^{n-1} with ad(A) = Id on the second factor.
inline solvgeom::MetricLieAlgebra real_hyperbolic(int n) {
    std::vector<solvgeom::StructureEntry> e;
    for (int k = 1; k < n; ++k) e.push_back({0, k, k, 1.0});
    solvgeom::IwasawaDecoration dec;
    dec.a_indices = {0};
    for (int k = 1; k < n; ++k) {
        dec.n_indices.push_back(k);
        dec.roots.push_back(Eigen::VectorXd::Ones(1));
    }
    return solvgeom::MetricLieAlgebra(n, e, Eigen::MatrixXd(), {}, dec);
}

inline Eigen::MatrixXd random_skew(int r, std::mt19937_64& rng) {
    const Eigen::MatrixXd m = solvgeom::random_normal(r, r, rng);
    return m - m.transpose();
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
    const Eigen::MatrixXd m = solvgeom::random_normal(n, n, rng);
    return m * m.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace testing_util
