#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace solvgeom {

inline constexpr std::uint64_t kDefaultSeed = 0xE1257E1ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent generator for sub-task `stream` of a run seeded with `seed`.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 1)));
}

inline Eigen::MatrixXd random_normal(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
    return m;
}

inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_normal(n, n, rng));
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) *= -1.0;
    return q;
}

}  // namespace solvgeom
