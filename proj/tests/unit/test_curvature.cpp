#include "helpers.hpp"
#include "oracle.hpp"

#include "solvgeom/carnot.hpp"
#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"
#include "solvgeom/so6_family.hpp"
#include "solvgeom/symmetric.hpp"

#include <doctest.h>

using namespace solvgeom;

namespace {

std::vector<MetricLieAlgebra> battery() {
    std::mt19937_64 rng(17);
    std::vector<MetricLieAlgebra> out;
    out.push_back(testing_util::heisenberg());
    out.push_back(testing_util::real_hyperbolic(4));
    out.push_back(build_solvmanifold(complex_hyperbolic_triple(3)));
    out.push_back(build_solvmanifold(family_triple(w_of(0.2, 0.5, 0.7))));
    out.push_back(build_so_pq(2, 3).base);
    out.push_back(build_sl_nH(3).base);
    // Random brackets on a Heisenberg-like nilpotent algebra with a random metric.
    std::vector<StructureEntry> e;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int k = 3; k < 5; ++k) e.push_back({i, j, k, random_normal(1, 1, rng)(0, 0)});
    out.emplace_back(5, e, testing_util::random_spd(5, rng));
    // Solvable non-unimodular example with a non-orthonormal gram.
    out.emplace_back(3, std::vector<StructureEntry>{{0, 1, 1, 1.0}, {0, 2, 2, 2.0}, {0, 1, 2, 0.5}},
                     testing_util::random_spd(3, rng));
    return out;
}

}  // namespace

TEST_CASE("Ricci agrees with the Levi-Civita oracle") {
    for (const auto& alg : battery()) {
        const Eigen::MatrixXd ric = ricci(alg);
        const Eigen::MatrixXd ref = oracle::ricci(alg.tensor(), alg.gram());
        CHECK((ric - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
        CHECK((ric - ric.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("sectional curvature agrees with the oracle and is plane-invariant") {
    std::mt19937_64 rng(23);
    for (const auto& alg : battery()) {
        const int n = alg.dim();
        for (int t = 0; t < 10; ++t) {
            const Eigen::VectorXd x = random_normal(n, 1, rng), y = random_normal(n, 1, rng);
            const double k = sectional(alg, x, y);
            CHECK(k == doctest::Approx(oracle::sectional(alg.tensor(), alg.gram(), x, y)).epsilon(1e-9));
            CHECK(sectional(alg, y, x) == doctest::Approx(k).epsilon(1e-10));
            const Eigen::Matrix2d m = random_normal(2, 2, rng);
            if (std::abs(m.determinant()) < 1e-3) continue;
            const Eigen::VectorXd u = m(0, 0) * x + m(0, 1) * y, v = m(1, 0) * x + m(1, 1) * y;
            CHECK(std::abs(sectional(alg, u, v) - k) <= 1e-10 * std::max(1.0, std::abs(k)));
        }
    }
    const auto alg = testing_util::real_hyperbolic(3);
    CHECK_THROWS_AS(sectional(alg, unit_vector(3, 1), 2.0 * unit_vector(3, 1)), DomainError);
}

TEST_CASE("constant curvature and flat examples") {
    std::mt19937_64 rng(29);
    const auto hyp = testing_util::real_hyperbolic(5);
    for (int t = 0; t < 20; ++t)
        CHECK(sectional(hyp, random_normal(5, 1, rng), random_normal(5, 1, rng)) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK((ricci(hyp) + 4.0 * hyp.gram()).cwiseAbs().maxCoeff() <= 1e-12);

    const MetricLieAlgebra flat(4, {});
    CHECK(sectional(flat, unit_vector(4, 0), unit_vector(4, 2)) == 0.0);
    CHECK(u_map(flat, unit_vector(4, 0), unit_vector(4, 1)).norm() == 0.0);
}

TEST_CASE("U map and mean curvature") {
    const auto alg = build_solvmanifold(complex_hyperbolic_triple(2));
    const Eigen::VectorXd x = unit_vector(4, 1);
    CHECK(u_map(alg, x, x).isApprox(0.5 * unit_vector(4, 0)));

    for (auto [r, s] : {std::pair{2, 1}, std::pair{4, 3}}) {
        const auto a = build_solvmanifold(r == 2 ? complex_hyperbolic_triple(2) : quaternionic_hyperbolic_triple(2));
        CHECK(mean_curvature(a).isApprox(0.5 * (r + 2 * s) * unit_vector(1 + r + s, 0)));
    }
    CHECK(mean_curvature(testing_util::heisenberg()).norm() == 0.0);
    CHECK(mean_curvature(testing_util::real_hyperbolic(5)).isApprox(4.0 * unit_vector(5, 0)));

    std::mt19937_64 rng(31);
    for (const auto& a : battery()) {
        const Eigen::VectorXd H = mean_curvature(a);
        for (int t = 0; t < 100; ++t) {
            const Eigen::VectorXd X = random_normal(a.dim(), 1, rng);
            CHECK(std::abs(a.inner(H, X) - a.ad_matrix(X).trace()) <= 1e-10 * std::max(1.0, X.norm()));
        }
    }
}

TEST_CASE("Einstein constants of the complex hyperbolic plane") {
    const auto alg = build_solvmanifold(complex_hyperbolic_triple(2));
    const auto ric = ricci(alg);
    CHECK(ric(0, 0) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(ric(1, 1) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(ric(3, 3) == doctest::Approx(-1.5).epsilon(1e-12));
    const auto v = einstein_verdict(alg);
    CHECK(v.is_einstein);
    CHECK(v.lambda == doctest::Approx(-1.5).epsilon(1e-12));

    const auto doubled = alg.with_gram(2.0 * alg.gram());
    const auto v2 = einstein_verdict(doubled);
    CHECK(v2.is_einstein);
    CHECK(std::abs(v2.lambda - 0.5 * v.lambda) <= 1e-12);
}

TEST_CASE("Ricci is block diagonal across a, v, z for Carnot builds") {
    const auto alg = build_solvmanifold(family_triple(w_of(0.1, -0.6, 0.3)));
    const auto ric = ricci(alg);
    CHECK(ric.block(0, 1, 1, 9).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(ric.block(1, 7, 6, 3).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("non-uniform generator gives a non-Einstein metric") {
    DataTriple t{3, 1, {}};
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
    J(1, 0) = std::sqrt(1.5);
    J(0, 1) = -std::sqrt(1.5);
    t.j.push_back(J);
    CHECK_FALSE(einstein_verdict(build_solvmanifold(t)).is_einstein);
}

TEST_CASE("eigenvalue type") {
    const auto carnot = build_solvmanifold(quaternionic_hyperbolic_triple(2));
    const auto t = eigenvalue_type(carnot);
    CHECK(t.eigenvalues == std::vector<long long>{1, 2});
    CHECK(t.multiplicities == std::vector<int>{4, 3});

    const auto hyp = eigenvalue_type(testing_util::real_hyperbolic(4));
    CHECK(hyp.eigenvalues == std::vector<long long>{1});
    CHECK(hyp.multiplicities == std::vector<int>{3});

    const auto so13 = eigenvalue_type(build_so_pq(1, 3).base);
    CHECK(so13.eigenvalues == std::vector<long long>{1});
    CHECK(so13.multiplicities == std::vector<int>{2});

    // Irrational ratio: ad(A) = diag(1, sqrt 2).
    IwasawaDecoration dec;
    dec.a_indices = {0};
    dec.n_indices = {1, 2};
    dec.roots = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, std::sqrt(2.0))};
    const MetricLieAlgebra irr(3, {{0, 1, 1, 1.0}, {0, 2, 2, std::sqrt(2.0)}}, Eigen::MatrixXd(), {}, dec);
    CHECK_THROWS_WITH_AS(eigenvalue_type(irr), doctest::Contains("irrational eigenvalue ratio"), DomainError);
}

TEST_CASE("rank-one reduction") {
    for (const auto& alg : {build_so_pq(2, 4), build_so_pq(2, 3), build_sl_nR(3), build_so_nH(4), build_sl_nH(3)}) {
        const auto red = rank_one_reduction(alg.base);
        CHECK(red.dim() == 1 + alg.n_dim());
        const auto v0 = einstein_verdict(alg.base);
        const auto v1 = einstein_verdict(red);
        CHECK(v1.is_einstein);
        CHECK(std::abs(v1.lambda - v0.lambda) <= 1e-9 * std::abs(v0.lambda));
    }
    const auto hyp = testing_util::real_hyperbolic(4);
    const auto red = rank_one_reduction(hyp);
    CHECK(ricci(red).isApprox(ricci(hyp), 1e-12));
    CHECK_THROWS_AS(rank_one_reduction(testing_util::heisenberg()), DomainError);
}
