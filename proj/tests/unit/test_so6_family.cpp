#include "helpers.hpp"
#include "oracle.hpp"

#include "solvgeom/carnot.hpp"
#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"
#include "solvgeom/so6_family.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace solvgeom;

namespace {

std::array<double, 3> random_point(std::mt19937_64& rng) {
    const Eigen::Vector3d v = random_normal(3, 1, rng).normalized();
    return {v(0), v(1), v(2)};
}

Eigen::MatrixXd sym3(std::mt19937_64& rng) {
    const Eigen::MatrixXd m = random_normal(3, 3, rng);
    return m + m.transpose();
}

Eigen::MatrixXd comm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("tau") {
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(6, 6);
    expected.topRightCorner(3, 3) = Eigen::Matrix3d::Identity();
    expected.bottomLeftCorner(3, 3) = -Eigen::Matrix3d::Identity();
    CHECK(tau(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(3, 3)).isApprox(expected));

    std::mt19937_64 rng(61);
    for (int t = 0; t < 20; ++t) {
        const Eigen::MatrixXd X = testing_util::random_skew(3, rng), Y = sym3(rng);
        const Eigen::MatrixXd X2 = testing_util::random_skew(3, rng), Y2 = sym3(rng);
        const Eigen::MatrixXd lhs = comm(tau(X, Y), tau(X2, Y2));
        const Eigen::MatrixXd rhs = tau(comm(X, X2) - comm(Y, Y2), comm(X, Y2) + comm(Y, X2));
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK_THROWS_AS(tau(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Zero(3, 3)), DomainError);
    CHECK_THROWS_AS(tau(Eigen::MatrixXd::Zero(3, 3), testing_util::random_skew(3, rng)), DomainError);
    CHECK_THROWS_AS(tau(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)), DimensionError);
}

TEST_CASE("A, B, C bases") {
    const auto b = basis_abc();
    const std::array<const std::array<Eigen::MatrixXd, 3>*, 3> groups{&b.A, &b.B, &b.C};
    for (int g = 0; g < 3; ++g)
        for (int h = 0; h < 3; ++h)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(so_inner((*groups[g])[i], (*groups[h])[j]) ==
                          doctest::Approx(g == h && i == j ? 1.0 : 0.0));
    for (const auto* g : groups) {
        Eigen::MatrixXd sq = 3.0 * Eigen::MatrixXd::Identity(6, 6);
        for (const auto& m : *g) sq += m * m;
        CHECK(sq.cwiseAbs().maxCoeff() <= 1e-12);
    }
    for (const auto* g : groups) CHECK(is_uniform(UniformSubspaceCandidate{6, {(*g)[0], (*g)[1], (*g)[2]}}));
}

TEST_CASE("family points") {
    const auto p = w_of(1, 0, 0);
    const auto b = basis_abc();
    for (int i = 0; i < 3; ++i) CHECK(p.D[i].isApprox(b.A[i]));

    const auto c = w_of(0, 0, 1);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(6, 6);
    for (const auto& d : c.D) sum += d * d;
    CHECK((sum + 3.0 * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);

    const double u = 1.0 / std::sqrt(3.0);
    CHECK(uniform_residual(family_subspace(w_of(u, u, u))) <= 1e-10);
    CHECK_THROWS_AS(w_of(0, 0, 0), DomainError);

    std::mt19937_64 rng(67);
    for (int t = 0; t < 100; ++t) {
        const auto [r, s, tt] = random_point(rng);
        const auto q = w_of(r, s, tt);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(6, 6);
        for (const auto& d : q.D) acc += d * d;
        CHECK((acc + 3.0 * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::abs(angle_to_centralizer(q) - std::abs(tt)) <= 1e-9);
    }
}

TEST_CASE("centralizer of W") {
    const auto b = basis_abc();
    const Eigen::MatrixXd csum = b.C[0] + b.C[1] + b.C[2];
    // Generic points and points on the cone t^2 = (r^2 + s^2) / 2.
    const double h = 1.0 / std::sqrt(3.0);
    for (auto [r, s, t] : {std::array{0.3, 0.5, 0.81}, std::array{1.0, 0.0, 0.0}, std::array{0.0, 1.0, 0.0},
                           std::array{0.6, 0.8, 0.0}, std::array{h, h, h}, std::array{h, -h, h},
                           std::array{std::sqrt(2.0 / 3.0), 0.0, h}}) {
        const auto cz = centralizer_in_so6(w_of(r, s, t));
        CHECK(cz.dim == 1);
        if (cz.dim != 1) continue;
        const double cosang = std::abs(so_inner(cz.basis[0], csum)) /
                              std::sqrt(so_inner(cz.basis[0], cz.basis[0]) * so_inner(csum, csum));
        CHECK(cosang == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cz.singular_values(0) <= 1e-10);
        CHECK(cz.singular_values(1) > 1e-6);
    }
    // W(0,0,1) is abelian and has a larger centralizer.
    CHECK(centralizer_in_so6(w_of(0, 0, 1)).dim == 3);
}

TEST_CASE("angle to the centralizer") {
    CHECK(angle_to_centralizer(w_of(0, 1, 0)) == doctest::Approx(0.0));
    CHECK(angle_to_centralizer(w_of(0, 0, 1)) == doctest::Approx(1.0));
    CHECK(angle_to_centralizer(w_of(0.5, 0.5, 1.0 / std::sqrt(2.0))) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("bracket angle") {
    CHECK(bracket_angle(w_of(1, 0, 0)) == doctest::Approx(1.0));
    CHECK(bracket_angle(w_of(0, 1, 0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(bracket_angle(w_of(0, 0, 1)), DomainError);

    std::mt19937_64 rng(71);
    for (int t = 0; t < 100; ++t) {
        const auto [r, s, tt] = random_point(rng);
        CHECK(std::abs(bracket_angle(w_of(r, s, tt)) - bracket_angle_closed_form(r, s, tt)) <= 1e-6);
    }
    // The uncorrected expression agrees wherever t^2 + sqrt2 s t >= 0 and differs elsewhere.
    CHECK(bracket_angle_uncorrected_form(0.6, 0.48, 0.64) == doctest::Approx(bracket_angle_closed_form(0.6, 0.48, 0.64)));
    const double r = -0.296, s = -0.950, t = 0.097;
    CHECK(std::abs(bracket_angle_uncorrected_form(r, s, t) - bracket_angle(w_of(r, s, t))) > 1e-2);
}

TEST_CASE("cyclic bracket products") {
    std::mt19937_64 rng(73);
    for (int k = 0; k < 20; ++k) {
        const auto [r, s, t] = random_point(rng);
        const auto p = w_of(r, s, t);
        const auto c = cyclic_bracket_products(p);
        const double direct = -(comm(p.D[0], p.D[1]) * p.D[2]).trace() / 6.0;
        CHECK(c[0] == doctest::Approx(direct).epsilon(1e-12));
        for (double v : c) CHECK(v == doctest::Approx(-std::sqrt(1.5) * p.r * (p.r * p.r + p.s * p.s)).epsilon(1e-10));
    }
}

TEST_CASE("curvature margin") {
    const auto p = w_of(1, 0, 0);
    std::mt19937_64 rng(79);
    const Eigen::VectorXd X = random_normal(6, 1, rng), Y = random_normal(6, 1, rng);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK(curvature_margin(p.D, X, Y, zero, zero) ==
          doctest::Approx(0.25 * X.squaredNorm() * Y.squaredNorm()).epsilon(1e-12));

    MarginSampler small;
    small.n_random = 300;
    small.n_descent = 5;
    small.n_sectional = 300;
    const auto m = negative_curvature_margin(p, small);
    CHECK(m.sectional_samples == 300);
    CHECK(m.min_margin > -1e-9);
    CHECK(m.max_sectional < 0.0);
    CHECK(m.min_margin <= m.min_random_margin);
}

TEST_CASE("family report") {
    const auto rows = family_report(4, kDefaultSeed, 20);
    REQUIRE(!rows.empty());
    for (const auto& row : rows) {
        CHECK(row.einstein_residual <= 1e-9);
        CHECK(row.t >= 0.0);
        CHECK(row.max_sectional < 0.0);
        CHECK(row.min_sectional <= row.max_sectional);
    }
    const std::string csv = family_csv(rows);
    CHECK(csv.rfind("r,s,t,einstein_residual,cos_centralizer,cos_bracket,min_sectional,max_sectional\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size()) + 1);
    CHECK(family_report(4, kDefaultSeed, 20)[1].min_sectional == rows[1].min_sectional);

    // (r, s, t) and (r, -s, -t) are isometric via the sign flips.
    std::mt19937_64 rng(83);
    for (int k = 0; k < 5; ++k) {
        const auto [r, s, t] = random_point(rng);
        const auto a = w_of(r, s, t), b = w_of(r, -s, -t);
        CHECK(angle_to_centralizer(a) == doctest::Approx(angle_to_centralizer(b)).epsilon(1e-9));
        CHECK(bracket_angle(a) == doctest::Approx(bracket_angle(b)).epsilon(1e-9));
        const auto va = einstein_verdict(build_solvmanifold(family_triple(a)));
        const auto vb = einstein_verdict(build_solvmanifold(family_triple(b)));
        CHECK(va.is_einstein);
        CHECK(va.lambda == doctest::Approx(vb.lambda).epsilon(1e-10));
    }
}
