#pragma once

#include "solvgeom/algebra.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace solvgeom {

/**
 * @brief Iwasawa algebra s = a + n of a symmetric space with construction tags.
 *
 * base carries the decoration (a first, then n grouped by root) and the
 * numeric roots. Per-n vectors below are indexed by position in n_indices.
 */
struct RootDecoratedAlgebra {
    MetricLieAlgebra base;
    std::vector<std::string> tags;        // per basis index
    std::vector<std::string> root_names;  // per n position
    std::vector<int> w_column;            // so/su/sp(p,q): column of C for W vectors, else 0
    std::string space;
    double norm_constant = 0.0;           // common squared norm of the matrix basis of n, 0 if none

    int n_dim() const;
    int a_dim() const;
    int n_index(int position) const;      // basis index of n position
    int position_of_tag(const std::string& tag) const;  // n position, -1 if absent
};

struct TwistAssignment {
    std::vector<int> parity;  // per n position, 0 or 1
};

struct ClosureReport {
    bool ok = true;
    std::vector<std::array<int, 3>> violations;  // basis indices (i, j, k)
};

// Throws DomainError if a bracket of n-basis vectors is not a multiple of one basis vector.
ClosureReport twist_closure_check(const RootDecoratedAlgebra& alg, const TwistAssignment& T);

// c'(i,j,k) = (-1)^(p_i p_j) c(i,j,k) on n. Throws DomainError on closure violations.
RootDecoratedAlgebra twist(const RootDecoratedAlgebra& alg, const TwistAssignment& T);

struct PreservationReport {
    bool ric_match = false;
    bool einstein = false;        // both verdicts true at 1e-9
    double max_difference = 0.0;  // max entry of Ric - Ric'
    double lambda = 0.0;
    double lambda_twisted = 0.0;
};
PreservationReport einstein_preservation_check(const RootDecoratedAlgebra& alg, const TwistAssignment& T,
                                               double tol = kTolExact);

TwistAssignment twist_xor(const TwistAssignment& a, const TwistAssignment& b);
TwistAssignment twist_from_bits(int n_dim, std::uint64_t mask);
std::uint64_t twist_bits(const TwistAssignment& T);

// Distinct numeric roots in order of first appearance.
std::vector<Eigen::VectorXd> distinct_roots(const RootDecoratedAlgebra& alg);
// Roots that are not a sum of two roots.
std::vector<Eigen::VectorXd> simple_roots(const RootDecoratedAlgebra& alg);
// Nonnegative integer coefficients of root over base; throws DomainError otherwise.
std::vector<int> root_expansion(const Eigen::VectorXd& root, const std::vector<Eigen::VectorXd>& base);

// parity = sum_{j in subset} b_j mod 2, where root = sum_j b_j base_j.
TwistAssignment restricted_height_twist(const RootDecoratedAlgebra& alg, const std::vector<Eigen::VectorXd>& base,
                                        const std::vector<int>& subset);

struct TwistEnumeration {
    int n_dim = 0;
    int solution_dim = 0;   // dimension of the GF(2) solution space of the parity condition
    int rh_dim = 0;         // dimension of the span of restricted-height twists
    int quotient_dim = 0;
    bool rh_valid = true;   // every restricted-height twist satisfies the parity condition
    std::vector<std::uint64_t> solution_basis;
    std::vector<std::uint64_t> rh_basis;
    std::vector<std::uint64_t> coset_representatives;  // one per class, identity first (if quotient_dim <= 12)
};
TwistEnumeration enumerate_twists(const RootDecoratedAlgebra& alg);

// Builders. Metric: <X,Y> = B(X_p, Y_p) with B the Killing form and X_p = (X + X^*)/2.
RootDecoratedAlgebra build_so_pq(int p, int q);
RootDecoratedAlgebra build_su_pq(int p, int q);
RootDecoratedAlgebra build_sp_pq(int p, int q);
RootDecoratedAlgebra build_so_nH(int n);
RootDecoratedAlgebra build_sl_nH(int n);
RootDecoratedAlgebra build_type_iv_sl(int n);
RootDecoratedAlgebra build_sl_nR(int n);

// Parity 1 on W vectors whose column exceeds a. Needs m = q - p >= 2 and 1 <= a < m.
TwistAssignment wa_twist(const RootDecoratedAlgebra& alg, int a);
TwistAssignment standard_twist_so_nH(const RootDecoratedAlgebra& alg);
TwistAssignment standard_twist_sl_nH(const RootDecoratedAlgebra& alg);

struct TypeIvTwist {
    TwistAssignment twist;
    bool nonsymmetric = false;  // false for n = 2 (abelian nilradical, only the identity class)
};
TypeIvTwist type_iv_twist(const RootDecoratedAlgebra& alg);

struct WitnessPair {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::string description;
};
// (W_{1,1} + W_{1,a+1}) and (W_{2,1} + W_{2,a+1}), each over sqrt 2; needs p >= 2.
WitnessPair witness_wa(const RootDecoratedAlgebra& alg, int a);
// (A-_{12} + B-_{12}) and (C-_{23} + D-_{23}), each over sqrt 2; needs m >= 3.
WitnessPair witness_so_nH(const RootDecoratedAlgebra& alg);
// (A_12 + B_12) and (C_23 + D_23), each over sqrt 2; needs n >= 3.
WitnessPair witness_sl_nH(const RootDecoratedAlgebra& alg);
// X_12 + JX_12 and X_23 - JX_23; needs n >= 3.
WitnessPair witness_type_iv(const RootDecoratedAlgebra& alg);

// Table of [row, col] over the n basis (or the tags accepted by filter).
std::string bracket_table(const RootDecoratedAlgebra& alg,
                          const std::function<bool(const std::string&)>& filter = nullptr);

// Builds by name: so_pq, su_pq, sp_pq (p, q), so_nH, sl_nH, type4_sl, sl_nR (n).
RootDecoratedAlgebra build_space(const std::string& space, int p, int q, int n);

}  // namespace solvgeom
