#include "solvgeom/symmetric.hpp"

#include "solvgeom/curvature.hpp"
#include "solvgeom/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace solvgeom {

namespace {

const double kZero = 1e-12;

const IwasawaDecoration& decoration_of(const RootDecoratedAlgebra& alg) {
    if (!alg.base.decoration()) throw DomainError("algebra has no Iwasawa decoration");
    return *alg.base.decoration();
}

// n position of every basis index, -1 on a.
std::vector<int> positions(const RootDecoratedAlgebra& alg) {
    std::vector<int> pos(alg.base.dim(), -1);
    const auto& dec = decoration_of(alg);
    for (std::size_t t = 0; t < dec.n_indices.size(); ++t) pos[dec.n_indices[t]] = static_cast<int>(t);
    return pos;
}

void check_twist_size(const RootDecoratedAlgebra& alg, const TwistAssignment& T) {
    if (static_cast<int>(T.parity.size()) != alg.n_dim())
        throw DimensionError("twist has " + std::to_string(T.parity.size()) + " parities, n has dimension " +
                             std::to_string(alg.n_dim()));
}

int tag_index(const RootDecoratedAlgebra& alg, const std::string& tag) {
    const auto it = std::find(alg.tags.begin(), alg.tags.end(), tag);
    if (it == alg.tags.end()) throw DomainError("missing tag '" + tag + "'");
    return static_cast<int>(it - alg.tags.begin());
}

Eigen::VectorXd combination(const RootDecoratedAlgebra& alg, const std::vector<std::pair<std::string, double>>& terms) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(alg.base.dim());
    for (const auto& [tag, coef] : terms) v(tag_index(alg, tag)) += coef;
    return v;
}

bool same_root(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff() < 1e-9;
}

// Row-reduced GF(2) basis with pivot = highest set bit.
struct Gf2Basis {
    std::vector<std::uint64_t> rows;
    bool insert(std::uint64_t v) {
        for (auto r : rows) v = std::min(v, v ^ r);
        if (!v) return false;
        rows.push_back(v);
        std::sort(rows.rbegin(), rows.rend());
        return true;
    }
    bool contains(std::uint64_t v) const {
        for (auto r : rows) v = std::min(v, v ^ r);
        return v == 0;
    }
};

}  // namespace

int RootDecoratedAlgebra::n_dim() const {
    return base.decoration() ? static_cast<int>(base.decoration()->n_indices.size()) : 0;
}

int RootDecoratedAlgebra::a_dim() const {
    return base.decoration() ? static_cast<int>(base.decoration()->a_indices.size()) : 0;
}

int RootDecoratedAlgebra::n_index(int position) const {
    const auto& dec = decoration_of(*this);
    if (position < 0 || position >= static_cast<int>(dec.n_indices.size()))
        throw DimensionError("n position out of range");
    return dec.n_indices[position];
}

int RootDecoratedAlgebra::position_of_tag(const std::string& tag) const {
    const auto pos = positions(*this);
    for (int i = 0; i < base.dim(); ++i)
        if (i < static_cast<int>(tags.size()) && tags[i] == tag) return pos[i];
    return -1;
}

ClosureReport twist_closure_check(const RootDecoratedAlgebra& alg, const TwistAssignment& T) {
    check_twist_size(alg, T);
    const auto& dec = decoration_of(alg);
    const auto pos = positions(alg);
    ClosureReport rep;
    for (int i : dec.n_indices)
        for (int j : dec.n_indices) {
            if (j <= i) continue;
            int nonzero = 0;
            for (int k = 0; k < alg.base.dim(); ++k) {
                if (std::abs(alg.base.c(i, j, k)) <= kZero) continue;
                if (++nonzero > 1)
                    throw DomainError("bracket of " + alg.base.label(i) + " and " + alg.base.label(j) +
                                      " is not a multiple of one basis vector");
                if (pos[k] < 0) throw DomainError("n is not an ideal");
                if (T.parity[pos[k]] != (T.parity[pos[i]] ^ T.parity[pos[j]])) rep.violations.push_back({i, j, k});
            }
        }
    rep.ok = rep.violations.empty();
    return rep;
}

RootDecoratedAlgebra twist(const RootDecoratedAlgebra& alg, const TwistAssignment& T) {
    const auto rep = twist_closure_check(alg, T);
    if (!rep.ok) {
        const auto& v = rep.violations.front();
        throw DomainError("twist violates closure at (" + alg.base.label(v[0]) + ", " + alg.base.label(v[1]) + ", " +
                          alg.base.label(v[2]) + ")");
    }
    const auto pos = positions(alg);
    auto entries = alg.base.entries();
    for (auto& e : entries)
        if (pos[e.i] >= 0 && pos[e.j] >= 0 && T.parity[pos[e.i]] && T.parity[pos[e.j]]) e.value = -e.value;
    RootDecoratedAlgebra out = alg;
    out.base = alg.base.with_entries(entries);
    return out;
}

PreservationReport einstein_preservation_check(const RootDecoratedAlgebra& alg, const TwistAssignment& T, double tol) {
    const RootDecoratedAlgebra tw = twist(alg, T);
    const Eigen::MatrixXd r0 = ricci(alg.base);
    const Eigen::MatrixXd r1 = ricci(tw.base);
    PreservationReport rep;
    rep.max_difference = (r0 - r1).cwiseAbs().maxCoeff();
    rep.ric_match = rep.max_difference <= tol * std::max(1.0, r0.cwiseAbs().maxCoeff());
    const auto v0 = einstein_verdict_of(r0, alg.base.gram());
    const auto v1 = einstein_verdict_of(r1, tw.base.gram());
    rep.einstein = v0.is_einstein && v1.is_einstein;
    rep.lambda = v0.lambda;
    rep.lambda_twisted = v1.lambda;
    return rep;
}

TwistAssignment twist_xor(const TwistAssignment& a, const TwistAssignment& b) {
    if (a.parity.size() != b.parity.size()) throw DimensionError("twist sizes differ");
    TwistAssignment t;
    for (std::size_t s = 0; s < a.parity.size(); ++s) t.parity.push_back(a.parity[s] ^ b.parity[s]);
    return t;
}

TwistAssignment twist_from_bits(int n_dim, std::uint64_t mask) {
    if (n_dim > 64) throw DimensionError("bit masks cover at most 64 n vectors");
    if (n_dim < 64 && (mask >> n_dim) != 0) throw DomainError("mask has bits beyond the n dimension");
    TwistAssignment t;
    for (int s = 0; s < n_dim; ++s) t.parity.push_back(static_cast<int>((mask >> s) & 1u));
    return t;
}

std::uint64_t twist_bits(const TwistAssignment& T) {
    if (T.parity.size() > 64) throw DimensionError("bit masks cover at most 64 n vectors");
    std::uint64_t m = 0;
    for (std::size_t s = 0; s < T.parity.size(); ++s)
        if (T.parity[s]) m |= std::uint64_t{1} << s;
    return m;
}

std::vector<Eigen::VectorXd> distinct_roots(const RootDecoratedAlgebra& alg) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& r : decoration_of(alg).roots)
        if (std::none_of(out.begin(), out.end(), [&](const Eigen::VectorXd& s) { return same_root(r, s); }))
            out.push_back(r);
    return out;
}

std::vector<Eigen::VectorXd> simple_roots(const RootDecoratedAlgebra& alg) {
    const auto roots = distinct_roots(alg);
    std::vector<Eigen::VectorXd> out;
    for (const auto& r : roots) {
        bool decomposable = false;
        for (std::size_t a = 0; a < roots.size() && !decomposable; ++a)
            for (std::size_t b = a; b < roots.size() && !decomposable; ++b)
                decomposable = same_root(r, roots[a] + roots[b]);
        if (!decomposable) out.push_back(r);
    }
    return out;
}

std::vector<int> root_expansion(const Eigen::VectorXd& root, const std::vector<Eigen::VectorXd>& base) {
    if (base.empty()) throw DomainError("empty root base");
    Eigen::MatrixXd B(root.size(), static_cast<Eigen::Index>(base.size()));
    for (std::size_t j = 0; j < base.size(); ++j) {
        if (base[j].size() != root.size()) throw DimensionError("root base has the wrong length");
        B.col(static_cast<Eigen::Index>(j)) = base[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    if (qr.rank() < static_cast<Eigen::Index>(base.size())) throw DomainError("root base is linearly dependent");
    const Eigen::VectorXd x = qr.solve(root);
    if ((B * x - root).norm() > 1e-9 * std::max(1.0, root.norm())) throw DomainError("root base does not span the root");
    std::vector<int> out;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double r = std::round(x(j));
        if (std::abs(x(j) - r) > 1e-8 || r < 0) throw DomainError("root is not a nonnegative integer combination of the base");
        out.push_back(static_cast<int>(r));
    }
    return out;
}

TwistAssignment restricted_height_twist(const RootDecoratedAlgebra& alg, const std::vector<Eigen::VectorXd>& base,
                                        const std::vector<int>& subset) {
    for (int j : subset)
        if (j < 0 || j >= static_cast<int>(base.size())) throw DomainError("subset index out of range");
    TwistAssignment t;
    for (const auto& r : decoration_of(alg).roots) {
        const auto b = root_expansion(r, base);
        int h = 0;
        for (int j : subset) h += b[j];
        t.parity.push_back(h & 1);
    }
    return t;
}

TwistEnumeration enumerate_twists(const RootDecoratedAlgebra& alg) {
    const int nn = alg.n_dim();
    if (nn > 64) throw DimensionError("twist enumeration supports n dimension at most 64");
    const auto& dec = decoration_of(alg);
    const auto pos = positions(alg);
    TwistEnumeration out;
    out.n_dim = nn;

    // Constraint rows bit_i ^ bit_j ^ bit_k, reduced to echelon form with explicit pivots.
    std::vector<std::uint64_t> rows;
    for (int i : dec.n_indices)
        for (int j : dec.n_indices) {
            if (j <= i) continue;
            for (int k = 0; k < alg.base.dim(); ++k)
                if (std::abs(alg.base.c(i, j, k)) > kZero) {
                    if (pos[k] < 0) throw DomainError("n is not an ideal");
                    rows.push_back((std::uint64_t{1} << pos[i]) ^ (std::uint64_t{1} << pos[j]) ^
                                   (std::uint64_t{1} << pos[k]));
                }
        }
    std::vector<int> pivot_col;
    std::vector<std::uint64_t> red;
    for (auto r : rows) {
        for (std::size_t t = 0; t < red.size(); ++t)
            if ((r >> pivot_col[t]) & 1u) r ^= red[t];
        if (!r) continue;
        int pc = 0;
        while (!((r >> pc) & 1u)) ++pc;
        for (auto& q : red)
            if ((q >> pc) & 1u) q ^= r;
        red.push_back(r);
        pivot_col.push_back(pc);
    }
    std::vector<bool> is_pivot(nn, false);
    for (int pc : pivot_col) is_pivot[pc] = true;
    for (int f = 0; f < nn; ++f) {
        if (is_pivot[f]) continue;
        std::uint64_t v = std::uint64_t{1} << f;
        for (std::size_t t = 0; t < red.size(); ++t)
            if ((red[t] >> f) & 1u) v |= std::uint64_t{1} << pivot_col[t];
        out.solution_basis.push_back(v);
    }
    out.solution_dim = static_cast<int>(out.solution_basis.size());

    Gf2Basis sol;
    for (auto v : out.solution_basis) sol.insert(v);
    Gf2Basis rh;
    const auto base = simple_roots(alg);
    for (std::size_t j = 0; j < base.size(); ++j) {
        const auto v = twist_bits(restricted_height_twist(alg, base, {static_cast<int>(j)}));
        if (!sol.contains(v)) out.rh_valid = false;
        if (rh.insert(v)) out.rh_basis.push_back(v);
    }
    out.rh_dim = static_cast<int>(out.rh_basis.size());

    Gf2Basis span = rh;
    std::vector<std::uint64_t> complement;
    for (auto v : out.solution_basis)
        if (span.insert(v)) complement.push_back(v);
    out.quotient_dim = static_cast<int>(complement.size());
    if (out.quotient_dim <= 12)
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << out.quotient_dim); ++c) {
            std::uint64_t v = 0;
            for (int t = 0; t < out.quotient_dim; ++t)
                if ((c >> t) & 1u) v ^= complement[t];
            out.coset_representatives.push_back(v);
        }
    return out;
}

TwistAssignment wa_twist(const RootDecoratedAlgebra& alg, int a) {
    const int m = alg.w_column.empty() ? 0 : *std::max_element(alg.w_column.begin(), alg.w_column.end());
    if (m < 2) throw DomainError("the W_a twist needs q - p >= 2");
    if (a < 1 || a >= m) throw DomainError("split a must satisfy 1 <= a < " + std::to_string(m));
    TwistAssignment t;
    for (int c : alg.w_column) t.parity.push_back(c > a ? 1 : 0);
    return t;
}

TwistAssignment standard_twist_so_nH(const RootDecoratedAlgebra& alg) {
    const bool odd = alg.position_of_tag("X_1") >= 0;
    TwistAssignment t;
    const auto pos = positions(alg);
    for (int i = 0; i < alg.base.dim(); ++i) {
        if (pos[i] < 0) continue;
        const std::string& tag = alg.tags[i];
        const std::string head = tag.substr(0, tag.find('_'));
        bool on;
        if (odd) on = head == "X" || head == "Z" || head == "B+" || head == "C+" || head == "B-" || head == "C-";
        else on = head == "B-" || head == "C-" || head == "A+" || head == "D+" || head == "G";
        t.parity.push_back(on ? 1 : 0);
    }
    return t;
}

TwistAssignment standard_twist_sl_nH(const RootDecoratedAlgebra& alg) {
    TwistAssignment t;
    const auto pos = positions(alg);
    for (int i = 0; i < alg.base.dim(); ++i)
        if (pos[i] >= 0) t.parity.push_back(alg.tags[i][0] == 'A' || alg.tags[i][0] == 'C' ? 1 : 0);
    return t;
}

TypeIvTwist type_iv_twist(const RootDecoratedAlgebra& alg) {
    TypeIvTwist out;
    const auto pos = positions(alg);
    bool abelian = true;
    const auto& dec = decoration_of(alg);
    for (int i : dec.n_indices)
        for (int j : dec.n_indices)
            for (int k = 0; k < alg.base.dim(); ++k)
                if (std::abs(alg.base.c(i, j, k)) > kZero) abelian = false;
    for (int i = 0; i < alg.base.dim(); ++i)
        if (pos[i] >= 0) out.twist.parity.push_back(!abelian && alg.tags[i].rfind("JX", 0) == 0 ? 1 : 0);
    out.nonsymmetric = !abelian;
    return out;
}

WitnessPair witness_wa(const RootDecoratedAlgebra& alg, int a) {
    wa_twist(alg, a);
    const std::string c1 = ",1", c2 = "," + std::to_string(a + 1);
    const double h = 1.0 / std::sqrt(2.0);
    WitnessPair w;
    w.x = combination(alg, {{"W_1" + c1, h}, {"W_1" + c2, h}});
    w.y = combination(alg, {{"W_2" + c1, h}, {"W_2" + c2, h}});
    w.description = "X = (W_1" + c1 + " + W_1" + c2 + ")/sqrt2, Y = (W_2" + c1 + " + W_2" + c2 + ")/sqrt2";
    return w;
}

WitnessPair witness_so_nH(const RootDecoratedAlgebra& alg) {
    const double h = 1.0 / std::sqrt(2.0);
    WitnessPair w;
    w.x = combination(alg, {{"A-_12", h}, {"B-_12", h}});
    w.y = combination(alg, {{"C-_23", h}, {"D-_23", h}});
    w.description = "X = (A-_12 + B-_12)/sqrt2, Y = (C-_23 + D-_23)/sqrt2";
    return w;
}

WitnessPair witness_sl_nH(const RootDecoratedAlgebra& alg) {
    const double h = 1.0 / std::sqrt(2.0);
    WitnessPair w;
    w.x = combination(alg, {{"A_12", h}, {"B_12", h}});
    w.y = combination(alg, {{"C_23", h}, {"D_23", h}});
    w.description = "X = (A_12 + B_12)/sqrt2, Y = (C_23 + D_23)/sqrt2";
    return w;
}

WitnessPair witness_type_iv(const RootDecoratedAlgebra& alg) {
    WitnessPair w;
    w.x = combination(alg, {{"X_12", 1.0}, {"JX_12", 1.0}});
    w.y = combination(alg, {{"X_23", 1.0}, {"JX_23", -1.0}});
    w.description = "X = X_12 + JX_12, Y = X_23 - JX_23";
    return w;
}

std::string bracket_table(const RootDecoratedAlgebra& alg, const std::function<bool(const std::string&)>& filter) {
    if (static_cast<int>(alg.tags.size()) != alg.base.dim()) throw DomainError("missing tags");
    std::vector<int> idx;
    for (int i : decoration_of(alg).n_indices)
        if (!filter || filter(alg.tags[i])) idx.push_back(i);
    auto cell = [&](int r, int c) {
        std::string s;
        for (int k = 0; k < alg.base.dim(); ++k) {
            const double v = alg.base.c(r, c, k);
            if (std::abs(v) <= 1e-9) continue;
            const double av = std::abs(v);
            std::string mag;
            if (std::abs(av - 1.0) > 1e-9) {
                if (std::abs(av - std::sqrt(2.0)) <= 1e-9) mag = "sqrt2*";
                else {
                    char buf[48];
                    std::snprintf(buf, sizeof buf, "%.12g*", av);
                    mag = buf;
                }
            }
            if (v < 0) s += "-";
            else if (!s.empty()) s += "+";
            s += mag + alg.tags[k];
        }
        return s.empty() ? std::string("0") : s;
    };
    std::string out = "[row,col]";
    for (int c : idx) out += "\t" + alg.tags[c];
    out += "\n";
    for (int r : idx) {
        out += alg.tags[r];
        for (int c : idx) out += "\t" + cell(r, c);
        out += "\n";
    }
    return out;
}

}  // namespace solvgeom
