#include "cychom/group_algebra.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

FiniteGroup::FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<std::size_t>> table)
    : elements_(std::move(elements)), table_(std::move(table)) {
    const std::size_t n = elements_.size();
    if (n == 0) throw CheckError("SchemaError", "empty group");
    if (table_.size() != n)
        throw CheckError("SchemaError", "multiplication table has wrong number of rows");
    for (std::size_t i = 0; i < n; ++i) {
        if (table_[i].size() != n)
            throw CheckError("SchemaError", "multiplication table row " + std::to_string(i) +
                                                " has wrong length");
        for (std::size_t j = 0; j < n; ++j)
            if (table_[i][j] >= n)
                throw CheckError("SchemaError", "table entry out of range at (" + std::to_string(i) +
                                                    "," + std::to_string(j) + ")");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (table_[0][i] != i || table_[i][0] != i)
            throw CheckError("NotAGroup", "element 0 is not a two-sided identity",
                             elements_[i]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw CheckError("NotAssociative", "associativity fails",
                                     "(" + elements_[a] + "," + elements_[b] + "," + elements_[c] + ")");
    inverse_.assign(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b)
            if (table_[a][b] == 0 && table_[b][a] == 0) {
                inverse_[a] = b;
                break;
            }
        if (inverse_[a] == n) throw CheckError("NotAGroup", "missing inverse", elements_[a]);
    }
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup({"1"}, {{0}}); }

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(i == 0 ? "1" : "g" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
    }
    return FiniteGroup(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::symmetric3() {
    // permutations of {0,1,2}: 1, (01), (02), (12), (012), (021)
    const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    std::vector<std::string> names = {"1", "t01", "t02", "t12", "c012", "c021"};
    auto compose = [&](int a, int b) {  // (a o b)(x) = perms[a][perms[b][x]]
        int out[3];
        for (int x = 0; x < 3; ++x) out[x] = perms[a][perms[b][x]];
        for (int k = 0; k < 6; ++k)
            if (perms[k][0] == out[0] && perms[k][1] == out[1] && perms[k][2] == out[2]) return k;
        return -1;
    };
    std::vector<std::vector<std::size_t>> table(6, std::vector<std::size_t>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) table[a][b] = std::size_t(compose(a, b));
    return FiniteGroup(std::move(names), std::move(table));
}

std::size_t FiniteGroup::power(std::size_t a, long k) const {
    std::size_t base = k >= 0 ? a : inv(a);
    long reps = k >= 0 ? k : -k;
    std::size_t acc = identity();
    for (long i = 0; i < reps; ++i) acc = mul(acc, base);
    return acc;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
    std::size_t acc = a, r = 1;
    while (acc != identity()) {
        acc = mul(acc, a);
        ++r;
    }
    return r;
}

std::optional<std::size_t> FiniteGroup::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i] == name) return i;
    return std::nullopt;
}

ConjugacyData conjugacy_analysis(const FiniteGroup& g, std::size_t phi) {
    if (phi >= g.order()) throw CheckError("SchemaError", "phi outside the group");
    std::vector<char> in_class(g.order(), 0);
    for (std::size_t x = 0; x < g.order(); ++x) in_class[g.mul(g.mul(x, phi), g.inv(x))] = 1;
    std::vector<std::size_t> cls;
    for (std::size_t y = 0; y < g.order(); ++y)
        if (in_class[y]) cls.push_back(y);

    std::vector<std::size_t> emb;
    for (std::size_t x = 0; x < g.order(); ++x)
        if (g.mul(x, phi) == g.mul(phi, x)) emb.push_back(x);
    std::vector<std::size_t> back(g.order(), 0);
    for (std::size_t i = 0; i < emb.size(); ++i) back[emb[i]] = i;
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> table(emb.size(), std::vector<std::size_t>(emb.size()));
    for (std::size_t i = 0; i < emb.size(); ++i) {
        names.push_back(g.name(emb[i]));
        for (std::size_t j = 0; j < emb.size(); ++j) table[i][j] = back[g.mul(emb[i], emb[j])];
    }
    FiniteGroup cent(std::move(names), std::move(table));
    if (cls.size() * cent.order() != g.order())
        throw CheckError("NotAGroup", "class-centralizer product formula fails");
    ConjugacyData out{phi, std::move(cls), std::move(cent), emb, back[phi], g.element_order(phi)};
    return out;
}

std::vector<std::size_t> class_representatives(const FiniteGroup& g) {
    std::vector<char> seen(g.order(), 0);
    std::vector<std::size_t> reps;
    for (std::size_t a = 0; a < g.order(); ++a) {
        if (seen[a]) continue;
        reps.push_back(a);
        for (std::size_t x = 0; x < g.order(); ++x) seen[g.mul(g.mul(x, a), g.inv(x))] = 1;
    }
    return reps;
}

Algebra::Algebra(std::vector<std::string> basis, std::vector<std::vector<SparseVec>> structure,
                 SparseVec unit, std::vector<std::size_t> weights)
    : basis_(std::move(basis)), structure_(std::move(structure)), unit_(std::move(unit)),
      weights_(std::move(weights)) {
    const std::size_t n = basis_.size();
    if (n == 0) throw CheckError("SchemaError", "empty algebra");
    if (structure_.size() != n)
        throw CheckError("SchemaError", "structure constants have wrong shape");
    for (const auto& row : structure_)
        if (row.size() != n) throw CheckError("SchemaError", "structure constants have wrong shape");
    graded_ = !weights_.empty();
    if (!graded_) weights_.assign(n, 0);
    if (weights_.size() != n) throw CheckError("SchemaError", "weights have wrong length");
    for (std::size_t w : weights_) top_weight_ = std::max(top_weight_, w);

    auto expand = [&](const SparseVec& x, std::size_t j) {
        SparseVec out;
        for (const auto& [i, c] : x) vec_axpy(out, c, structure_[i][j]);
        return out;
    };
    // unit laws
    for (std::size_t j = 0; j < n; ++j) {
        if (expand(unit_, j) != vec_unit(j))
            throw CheckError("NotUnital", "unit fails on the left", basis_[j]);
        SparseVec right;
        for (const auto& [k, c] : unit_) vec_axpy(right, c, structure_[j][k]);
        if (right != vec_unit(j)) throw CheckError("NotUnital", "unit fails on the right", basis_[j]);
    }
    // graded law: entries of e_i e_j sit in weight w_i + w_j (or the product is
    // truncated to zero past the top weight)
    if (graded_) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t w = weights_[i] + weights_[j];
                if (w > top_weight_ && !structure_[i][j].empty())
                    throw CheckError("NotGraded", "product above the top weight is not truncated",
                                     basis_[i] + "*" + basis_[j]);
                for (const auto& [k, c] : structure_[i][j])
                    if (weights_[k] != w)
                        throw CheckError("NotGraded", "multiplication does not add weights",
                                         basis_[i] + "*" + basis_[j]);
            }
    }
    // associativity on basis triples
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                SparseVec lhs;  // (e_i e_j) e_k
                for (const auto& [p, c] : structure_[i][j]) vec_axpy(lhs, c, structure_[p][k]);
                SparseVec rhs;  // e_i (e_j e_k)
                for (const auto& [p, c] : structure_[j][k]) vec_axpy(rhs, c, structure_[i][p]);
                if (graded_ && weights_[i] + weights_[j] + weights_[k] > top_weight_) {
                    // both sides are truncations of the same overflow; accept zero only
                    if (!lhs.empty() || !rhs.empty())
                        throw CheckError("NotAssociative", "truncated products disagree",
                                         basis_[i] + "," + basis_[j] + "," + basis_[k]);
                    continue;
                }
                if (lhs != rhs)
                    throw CheckError("NotAssociative", "associativity fails",
                                     basis_[i] + "," + basis_[j] + "," + basis_[k]);
            }
}

Algebra Algebra::ground_field() {
    return Algebra({"1"}, {{vec_unit(0)}}, vec_unit(0));
}

Algebra Algebra::functions_on_points(std::size_t n) {
    std::vector<std::string> basis;
    std::vector<std::vector<SparseVec>> structure(n, std::vector<SparseVec>(n));
    SparseVec unit;
    for (std::size_t i = 0; i < n; ++i) {
        basis.push_back("e" + std::to_string(i + 1));
        unit.emplace_back(i, Rational(1));
        for (std::size_t j = 0; j < n; ++j) structure[i][j] = i == j ? vec_unit(i) : SparseVec{};
    }
    return Algebra(std::move(basis), std::move(structure), std::move(unit));
}

Algebra Algebra::group_algebra(const FiniteGroup& g) {
    const std::size_t n = g.order();
    std::vector<std::string> basis;
    std::vector<std::vector<SparseVec>> structure(n, std::vector<SparseVec>(n));
    for (std::size_t i = 0; i < n; ++i) {
        basis.push_back("u_" + g.name(i));
        for (std::size_t j = 0; j < n; ++j) structure[i][j] = vec_unit(g.mul(i, j));
    }
    return Algebra(std::move(basis), std::move(structure), vec_unit(0));
}

SparseVec Algebra::multiply(const SparseVec& x, const SparseVec& y) const {
    SparseVec out;
    for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) vec_axpy(out, a * b, structure_[i][j]);
    return out;
}

GroupAction::GroupAction(const Algebra& a, const FiniteGroup& g, std::vector<SparseMatrix> matrices)
    : matrices_(std::move(matrices)) {
    if (matrices_.size() != g.order())
        throw CheckError("SchemaError", "action needs one matrix per group element");
    const std::size_t n = a.dim();
    for (std::size_t x = 0; x < g.order(); ++x) {
        const SparseMatrix& m = matrices_[x];
        if (m.rows() != n || m.cols() != n)
            throw CheckError("SchemaError", "action matrix has wrong shape", g.name(x));
        if (rank(m) != n)
            throw CheckError("NotAnAutomorphism", "action matrix is singular", g.name(x));
        if (m.apply(a.unit()) != a.unit())
            throw CheckError("NotAnAutomorphism", "action does not fix the unit", g.name(x));
        for (std::size_t i = 0; i < n; ++i) {
            if (a.graded()) {
                for (const auto& [k, c] : m.apply(vec_unit(i)))
                    if (a.weight(k) != a.weight(i))
                        throw CheckError("NotAnAutomorphism", "action does not preserve weights",
                                         g.name(x) + " on " + a.label(i));
            }
            for (std::size_t j = 0; j < n; ++j) {
                SparseVec lhs = m.apply(a.product(i, j));
                SparseVec rhs = a.multiply(m.apply(vec_unit(i)), m.apply(vec_unit(j)));
                if (lhs != rhs)
                    throw CheckError("NotAnAutomorphism", "action is not multiplicative",
                                     g.name(x) + " on " + a.label(i) + "*" + a.label(j));
            }
        }
    }
    for (std::size_t x = 0; x < g.order(); ++x)
        for (std::size_t y = 0; y < g.order(); ++y) {
            SparseMatrix lhs = matrices_[x] * matrices_[y];
            if (lhs != matrices_[g.mul(x, y)])
                throw CheckError("NotAHomomorphism", "action matrices do not compose",
                                 g.name(x) + "*" + g.name(y));
        }
}

GroupAction GroupAction::trivial(const Algebra& a, const FiniteGroup& g) {
    std::vector<SparseMatrix> mats(g.order(), SparseMatrix::identity(a.dim()));
    return GroupAction(a, g, std::move(mats));
}

CrossedProduct crossed_product(const Algebra& a, const FiniteGroup& g, const GroupAction& act) {
    const std::size_t da = a.dim(), dg = g.order(), n = da * dg;
    std::vector<std::string> basis;
    std::vector<std::size_t> weights;
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t x = 0; x < dg; ++x) {
            basis.push_back(a.label(i) + "u_" + g.name(x));
            weights.push_back(a.weight(i));
        }
    std::vector<std::vector<SparseVec>> structure(n, std::vector<SparseVec>(n));
    // a_i u_g * a_j u_h = a_i (g^{-1} a_j) u_{gh}
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t x = 0; x < dg; ++x)
            for (std::size_t j = 0; j < da; ++j)
                for (std::size_t y = 0; y < dg; ++y) {
                    SparseVec coeff = a.multiply(vec_unit(i), act.apply(g.inv(x), vec_unit(j)));
                    SparseVec out;
                    const std::size_t gh = g.mul(x, y);
                    for (const auto& [k, c] : coeff) out.emplace_back(k * dg + gh, c);
                    structure[i * dg + x][j * dg + y] = std::move(out);
                }
    SparseVec unit;
    for (const auto& [k, c] : a.unit()) unit.emplace_back(k * dg + 0, c);
    Algebra alg(std::move(basis), std::move(structure), std::move(unit),
                a.graded() ? std::move(weights) : std::vector<std::size_t>{});
    return CrossedProduct{std::move(alg), da, dg};
}

}  // namespace cychom
