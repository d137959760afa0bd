#include "cychom/crossed.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

// Sum of weighted tuples; the working representation while expanding operator
// images of tensor bases.
using TupleChain = std::map<std::vector<std::size_t>, Rational>;

void add_term(TupleChain& chain, std::vector<std::size_t> t, const Rational& c) {
    auto [it, fresh] = chain.emplace(std::move(t), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) chain.erase(it);
    }
}

// chain := chain with every tuple extended by each entry of v at `pos`
// (positions are appended in order, so callers build tuples left to right).
TupleChain extend_by_vector(const TupleChain& chain, const SparseVec& v) {
    TupleChain out;
    for (const auto& [t, c] : chain)
        for (const auto& [k, x] : v) {
            auto t2 = t;
            t2.push_back(k);
            add_term(out, std::move(t2), c * x);
        }
    return out;
}

void enumerate_weighted_tuples(const Algebra& a, std::size_t len, std::size_t target,
                               std::vector<std::size_t>& cur,
                               std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == len) {
        std::size_t w = 0;
        for (std::size_t i : cur) w += a.weight(i);
        if (w == target) out.push_back(cur);
        return;
    }
    std::size_t w = 0;
    for (std::size_t i : cur) w += a.weight(i);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (w + a.weight(i) > target) continue;
        cur.push_back(i);
        enumerate_weighted_tuples(a, len, target, cur, out);
        cur.pop_back();
    }
}

std::string tuple_label(const Algebra& a, const std::vector<std::size_t>& t) {
    std::string s;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) s += "(x)";
        s += a.label(t[k]);
    }
    return s;
}

}  // namespace

TwistedAlgebraCyclic::TwistedAlgebraCyclic(Algebra a, SparseMatrix phi_matrix, std::size_t n,
                                           std::size_t weight)
    : a_(std::move(a)), weight_(weight) {
    const std::size_t dim = a_.dim();
    if (phi_matrix.rows() != dim || phi_matrix.cols() != dim)
        throw CheckError("SchemaError", "automorphism matrix has wrong shape");
    phi_inv_ = inverse(phi_matrix);
    // phi must be a unital, weight-preserving algebra automorphism
    if (phi_matrix.apply(a_.unit()) != a_.unit())
        throw CheckError("NotAnAutomorphism", "twisting map does not fix the unit");
    for (std::size_t i = 0; i < dim; ++i) {
        if (a_.graded())
            for (const auto& [k, c] : phi_matrix.apply(vec_unit(i)))
                if (a_.weight(k) != a_.weight(i))
                    throw CheckError("NotAnAutomorphism", "twisting map does not preserve weights",
                                     a_.label(i));
        for (std::size_t j = 0; j < dim; ++j)
            if (phi_matrix.apply(a_.product(i, j)) !=
                a_.multiply(phi_matrix.apply(vec_unit(i)), phi_matrix.apply(vec_unit(j))))
                throw CheckError("NotAnAutomorphism", "twisting map is not multiplicative",
                                 a_.label(i) + "*" + a_.label(j));
    }

    tuples_.resize(n + 1);
    lookup_.resize(n + 1);
    std::vector<std::size_t> dims(n + 1);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<std::size_t> cur;
        enumerate_weighted_tuples(a_, m + 1, weight_, cur, tuples_[m]);
        dims[m] = tuples_[m].size();
        for (std::size_t i = 0; i < tuples_[m].size(); ++i) {
            lookup_[m][tuples_[m][i]] = i;
            labels[m].push_back(tuple_label(a_, tuples_[m][i]));
        }
    }
    GradedModule spaces(n, dims, std::move(labels));

    auto column = [&](std::size_t m_out, const TupleChain& chain, std::size_t col,
                      std::vector<Triplet>& ts) {
        for (const auto& [t, c] : chain) {
            auto it = lookup_[m_out].find(t);
            if (it == lookup_[m_out].end())
                throw CheckError("IdentityViolation", "operator image leaves the weight piece");
            ts.push_back({it->second, col, c});
        }
    };

    std::vector<SparseMatrix> d(n + 1), s(n + 1), t(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st, tt;
        for (std::size_t col = 0; col < tuples_[m].size(); ++col) {
            const auto& tup = tuples_[m][col];
            SparseVec twisted_last = phi_inv_.apply(vec_unit(tup[m]));
            if (m >= 1) {
                // d_phi: (phi^{-1} a^m · a^0) (x) a^1 ... a^{m-1}
                TupleChain chain;
                add_term(chain, {}, Rational(1));
                chain = extend_by_vector(chain, a_.multiply(twisted_last, vec_unit(tup[0])));
                for (std::size_t k = 1; k + 1 <= m; ++k)
                    chain = extend_by_vector(chain, vec_unit(tup[k]));
                column(m - 1, chain, col, dt);
            }
            if (m + 1 <= n) {
                // s: 1 (x) a^0 ... a^m
                TupleChain chain;
                add_term(chain, {}, Rational(1));
                chain = extend_by_vector(chain, a_.unit());
                for (std::size_t k = 0; k <= m; ++k) chain = extend_by_vector(chain, vec_unit(tup[k]));
                column(m + 1, chain, col, st);
            }
            {
                // t_phi: (phi^{-1} a^m) (x) a^0 ... a^{m-1}
                TupleChain chain;
                add_term(chain, {}, Rational(1));
                chain = extend_by_vector(chain, twisted_last);
                for (std::size_t k = 0; k + 1 <= m; ++k) chain = extend_by_vector(chain, vec_unit(tup[k]));
                column(m, chain, col, tt);
            }
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? dims[m - 1] : 0, dims[m], std::move(dt));
        s[m] = SparseMatrix::from_triplets(m + 1 <= n ? dims[m + 1] : 0, dims[m], std::move(st));
        t[m] = SparseMatrix::from_triplets(dims[m], dims[m], std::move(tt));
    }
    module_.emplace(std::move(spaces), std::move(d), std::move(s), std::move(t));

    std::vector<SparseMatrix> twist;
    for (std::size_t m = 0; m <= n; ++m) twist.push_back(diagonal_matrix(phi_inv_, m));
    if (!module_->has_twist(twist))
        throw CheckError("IdentityViolation",
                         "t_phi^{m+1} does not agree with the diagonal action of phi^{-1}");
}

std::size_t TwistedAlgebraCyclic::index_of(std::size_t m, const std::vector<std::size_t>& t) const {
    auto it = lookup_[m].find(t);
    if (it == lookup_[m].end()) throw CheckError("IndexOutOfRange", "tuple outside the basis");
    return it->second;
}

SparseMatrix TwistedAlgebraCyclic::diagonal_matrix(const SparseMatrix& g, std::size_t m) const {
    std::vector<Triplet> ts;
    for (std::size_t col = 0; col < tuples_[m].size(); ++col) {
        TupleChain chain;
        add_term(chain, {}, Rational(1));
        for (std::size_t k = 0; k <= m; ++k)
            chain = extend_by_vector(chain, g.apply(vec_unit(tuples_[m][col][k])));
        for (const auto& [t, c] : chain) {
            auto it = lookup_[m].find(t);
            if (it == lookup_[m].end())
                throw CheckError("IdentityViolation", "diagonal action leaves the weight piece");
            ts.push_back({it->second, col, c});
        }
    }
    return SparseMatrix::from_triplets(tuples_[m].size(), tuples_[m].size(), std::move(ts));
}

std::vector<std::vector<SparseMatrix>> TwistedAlgebraCyclic::action_family(
    const FiniteGroup& g, const GroupAction& act) const {
    std::vector<std::vector<SparseMatrix>> fam(g.order());
    for (std::size_t x = 0; x < g.order(); ++x)
        for (std::size_t m = 0; m < tuples_.size(); ++m)
            fam[x].push_back(diagonal_matrix(act.matrix(x), m));
    return fam;
}

TwistedGroupCyclic::TwistedGroupCyclic(FiniteGroup g, std::size_t phi, std::size_t n)
    : g_(std::move(g)), phi_(phi) {
    for (std::size_t x = 0; x < g_.order(); ++x)
        if (g_.mul(phi_, x) != g_.mul(x, phi_))
            throw CheckError("PhiNotCentral", "phi does not commute with " + g_.name(x));
    const std::size_t go = g_.order();
    std::vector<std::size_t> dims(n + 1);
    std::vector<std::vector<std::string>> labels(n + 1);
    std::vector<std::size_t> pw(n + 2);
    pw[0] = 1;
    for (std::size_t k = 1; k <= n + 1; ++k) pw[k] = pw[k - 1] * go;
    for (std::size_t m = 0; m <= n; ++m) {
        dims[m] = pw[m + 1];
        for (std::size_t idx = 0; idx < dims[m]; ++idx) {
            std::string l = "(";
            std::size_t rest = idx;
            for (std::size_t k = 0; k <= m; ++k) {
                if (k) l += ",";
                l += g_.name(rest % go);
                rest /= go;
            }
            labels[m].push_back(l + ")");
        }
    }
    GradedModule spaces(n, dims, std::move(labels));

    const std::size_t phi_inv = g_.inv(phi_);
    std::vector<SparseMatrix> d(n + 1), s(n + 1), t(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st, tt;
        for (std::size_t idx = 0; idx < dims[m]; ++idx) {
            const std::size_t last = idx / pw[m];
            const std::size_t head = idx % pw[m];
            if (m >= 1) dt.push_back({head, idx, Rational(1)});
            if (m + 1 <= n) st.push_back({g_.mul(phi_inv, last) + idx * go, idx, Rational(1)});
            tt.push_back({g_.mul(phi_inv, last) + head * go, idx, Rational(1)});
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? dims[m - 1] : 0, dims[m], std::move(dt));
        s[m] = SparseMatrix::from_triplets(m + 1 <= n ? dims[m + 1] : 0, dims[m], std::move(st));
        t[m] = SparseMatrix::from_triplets(dims[m], dims[m], std::move(tt));
    }
    module_.emplace(std::move(spaces), std::move(d), std::move(s), std::move(t));

    // machine check: the simplicial b equals the group differential
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<Triplet> ts;
        for (std::size_t idx = 0; idx < dims[m]; ++idx)
            for (std::size_t j = 0; j <= m; ++j) {
                const std::size_t low = idx % pw[j];
                const std::size_t high = idx / pw[j + 1];
                ts.push_back({low + high * pw[j], idx, Rational(j % 2 == 0 ? 1 : -1)});
            }
        SparseMatrix partial = SparseMatrix::from_triplets(dims[m - 1], dims[m], std::move(ts));
        SparseMatrix b(dims[m - 1], dims[m]);
        for (std::size_t j = 0; j <= m; ++j) {
            SparseMatrix f = module_->face(m, j);
            b = j % 2 == 0 ? b + f : b - f;
        }
        if (b != partial)
            throw CheckError("IdentityViolation",
                             "b-differential of C^phi(Gamma) does not equal the group differential");
    }
    // phi-paracyclic flag: t^{m+1} is the diagonal action of phi^{-1}
    std::vector<SparseMatrix> twist;
    auto la = left_action_family();
    for (std::size_t m = 0; m <= n; ++m) twist.push_back(la[phi_inv][m]);
    if (!module_->has_twist(twist))
        throw CheckError("IdentityViolation",
                         "t_phi^{m+1} does not agree with the action of phi^{-1}");
}

std::size_t TwistedGroupCyclic::tuple_index(const std::vector<std::size_t>& t) const {
    std::size_t idx = 0, p = 1;
    for (std::size_t k = 0; k < t.size(); ++k) {
        idx += t[k] * p;
        p *= g_.order();
    }
    return idx;
}

std::vector<std::size_t> TwistedGroupCyclic::tuple_of(std::size_t m, std::size_t idx) const {
    std::vector<std::size_t> t(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        t[k] = idx % g_.order();
        idx /= g_.order();
    }
    return t;
}

std::vector<std::vector<SparseMatrix>> TwistedGroupCyclic::left_action_family() const {
    const std::size_t n = module_->spaces().truncation;
    const std::size_t go = g_.order();
    std::vector<std::vector<SparseMatrix>> fam(go);
    for (std::size_t x = 0; x < go; ++x) {
        for (std::size_t m = 0; m <= n; ++m) {
            const std::size_t dim = module_->spaces().dim(m);
            std::vector<Triplet> ts;
            for (std::size_t idx = 0; idx < dim; ++idx) {
                std::size_t out = 0, p = 1, rest = idx;
                for (std::size_t k = 0; k <= m; ++k) {
                    out += g_.mul(x, rest % go) * p;
                    rest /= go;
                    p *= go;
                }
                ts.push_back({out, idx, Rational(1)});
            }
            fam[x].push_back(SparseMatrix::from_triplets(dim, dim, std::move(ts)));
        }
    }
    return fam;
}

std::size_t GammaTensorModule::group_tuple_index(const std::vector<std::size_t>& psis) const {
    std::size_t idx = 0, p = 1;
    for (std::size_t k = 0; k < psis.size(); ++k) {
        idx += psis[k] * p;
        p *= group_order;
    }
    return idx;
}

std::vector<std::size_t> GammaTensorModule::group_tuple_of(std::size_t p, std::size_t e) const {
    std::vector<std::size_t> psis(p);
    for (std::size_t k = 0; k < p; ++k) {
        psis[k] = e % group_order;
        e /= group_order;
    }
    return psis;
}

GammaTensorModule tensor_over_gamma(const TwistedGroupCyclic& x, const ParacyclicModule& y,
                                    const std::vector<std::vector<SparseMatrix>>& y_action) {
    const FiniteGroup& g = x.group();
    const std::size_t go = g.order();
    const std::size_t n = std::min(x.module().spaces().truncation, y.spaces().truncation);
    if (y_action.size() != go)
        throw CheckError("ActionMismatch", "need one action family per group element");
    for (std::size_t e = 0; e < go; ++e) {
        if (y_action[e].size() < n + 1)
            throw CheckError("ActionMismatch", "action family too short", g.name(e));
        for (std::size_t m = 0; m <= n; ++m) {
            if (y_action[e][m].rows() != y.spaces().dim(m) || y_action[e][m].cols() != y.spaces().dim(m))
                throw CheckError("ActionMismatch", "action matrix has wrong shape", g.name(e));
        }
    }
    for (std::size_t a = 0; a < go; ++a)
        for (std::size_t b = 0; b < go; ++b)
            for (std::size_t m = 0; m <= n; ++m)
                if (y_action[a][m] * y_action[b][m] != y_action[g.mul(a, b)][m])
                    throw CheckError("ActionMismatch", "action is not a homomorphism",
                                     g.name(a) + "*" + g.name(b));
    for (std::size_t e = 0; e < go; ++e) {
        for (std::size_t m = 1; m <= n; ++m)
            if (y_action[e][m - 1] * y.end_face(m) != y.end_face(m) * y_action[e][m])
                throw CheckError("ActionMismatch", "action does not commute with d", g.name(e));
        for (std::size_t m = 0; m + 1 <= n; ++m)
            if (y_action[e][m + 1] * y.extra_degeneracy(m) != y.extra_degeneracy(m) * y_action[e][m])
                throw CheckError("ActionMismatch", "action does not commute with s", g.name(e));
        for (std::size_t m = 0; m <= n; ++m)
            if (y_action[e][m] * y.cyclic_op(m) != y.cyclic_op(m) * y_action[e][m])
                throw CheckError("ActionMismatch", "action does not commute with t", g.name(e));
    }

    std::vector<std::size_t> pw(n + 2);
    pw[0] = 1;
    for (std::size_t k = 1; k <= n + 1; ++k) pw[k] = pw[k - 1] * go;

    BiGradedModule spaces;
    spaces.truncation = n;
    spaces.dims.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
    spaces.labels.assign(n + 1, std::vector<std::vector<std::string>>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            spaces.dims[p][q] = pw[p] * y.spaces().dim(q);
            for (std::size_t e = 0; e < pw[p]; ++e) {
                std::string gl = "(1";
                std::size_t rest = e;
                for (std::size_t k = 0; k < p; ++k) {
                    gl += "," + g.name(rest % go);
                    rest /= go;
                }
                gl += ")";
                for (std::size_t j = 0; j < y.spaces().dim(q); ++j)
                    spaces.labels[p][q].push_back(gl + "(x)" + y.spaces().label(q, j));
            }
        }

    const std::size_t phi = x.phi();
    auto zero_or = [&](bool inside, std::size_t rows, std::size_t cols, std::vector<Triplet> ts) {
        return inside ? SparseMatrix::from_triplets(rows, cols, std::move(ts))
                      : SparseMatrix(0, cols);
    };

    BiFamily hd(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily hs(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily ht(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily vd(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily vs(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily vt(n + 1, std::vector<SparseMatrix>(n + 1));
    for (std::size_t p = 0; p <= n; ++p) {
        for (std::size_t q = 0; q <= n; ++q) {
            const std::size_t ydim = y.spaces().dim(q);
            const std::size_t cols = spaces.dims[p][q];
            {  // hd: drop the last group coordinate
                std::vector<Triplet> ts;
                if (p >= 1)
                    for (std::size_t e = 0; e < pw[p]; ++e)
                        for (std::size_t j = 0; j < ydim; ++j)
                            ts.push_back({(e % pw[p - 1]) * ydim + j, e * ydim + j, Rational(1)});
                hd[p][q] = zero_or(p >= 1, p >= 1 ? spaces.dims[p - 1][q] : 0, cols, std::move(ts));
            }
            {  // hs / ht: prepend phi^{-1} psi_p, then renormalize by h = psi_p^{-1} phi
                std::vector<Triplet> ss, tt;
                for (std::size_t e = 0; e < pw[p]; ++e) {
                    const std::size_t last = p >= 1 ? (e / pw[p - 1]) % go : g.identity();
                    const std::size_t h = g.mul(g.inv(last), phi);
                    // normalized group tuples: s -> (h, h psi_1 .. h psi_p),
                    // t -> (h, h psi_1 .. h psi_{p-1})
                    std::size_t es = h, et = h, powk = go;
                    std::size_t rest = e;
                    for (std::size_t k = 0; k < p; ++k) {
                        const std::size_t hp = g.mul(h, rest % go);
                        rest /= go;
                        es += hp * powk;
                        if (k + 1 < p) et += hp * powk;
                        powk *= go;
                    }
                    if (p == 0) et = 0;  // empty tuple after t on (1)
                    const SparseMatrix& am = y_action[h][q];
                    for (const auto& tr : am.entries()) {
                        if (p + 1 <= n) ss.push_back({es * ydim + tr.row, e * ydim + tr.col, tr.val});
                        std::size_t et_block = p >= 1 ? et % pw[p] : 0;
                        tt.push_back({et_block * ydim + tr.row, e * ydim + tr.col, tr.val});
                    }
                }
                hs[p][q] = zero_or(p + 1 <= n, p + 1 <= n ? spaces.dims[p + 1][q] : 0, cols, std::move(ss));
                ht[p][q] = SparseMatrix::from_triplets(cols, cols, std::move(tt));
            }
            vd[p][q] = q >= 1 ? kron(SparseMatrix::identity(pw[p]), y.end_face(q))
                              : SparseMatrix(0, cols);
            vs[p][q] = q + 1 <= n ? kron(SparseMatrix::identity(pw[p]), y.extra_degeneracy(q))
                                  : SparseMatrix(0, cols);
            vt[p][q] = kron(SparseMatrix::identity(pw[p]), y.cyclic_op(q));
        }
    }
    BiParacyclicModule module(std::move(spaces), std::move(hd), std::move(hs), std::move(ht),
                              std::move(vd), std::move(vs), std::move(vt));
    std::vector<std::size_t> coeff_dims;
    for (std::size_t q = 0; q <= n; ++q) coeff_dims.push_back(y.spaces().dim(q));
    return GammaTensorModule{std::move(module), go, std::move(coeff_dims)};
}

std::vector<ClassComponent> split_by_class(const CrossedProduct& cp, const FiniteGroup& g,
                                           const TwistedAlgebraCyclic& full) {
    const std::size_t n = full.module().spaces().truncation;
    std::vector<std::size_t> class_rep(g.order());
    for (std::size_t a = 0; a < g.order(); ++a) {
        std::size_t rep = a;
        for (std::size_t xx = 0; xx < g.order(); ++xx)
            rep = std::min(rep, g.mul(g.mul(xx, a), g.inv(xx)));
        class_rep[a] = rep;
    }
    std::vector<std::size_t> reps = class_representatives(g);

    std::vector<ClassComponent> out;
    for (std::size_t rep : reps) {
        ClassComponent comp{rep,
                            ParacyclicModule(GradedModule::numbered(0, {0}, "x"), {SparseMatrix(0, 0)},
                                             {SparseMatrix(0, 0)}, {SparseMatrix(0, 0)}),
                            {}};
        comp.selection.resize(n + 1);
        out.push_back(std::move(comp));
    }
    auto slot = [&](std::size_t rep) {
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (reps[i] == rep) return i;
        throw CheckError("IdentityViolation", "missing class representative");
    };

    std::vector<std::vector<std::size_t>> local(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        local[m].assign(full.module().spaces().dim(m), 0);
        for (std::size_t idx = 0; idx < full.tuples(m).size(); ++idx) {
            std::size_t prod = g.identity();
            for (std::size_t k = 0; k <= m; ++k)
                prod = g.mul(prod, cp.group_of(full.tuples(m)[idx][k]));
            auto& sel = out[slot(class_rep[prod])].selection[m];
            local[m][idx] = sel.size();
            sel.push_back(idx);
        }
    }
    std::size_t total_check = 0;
    for (const auto& comp : out) total_check += comp.selection[n].size();
    if (total_check != full.module().spaces().dim(n))
        throw CheckError("IdentityViolation", "class components do not partition the basis");

    // membership mask per degree: which component each full index belongs to
    std::vector<std::vector<std::size_t>> owner(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        owner[m].assign(full.module().spaces().dim(m), reps.size());
        for (std::size_t ci = 0; ci < out.size(); ++ci)
            for (std::size_t idx : out[ci].selection[m]) owner[m][idx] = ci;
    }

    auto restrict_family = [&](std::size_t ci, int degree) {
        std::vector<SparseMatrix> mats(n + 1);
        for (std::size_t m = 0; m <= n; ++m) {
            const int tgt = int(m) + degree;
            const bool inside = tgt >= 0 && std::size_t(tgt) <= n;
            const std::size_t cols = out[ci].selection[m].size();
            if (!inside) {
                mats[m] = SparseMatrix(0, cols);
                continue;
            }
            const SparseMatrix& fullmat = degree == -1 ? full.module().end_face(m)
                                          : degree == +1 ? full.module().extra_degeneracy(m)
                                                         : full.module().cyclic_op(m);
            auto colsmap = fullmat.to_cols();
            std::vector<Triplet> ts;
            for (std::size_t lc = 0; lc < cols; ++lc) {
                const std::size_t fc = out[ci].selection[m][lc];
                for (const auto& [fr, v] : colsmap[fc]) {
                    if (owner[tgt][fr] != ci)
                        throw CheckError("IdentityViolation",
                                         "class component is not closed under the structure maps",
                                         full.module().spaces().label(m, fc));
                    ts.push_back({local[tgt][fr], lc, v});
                }
            }
            mats[m] = SparseMatrix::from_triplets(out[ci].selection[tgt].size(), cols, std::move(ts));
        }
        return mats;
    };

    for (std::size_t ci = 0; ci < out.size(); ++ci) {
        std::vector<std::size_t> dims(n + 1);
        std::vector<std::vector<std::string>> labels(n + 1);
        for (std::size_t m = 0; m <= n; ++m) {
            dims[m] = out[ci].selection[m].size();
            for (std::size_t idx : out[ci].selection[m])
                labels[m].push_back(full.module().spaces().label(m, idx));
        }
        out[ci].module = ParacyclicModule(GradedModule(n, dims, std::move(labels)),
                                          restrict_family(ci, -1), restrict_family(ci, +1),
                                          restrict_family(ci, 0));
    }
    return out;
}

const ClassComponent& component_of(const std::vector<ClassComponent>& components,
                                   const FiniteGroup& g, std::size_t phi) {
    std::size_t rep = phi;
    for (std::size_t x = 0; x < g.order(); ++x) rep = std::min(rep, g.mul(g.mul(x, phi), g.inv(x)));
    for (const auto& c : components)
        if (c.rep == rep) return c;
    throw CheckError("IndexOutOfRange", "no component for the requested class");
}

namespace {

// expands a tensor of coefficient vectors with group labels into full
// crossed-product tuple coordinates
void expand_crossed(const CrossedProduct& cp, const TwistedAlgebraCyclic& full, std::size_t m,
                    const std::vector<SparseVec>& coeffs, const std::vector<std::size_t>& glabels,
                    std::size_t col, std::vector<Triplet>& ts) {
    TupleChain chain;
    add_term(chain, {}, Rational(1));
    for (std::size_t k = 0; k <= m; ++k) {
        SparseVec labeled;
        for (const auto& [i, c] : coeffs[k]) labeled.emplace_back(cp.index(i, glabels[k]), c);
        chain = extend_by_vector(chain, labeled);
    }
    for (const auto& [t, c] : chain) ts.push_back({full.index_of(m, t), col, c});
}

void check_structure_preserving(const ParacyclicModule& src, const ParacyclicModule& dst,
                                const std::vector<SparseMatrix>& mu, const std::string& what) {
    const std::size_t n = src.spaces().truncation;
    auto expect_eq = [&](const SparseMatrix& lhs, const SparseMatrix& rhs, std::size_t m,
                         const char* op) {
        std::size_t r, c;
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.first_difference(rhs, r, c))
            throw CheckError("NotStructurePreserving",
                             what + std::string(" does not intertwine ") + op + " at degree " +
                                 std::to_string(m),
                             c < src.spaces().dim(m) ? src.spaces().label(m, c) : "");
    };
    for (std::size_t m = 1; m <= n; ++m)
        expect_eq(mu[m - 1] * src.end_face(m), dst.end_face(m) * mu[m], m, "d");
    for (std::size_t m = 0; m + 1 <= n; ++m)
        expect_eq(mu[m + 1] * src.extra_degeneracy(m), dst.extra_degeneracy(m) * mu[m], m, "s");
    for (std::size_t m = 0; m <= n; ++m)
        expect_eq(mu[m] * src.cyclic_op(m), dst.cyclic_op(m) * mu[m], m, "t");
}

}  // namespace

MuPhiMap mu_phi(const FiniteGroup& g, const ConjugacyData& cd, const GroupAction& act,
                const TwistedAlgebraCyclic& xa, const GammaTensorModule& tm,
                const TwistedAlgebraCyclic& full, const ClassComponent& comp) {
    const std::size_t n = tm.module.spaces().truncation;
    const CrossedProduct cp{full.algebra(), xa.algebra().dim(), g.order()};
    ParacyclicModule diag = diagonal(tm.module);

    std::vector<std::vector<std::size_t>> local(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        local[m].assign(full.module().spaces().dim(m), full.module().spaces().dim(m));
        for (std::size_t lc = 0; lc < comp.selection[m].size(); ++lc)
            local[m][comp.selection[m][lc]] = lc;
    }

    std::vector<SparseMatrix> mats_full(n + 1), mats_comp(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const std::size_t ydim = tm.coeff_dims[m];
        std::vector<Triplet> ts;
        for (std::size_t col = 0; col < diag.spaces().dim(m); ++col) {
            const std::size_t e = col / ydim, j = col % ydim;
            std::vector<std::size_t> psis_parent{g.identity()};  // psi_0 = 1
            for (std::size_t c : tm.group_tuple_of(m, e)) psis_parent.push_back(cd.embedding[c]);
            const auto& tup = xa.tuples(m)[j];
            std::vector<SparseVec> coeffs(m + 1);
            std::vector<std::size_t> glabels(m + 1);
            // [(psi_m^{-1} phi) a^0] u_{phi psi_m^{-1} psi_0}
            coeffs[0] = act.apply(g.mul(g.inv(psis_parent[m]), cd.phi), vec_unit(tup[0]));
            glabels[0] = g.mul(g.mul(cd.phi, g.inv(psis_parent[m])), psis_parent[0]);
            for (std::size_t k = 1; k <= m; ++k) {
                coeffs[k] = act.apply(g.inv(psis_parent[k - 1]), vec_unit(tup[k]));
                glabels[k] = g.mul(g.inv(psis_parent[k - 1]), psis_parent[k]);
            }
            expand_crossed(cp, full, m, coeffs, glabels, col, ts);
        }
        mats_full[m] =
            SparseMatrix::from_triplets(full.module().spaces().dim(m), diag.spaces().dim(m), std::move(ts));
        std::vector<Triplet> ct;
        for (const auto& t : mats_full[m].entries()) {
            if (local[m][t.row] >= full.module().spaces().dim(m))
                throw CheckError("NotStructurePreserving",
                                 "mu_phi image leaves the [phi]-component at degree " + std::to_string(m),
                                 diag.spaces().label(m, t.col));
            ct.push_back({local[m][t.row], t.col, t.val});
        }
        mats_comp[m] =
            SparseMatrix::from_triplets(comp.selection[m].size(), diag.spaces().dim(m), std::move(ct));
        if (rank(mats_comp[m]) != diag.spaces().dim(m))
            throw CheckError("NotStructurePreserving",
                             "mu_phi is not injective at degree " + std::to_string(m));
    }
    check_structure_preserving(diag, comp.module, mats_comp, "mu_phi");
    return MuPhiMap{GradedMap(0, diag.spaces(), full.module().spaces(), std::move(mats_full)),
                    GradedMap(0, diag.spaces(), comp.module.spaces(), std::move(mats_comp))};
}

GradedMap mu_inverse(const FiniteGroup& g, const GroupAction& act, const TwistedAlgebraCyclic& xa,
                     const GammaTensorModule& tm, const TwistedAlgebraCyclic& full,
                     const ClassComponent& comp) {
    if (comp.rep != g.identity())
        throw CheckError("IndexOutOfRange", "mu_inverse is defined on the identity component only");
    const std::size_t n = tm.module.spaces().truncation;
    const CrossedProduct cp{full.algebra(), xa.algebra().dim(), g.order()};
    ParacyclicModule diag = diagonal(tm.module);

    std::vector<SparseMatrix> mats(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const std::size_t ydim = tm.coeff_dims[m];
        std::vector<Triplet> ts;
        for (std::size_t col = 0; col < comp.selection[m].size(); ++col) {
            const auto& tup = full.tuples(m)[comp.selection[m][col]];
            std::vector<std::size_t> gs(m + 1), ghat(m + 1);
            for (std::size_t k = 0; k <= m; ++k) gs[k] = cp.group_of(tup[k]);
            ghat[0] = gs[0];
            for (std::size_t k = 1; k <= m; ++k) ghat[k] = g.mul(ghat[k - 1], gs[k]);
            if (ghat[m] != g.identity())
                throw CheckError("IdentityViolation", "identity component mislabeled");
            // (ghat_0 .. ghat_{m-1}, 1) (x) (a^0 (x) ghat_0 a^1 (x) ... ghat_{m-1} a^m),
            // normalized by h = ghat_0^{-1}
            const std::size_t h = g.inv(ghat[0]);
            std::vector<std::size_t> psis(m);  // normalized (psi_1..psi_m)
            for (std::size_t k = 1; k <= m; ++k)
                psis[k - 1] = g.mul(h, k < m ? ghat[k] : g.identity());
            TupleChain chain;
            add_term(chain, {}, Rational(1));
            chain = extend_by_vector(chain, act.apply(h, vec_unit(cp.coeff_of(tup[0]))));
            for (std::size_t k = 1; k <= m; ++k)
                chain = extend_by_vector(
                    chain, act.apply(g.mul(h, ghat[k - 1]), vec_unit(cp.coeff_of(tup[k]))));
            const std::size_t e = tm.group_tuple_index(psis);
            for (const auto& [t, c] : chain) ts.push_back({e * ydim + xa.index_of(m, t), col, c});
        }
        mats[m] = SparseMatrix::from_triplets(diag.spaces().dim(m), comp.selection[m].size(),
                                              std::move(ts));
    }
    check_structure_preserving(comp.module, diag, mats, "mu_inverse");
    return GradedMap(0, comp.module.spaces(), diag.spaces(), std::move(mats));
}

}  // namespace cychom
