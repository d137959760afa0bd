#include "cychom/pipelines.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

std::vector<std::size_t> powers(std::size_t base, std::size_t upto) {
    std::vector<std::size_t> pw(upto + 1);
    pw[0] = 1;
    for (std::size_t k = 1; k <= upto; ++k) pw[k] = pw[k - 1] * base;
    return pw;
}

void expect_mats_equal(const SparseMatrix& lhs, const SparseMatrix& rhs, const std::string& what) {
    std::size_t r, c;
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.first_difference(rhs, r, c))
        throw CheckError("IdentityViolation", what);
}

}  // namespace

HomologyTable group_homology(const FiniteGroup& g, const GroupModule& m, std::size_t n) {
    GradedModule coeff = GradedModule::numbered(0, {m.dim}, "m");
    std::vector<std::vector<SparseMatrix>> action(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) action[x] = {m.mats[x]};
    // coefficients concentrated in degree 0; reuse the tensor machinery and
    // read off the chain complex C_p(G, M) along the row q = 0.
    GroupChainTensor t(g, coeff, action, n);
    std::vector<std::size_t> dims(n + 1);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
        dims[p] = t.spaces().dim(p, 0);
        labels[p] = t.spaces().labels[p][0];
    }
    std::vector<SparseMatrix> d(n + 1);
    for (std::size_t p = 0; p <= n; ++p) d[p] = t.partial()[p][0];
    return homology(ChainComplex(GradedModule(n, dims, std::move(labels)), std::move(d)));
}

EquivariantMixed::EquivariantMixed(MixedComplex complex_, const FiniteGroup& g,
                                   std::vector<std::vector<SparseMatrix>> action_)
    : complex(std::move(complex_)), action(std::move(action_)) {
    const std::size_t n = complex.spaces.truncation;
    if (action.size() != g.order())
        throw CheckError("ActionMismatch", "need one action family per group element");
    for (std::size_t x = 0; x < g.order(); ++x)
        for (std::size_t y = 0; y < g.order(); ++y)
            for (std::size_t m = 0; m <= n; ++m)
                if (action[x][m] * action[y][m] != action[g.mul(x, y)][m])
                    throw CheckError("ActionMismatch", "action is not a homomorphism",
                                     g.name(x) + "*" + g.name(y));
    for (std::size_t x = 0; x < g.order(); ++x) {
        for (std::size_t m = 1; m <= n; ++m)
            if (action[x][m - 1] * complex.b[m] != complex.b[m] * action[x][m])
                throw CheckError("ActionMismatch", "action does not commute with b", g.name(x));
        for (std::size_t m = 0; m + 1 <= n; ++m)
            if (action[x][m + 1] * complex.B[m] != complex.B[m] * action[x][m])
                throw CheckError("ActionMismatch", "action does not commute with B", g.name(x));
    }
}

GroupChainTensor::GroupChainTensor(FiniteGroup g, GradedModule coeff,
                                   std::vector<std::vector<SparseMatrix>> action, std::size_t n)
    : g_(std::move(g)), coeff_(std::move(coeff)), action_(std::move(action)), n_(n) {
    const std::size_t go = g_.order();
    pw_ = powers(go, n + 1);
    if (action_.size() != go)
        throw CheckError("ActionMismatch", "need one action family per group element");
    for (std::size_t x = 0; x < go; ++x) {
        action_[x].resize(n + 1, SparseMatrix(0, 0));
        for (std::size_t q = 0; q <= n; ++q) {
            const std::size_t want = coeff_.dim(q);
            if (action_[x][q].rows() != want || action_[x][q].cols() != want) {
                if (want == 0)
                    action_[x][q] = SparseMatrix(0, 0);
                else
                    throw CheckError("ActionMismatch",
                                     "action matrix has wrong shape at degree " + std::to_string(q),
                                     g_.name(x));
            }
        }
    }

    spaces_.truncation = n;
    spaces_.dims.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
    spaces_.labels.assign(n + 1, std::vector<std::vector<std::string>>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            const std::size_t cdim = coeff_.dim(q);
            spaces_.dims[p][q] = pw_[p] * cdim;
            for (std::size_t e = 0; e < pw_[p]; ++e) {
                std::string gl = "(1";
                std::size_t rest = e;
                for (std::size_t k = 0; k < p; ++k) {
                    gl += "," + g_.name(rest % go);
                    rest /= go;
                }
                gl += ")";
                for (std::size_t j = 0; j < cdim; ++j)
                    spaces_.labels[p][q].push_back(gl + "(x)" + coeff_.label(q, j));
            }
        }

    partial_.assign(n + 1, std::vector<SparseMatrix>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            const std::size_t cdim = coeff_.dim(q);
            if (p == 0) {
                partial_[p][q] = SparseMatrix(0, spaces_.dims[p][q]);
                continue;
            }
            std::vector<Triplet> ts;
            for (std::size_t e = 0; e < pw_[p]; ++e) {
                std::vector<std::size_t> psis(p);
                std::size_t rest = e;
                for (std::size_t k = 0; k < p; ++k) {
                    psis[k] = rest % go;
                    rest /= go;
                }
                // j = 0: drop psi_0 = 1 and renormalize by psi_1^{-1}
                {
                    const std::size_t h = g_.inv(psis[0]);
                    std::size_t enew = 0, pk = 1;
                    for (std::size_t k = 1; k < p; ++k) {
                        enew += g_.mul(h, psis[k]) * pk;
                        pk *= go;
                    }
                    for (const auto& tr : action_[h][q].entries())
                        ts.push_back({enew * cdim + tr.row, e * cdim + tr.col, tr.val});
                }
                // j = 1..p: drop psi_j (psi_p is position p)
                for (std::size_t j = 1; j <= p; ++j) {
                    std::size_t enew = 0, pk = 1;
                    for (std::size_t k = 0; k < p; ++k) {
                        if (k == j - 1) continue;  // psis[k] is psi_{k+1}
                        enew += psis[k] * pk;
                        pk *= go;
                    }
                    const Rational sign(j % 2 == 0 ? 1 : -1);
                    for (std::size_t c = 0; c < cdim; ++c)
                        ts.push_back({enew * cdim + c, e * cdim + c, sign});
                }
            }
            partial_[p][q] =
                SparseMatrix::from_triplets(spaces_.dims[p - 1][q], spaces_.dims[p][q], std::move(ts));
        }
}

BiFamily GroupChainTensor::lift(const std::vector<SparseMatrix>& f, int dq) const {
    BiFamily out(n_ + 1, std::vector<SparseMatrix>(n_ + 1));
    for (std::size_t p = 0; p <= n_; ++p)
        for (std::size_t q = 0; q <= n_; ++q) {
            const int tq = int(q) + dq;
            if (tq < 0 || std::size_t(tq) > n_)
                out[p][q] = SparseMatrix(0, spaces_.dims[p][q]);
            else
                out[p][q] = kron(SparseMatrix::identity(pw_[p]), f[q]);
        }
    return out;
}

std::size_t GroupChainTensor::tuple_index(const std::vector<std::size_t>& psis) const {
    std::size_t idx = 0, pk = 1;
    for (std::size_t k = 0; k < psis.size(); ++k) {
        idx += psis[k] * pk;
        pk *= g_.order();
    }
    return idx;
}

Rational GroupCochain::eval(const FiniteGroup& g, const std::vector<std::size_t>& tuple) const {
    if (tuple.size() != degree + 1)
        throw CheckError("IndexOutOfRange", "cochain evaluated on a tuple of wrong length");
    const std::size_t h = g.inv(tuple[0]);
    std::size_t idx = 0, pk = 1;
    for (std::size_t k = 1; k <= degree; ++k) {
        idx += g.mul(h, tuple[k]) * pk;
        pk *= g.order();
    }
    return degree == 0 ? values[0] : values[idx];
}

GroupCochain GroupCochain::coboundary(const FiniteGroup& g) const {
    GroupCochain out;
    out.degree = degree + 1;
    const std::size_t go = g.order();
    std::size_t count = 1;
    for (std::size_t k = 0; k < out.degree; ++k) count *= go;
    out.values.assign(count, Rational(0));
    for (std::size_t e = 0; e < count; ++e) {
        std::vector<std::size_t> tuple{g.identity()};
        std::size_t rest = e;
        for (std::size_t k = 0; k < out.degree; ++k) {
            tuple.push_back(rest % go);
            rest /= go;
        }
        Rational acc(0);
        for (std::size_t j = 0; j <= out.degree; ++j) {
            std::vector<std::size_t> sub;
            for (std::size_t k = 0; k <= out.degree; ++k)
                if (k != j) sub.push_back(tuple[k]);
            Rational v = eval(g, sub);
            acc += j % 2 == 0 ? v : -v;
        }
        out.values[e] = acc;
    }
    return out;
}

bool GroupCochain::is_cocycle(const FiniteGroup& g) const {
    for (const Rational& v : coboundary(g).values)
        if (v != 0) return false;
    return true;
}

namespace {

BiFamily cap_family_raw(const GroupChainTensor& t, const GroupCochain& u) {
    const FiniteGroup& g = t.group();
    const std::size_t go = g.order();
    const std::size_t n = t.spaces().truncation;
    const std::size_t k = u.degree;
    BiFamily out(n + 1, std::vector<SparseMatrix>(n + 1));
    for (std::size_t p = 0; p <= n; ++p) {
        std::size_t pwp = 1;
        for (std::size_t i = 0; i < p; ++i) pwp *= go;
        for (std::size_t q = 0; q <= n; ++q) {
            const std::size_t cols = t.spaces().dim(p, q);
            if (p < k) {
                out[p][q] = SparseMatrix(0, cols);
                continue;
            }
            const std::size_t cdim = pwp == 0 ? 0 : cols / pwp;
            std::vector<Triplet> ts;
            for (std::size_t e = 0; e < pwp; ++e) {
                std::vector<std::size_t> psis{g.identity()};  // psi_0 = 1
                std::size_t rest = e;
                for (std::size_t i = 0; i < p; ++i) {
                    psis.push_back(rest % go);
                    rest /= go;
                }
                // coefficient u(psi_{p-k}, .., psi_p); front part (psi_0..psi_{p-k})
                std::vector<std::size_t> back(psis.begin() + (p - k), psis.end());
                Rational v = u.eval(g, back);
                if (v == 0) continue;
                std::size_t enew = 0, pk2 = 1;
                for (std::size_t i = 1; i <= p - k; ++i) {
                    enew += psis[i] * pk2;
                    pk2 *= go;
                }
                for (std::size_t c = 0; c < cdim; ++c)
                    ts.push_back({enew * cdim + c, e * cdim + c, v});
            }
            out[p][q] = SparseMatrix::from_triplets(t.spaces().dim(p - k, q), cols, std::move(ts));
        }
    }
    return out;
}

}  // namespace

BiFamily cap_family(const GroupChainTensor& t, const GroupCochain& u) {
    const std::size_t n = t.spaces().truncation;
    const std::size_t k = u.degree;
    BiFamily out = cap_family_raw(t, u);
    // Leibniz identity with the recorded back-face sign convention:
    // partial(u cap x) = u cap partial(x) + (-1)^{p-k} (partial u) cap x
    if (k + 1 <= n) {
        BiFamily cd = cap_family_raw(t, u.coboundary(t.group()));
        for (std::size_t p = k + 1; p <= n; ++p)
            for (std::size_t q = 0; q <= n; ++q) {
                SparseMatrix lhs = t.partial()[p - k][q] * out[p][q];
                SparseMatrix rhs = out[p - 1][q] * t.partial()[p][q];
                SparseMatrix corr = (p - k) % 2 == 0 ? cd[p][q] : cd[p][q].scaled(Rational(-1));
                expect_mats_equal(lhs, rhs + corr,
                                  "cap product violates the Leibniz identity at (" +
                                      std::to_string(p) + "," + std::to_string(q) + ")");
            }
    }
    return out;
}

InvariantComplex invariants_projector(const ParachainComplex& c,
                                      const std::vector<std::vector<SparseMatrix>>& action) {
    const std::size_t n = c.spaces.truncation;
    if (action.empty()) throw CheckError("ActionMismatch", "empty action family");
    InvariantComplex out{MixedComplex(GradedModule::numbered(0, {0}, "x"), {SparseMatrix(0, 0)},
                                      {SparseMatrix(0, 0)}),
                         {},
                         {},
                         {},
                         {}};
    std::vector<SparseMatrix> nu(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        SparseMatrix acc(c.spaces.dim(m), c.spaces.dim(m));
        for (const auto& fam : action) acc = acc + fam[m];
        nu[m] = acc.scaled(rat(1, long(action.size())));
        expect_mats_equal(nu[m] * nu[m], nu[m], "averaging operator is not idempotent");
    }
    for (std::size_t m = 1; m <= n; ++m)
        expect_mats_equal(nu[m - 1] * c.b[m], c.b[m] * nu[m], "averaging does not commute with b");
    for (std::size_t m = 0; m + 1 <= n; ++m)
        expect_mats_equal(nu[m + 1] * c.B[m], c.B[m] * nu[m], "averaging does not commute with B");

    std::vector<std::size_t> dims(n + 1);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        out.subspaces.push_back(image(nu[m]));
        dims[m] = out.subspaces[m].dim();
        for (std::size_t i = 0; i < dims[m]; ++i)
            labels[m].push_back("inv." + std::to_string(m) + "." + std::to_string(i));
        std::vector<Triplet> inc;
        for (std::size_t i = 0; i < dims[m]; ++i)
            for (const auto& [r, v] : out.subspaces[m].basis()[i]) inc.push_back({r, i, v});
        out.inclusion.push_back(
            SparseMatrix::from_triplets(c.spaces.dim(m), dims[m], std::move(inc)));
        std::vector<Triplet> res;
        for (std::size_t i = 0; i < c.spaces.dim(m); ++i) {
            std::vector<Rational> coeffs;
            SparseVec rem = out.subspaces[m].reduce(nu[m].apply(vec_unit(i)), &coeffs);
            if (!vec_is_zero(rem))
                throw CheckError("IdentityViolation", "projector image escapes its own image space");
            for (std::size_t r = 0; r < coeffs.size(); ++r)
                if (coeffs[r] != 0) res.push_back({r, i, coeffs[r]});
        }
        out.restriction.push_back(
            SparseMatrix::from_triplets(dims[m], c.spaces.dim(m), std::move(res)));
        out.projector.push_back(out.inclusion[m] * out.restriction[m]);
        expect_mats_equal(out.projector[m], nu[m], "inclusion o restriction != averaging");
        expect_mats_equal(out.restriction[m] * out.inclusion[m], SparseMatrix::identity(dims[m]),
                          "restriction is not left-inverse to inclusion");
    }
    std::vector<SparseMatrix> b(n + 1), B(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        b[m] = m >= 1 ? out.restriction[m - 1] * (c.b[m] * out.inclusion[m])
                      : SparseMatrix(0, dims[0]);
        B[m] = m + 1 <= n ? out.restriction[m + 1] * (c.B[m] * out.inclusion[m])
                          : SparseMatrix(0, dims[m]);
        // the restriction must be lossless: b maps invariants to invariants
        if (m >= 1)
            expect_mats_equal(out.inclusion[m - 1] * b[m], c.b[m] * out.inclusion[m],
                              "b does not preserve the invariants");
        if (m + 1 <= n)
            expect_mats_equal(out.inclusion[m + 1] * B[m], c.B[m] * out.inclusion[m],
                              "B does not preserve the invariants");
    }
    out.complex = MixedComplex(GradedModule(n, dims, std::move(labels)), std::move(b), std::move(B));
    return out;
}

SparseMatrix InvariantComplex::restrict_op(const SparseMatrix& ambient_op, std::size_t m_src,
                                           std::size_t m_dst) const {
    SparseMatrix r = restriction[m_dst] * (ambient_op * inclusion[m_src]);
    expect_mats_equal(inclusion[m_dst] * r, ambient_op * inclusion[m_src],
                      "operator does not preserve the invariants");
    return r;
}

PiZeroIota pi0_iota(const TwistedGroupCyclic& xg) {
    const std::size_t n = xg.module().spaces().truncation;
    GradedModule ck = GradedModule::numbered(n, [&] {
        std::vector<std::size_t> d(n + 1, 0);
        d[0] = 1;
        return d;
    }(), "k");
    std::vector<SparseMatrix> pmats(n + 1), imats(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        if (m == 0) {
            std::vector<Triplet> ones;
            for (std::size_t i = 0; i < xg.module().spaces().dim(0); ++i)
                ones.push_back({0, i, Rational(1)});
            pmats[0] = SparseMatrix::from_triplets(1, xg.module().spaces().dim(0), std::move(ones));
            imats[0] = SparseMatrix::from_triplets(xg.module().spaces().dim(0), 1,
                                                   {{0, 0, Rational(1)}});
        } else {
            pmats[m] = SparseMatrix(0, xg.module().spaces().dim(m));
            imats[m] = SparseMatrix(xg.module().spaces().dim(m), 0);
        }
    }
    expect_mats_equal(pmats[0] * imats[0], SparseMatrix::identity(1), "pi0 iota != id");
    // pi0 is a parachain map: it kills boundaries out of degree 1
    ParachainComplex pc = derive_parachain(xg.module());
    expect_mats_equal(pmats[0] * pc.b[1], SparseMatrix(1, xg.module().spaces().dim(1)),
                      "pi0 does not intertwine the b-differentials");
    PiZeroIota out{GradedMap(0, xg.module().spaces(), ck, std::move(pmats)),
                   GradedMap(0, ck, xg.module().spaces(), std::move(imats))};
    return out;
}

std::vector<SparseMatrix> antisymmetrize(const FiniteGroup& g, std::size_t n,
                                         bool signed_convention) {
    const std::size_t go = g.order();
    auto pw = powers(go, n + 1);
    std::vector<SparseMatrix> out(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const std::size_t dim = pw[m + 1];
        std::vector<Triplet> ts;
        std::vector<std::size_t> perm(m + 1);
        for (std::size_t i = 0; i <= m; ++i) perm[i] = i;
        Rational fact(1);
        for (std::size_t i = 2; i <= m + 1; ++i) fact *= Rational(long(i));
        const Rational weight = 1 / fact;
        do {
            int inversions = 0;
            for (std::size_t i = 0; i <= m; ++i)
                for (std::size_t j = i + 1; j <= m; ++j)
                    if (perm[i] > perm[j]) ++inversions;
            const Rational coeff =
                signed_convention && inversions % 2 == 1 ? -weight : weight;
            for (std::size_t idx = 0; idx < dim; ++idx) {
                std::vector<std::size_t> tup(m + 1);
                std::size_t rest = idx;
                for (std::size_t k = 0; k <= m; ++k) {
                    tup[k] = rest % go;
                    rest /= go;
                }
                // entry k of the image is psi_{perm^{-1}(k)}; equivalently the
                // image places psi_i at position perm[i]
                std::size_t outidx = 0;
                for (std::size_t i = 0; i <= m; ++i) outidx += tup[i] * pw[perm[i]];
                ts.push_back({outidx, idx, coeff});
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        out[m] = SparseMatrix::from_triplets(dim, dim, std::move(ts));
    }
    return out;
}

std::vector<SparseMatrix> nu_phi(const FiniteGroup& g, std::size_t phi, std::size_t n) {
    const std::size_t r = g.element_order(phi);
    const std::size_t go = g.order();
    auto pw = powers(go, n + 1);
    std::vector<SparseMatrix> out(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const std::size_t dim = pw[m + 1];
        Rational weight(1);
        for (std::size_t k = 0; k <= m; ++k) weight /= Rational(long(r));
        std::vector<Triplet> ts;
        std::vector<std::size_t> exps(m + 1, 0);
        while (true) {
            for (std::size_t idx = 0; idx < dim; ++idx) {
                std::size_t outidx = 0, rest = idx;
                for (std::size_t k = 0; k <= m; ++k) {
                    const std::size_t psi = rest % go;
                    rest /= go;
                    outidx += g.mul(g.power(phi, long(exps[k])), psi) * pw[k];
                }
                ts.push_back({outidx, idx, weight});
            }
            std::size_t k = 0;
            while (k <= m && ++exps[k] == r) exps[k++] = 0;
            if (k > m) break;
        }
        out[m] = SparseMatrix::from_triplets(dim, dim, std::move(ts));
    }
    return out;
}

std::vector<SparseMatrix> normalize_group_map(const FiniteGroup& g,
                                              const std::vector<SparseMatrix>& family,
                                              const GroupModule& coeff, std::size_t n,
                                              int degree) {
    const std::size_t go = g.order();
    auto pw = powers(go, n + 2);
    std::vector<SparseMatrix> out(n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
        const std::size_t cols = pw[p] * coeff.dim;
        const int tp = int(p) + degree;
        if (tp < 0 || std::size_t(tp) > n) {
            out[p] = SparseMatrix(0, cols);
            continue;
        }
        std::vector<Triplet> ts;
        for (std::size_t e = 0; e < pw[p]; ++e) {
            // lift (1, psi_1..psi_p) to the full tuple index; the identity
            // element contributes digit 0 at position 0
            std::size_t full = 0;
            {
                std::size_t rest = e, pk = go;
                for (std::size_t k = 0; k < p; ++k) {
                    full += (rest % go) * pk;
                    rest /= go;
                    pk *= go;
                }
            }
            for (const auto& [row, v] : family[p].apply(vec_unit(full))) {
                // decode the output tuple (degree p + degree), renormalize by
                // chi_0^{-1}
                std::vector<std::size_t> chis(std::size_t(tp) + 1);
                std::size_t rest = row;
                for (std::size_t k = 0; k <= std::size_t(tp); ++k) {
                    chis[k] = rest % go;
                    rest /= go;
                }
                const std::size_t h = g.inv(chis[0]);
                std::size_t enew = 0, pk = 1;
                for (std::size_t k = 1; k <= std::size_t(tp); ++k) {
                    enew += g.mul(h, chis[k]) * pk;
                    pk *= go;
                }
                for (std::size_t j = 0; j < coeff.dim; ++j)
                    for (const auto& [cr, cv] : coeff.mats[h].apply(vec_unit(j)))
                        ts.push_back({enew * coeff.dim + cr, e * coeff.dim + j, v * cv});
            }
        }
        out[p] = SparseMatrix::from_triplets(pw[std::size_t(tp)] * coeff.dim, cols, std::move(ts));
    }
    return out;
}

namespace {

// machine checks for the antisymmetrization pipeline: idempotents, the
// parachain-map property of eps nu_phi, and the homology-level identity
void check_flat_projection(const FiniteGroup& g, std::size_t phi, std::size_t n,
                           std::vector<std::pair<std::string, bool>>& checks) {
    TwistedGroupCyclic xg(g, phi, n);
    ParachainComplex pc = derive_parachain(xg.module());
    auto eps = antisymmetrize(g, n, true);
    auto nu = nu_phi(g, phi, n);
    bool ok = true;
    for (std::size_t m = 0; m <= n; ++m) {
        if (eps[m] * eps[m] != eps[m]) ok = false;
        if (nu[m] * nu[m] != nu[m]) ok = false;
        if (eps[m] * nu[m] != nu[m] * eps[m]) ok = false;
    }
    checks.emplace_back("eps_nu_idempotent_commute", ok);
    std::vector<SparseMatrix> en(n + 1);
    for (std::size_t m = 0; m <= n; ++m) en[m] = eps[m] * nu[m];
    bool chain = true, bkill = true;
    for (std::size_t m = 1; m <= n; ++m)
        if (en[m - 1] * pc.b[m] != pc.b[m] * en[m]) chain = false;
    for (std::size_t m = 0; m + 1 <= n; ++m)
        if (!(en[m + 1] * pc.B[m]).is_zero()) bkill = false;
    checks.emplace_back("eps_nu_chain_map", chain);
    checks.emplace_back("eps_nu_kills_B", bkill);

    // induced map on H_*(Gamma, trivial) is the identity in canonical bases
    GroupModule triv{1, std::vector<SparseMatrix>(g.order(), SparseMatrix::identity(1))};
    auto norm = normalize_group_map(g, en, triv, n);
    GradedModule coeff = GradedModule::numbered(0, {1}, "m");
    std::vector<std::vector<SparseMatrix>> action(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) action[x] = {SparseMatrix::identity(1)};
    GroupChainTensor t(g, coeff, action, n);
    bool hom_id = true;
    for (std::size_t p = 0; p + 1 <= n; ++p) {
        Subspace z = p == 0 ? Subspace::full(t.spaces().dim(0, 0)) : kernel(t.partial()[p][0]);
        Subspace bd = image(t.partial()[p + 1][0]);
        SparseMatrix ind = induced_map(norm[p], z, bd, z, bd);
        if (ind != SparseMatrix::identity(ind.rows())) hom_id = false;
    }
    checks.emplace_back("eps_nu_identity_on_group_homology", hom_id);
    if (!(ok && chain && bkill && hom_id))
        throw CheckError("IdentityViolation", "antisymmetrization projection checks failed");
}

}  // namespace

PipelineReport finite_order_pipeline(const Algebra& a, const FiniteGroup& g,
                                     const GroupAction& act, std::size_t phi, std::size_t n,
                                     std::size_t weight, bool with_direct, std::size_t ss_pages) {
    PipelineReport rep;
    rep.weight = weight;
    rep.method = "finite-order";
    ConjugacyData cd = conjugacy_analysis(g, phi);
    {
        std::size_t rr = phi;
        for (std::size_t x = 0; x < g.order(); ++x) rr = std::min(rr, g.mul(g.mul(x, phi), g.inv(x)));
        rep.class_rep = rr;
    }
    const FiniteGroup& gp = cd.centralizer;

    // C^phi(A) over the centralizer, its <phi>-invariants, and the
    // Gamma_phi-action on them
    TwistedAlgebraCyclic xa(a, act.matrix(phi), n, weight);
    ParachainComplex cphi = derive_parachain(xa.module());
    std::vector<std::vector<SparseMatrix>> phi_powers;
    for (std::size_t k = 0; k < cd.order_of_phi; ++k) {
        std::vector<SparseMatrix> fam;
        const SparseMatrix pk = act.matrix(g.power(phi, long(k)));
        for (std::size_t m = 0; m <= n; ++m) fam.push_back(xa.diagonal_matrix(pk, m));
        phi_powers.push_back(std::move(fam));
    }
    InvariantComplex cinv = invariants_projector(cphi, phi_powers);

    std::vector<std::vector<SparseMatrix>> gp_action(gp.order());
    for (std::size_t x = 0; x < gp.order(); ++x)
        for (std::size_t m = 0; m <= n; ++m)
            gp_action[x].push_back(
                cinv.restrict_op(xa.diagonal_matrix(act.matrix(cd.embedding[x]), m), m, m));

    // C-flat(Gamma_phi, C^phi): mixed bicomplex with hb = partial, hB = 0
    EquivariantMixed em(cinv.complex, gp, gp_action);  // validates the action
    (void)em;
    GroupChainTensor tensor(gp, cinv.complex.spaces, gp_action, n);
    BiFamily hB(n + 1, std::vector<SparseMatrix>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q)
            hB[p][q] = SparseMatrix(p + 1 <= n ? tensor.spaces().dim(p + 1, q) : 0,
                                    tensor.spaces().dim(p, q));
    ParachainBicomplex flat(tensor.spaces(), tensor.partial(), std::move(hB),
                            tensor.lift(cinv.complex.b, -1), tensor.lift(cinv.complex.B, +1));
    rep.checks.emplace_back("flat_bicomplex_mixed", flat.mixed);

    TotalizedMixed model = totalize_mixed(flat);
    rep.model_hc = hc(model.complex).dims();
    SStabilization st = s_stabilization(cyclic_complex(model.complex).module);
    rep.hp[0] = st.hp[0];
    rep.hp[1] = st.hp[1];
    for (const auto& s_map : st.s_on_homology) rep.periodicity_ranks.push_back(rank(s_map));

    // finite-centralizer model: HC of the Gamma_phi-invariant subcomplex
    std::vector<std::vector<SparseMatrix>> full_action;
    for (std::size_t x = 0; x < gp.order(); ++x) {
        std::vector<SparseMatrix> fam;
        for (std::size_t m = 0; m <= n; ++m)
            fam.push_back(xa.diagonal_matrix(act.matrix(cd.embedding[x]), m));
        full_action.push_back(std::move(fam));
    }
    InvariantComplex gamma_inv = invariants_projector(cphi, full_action);
    rep.invariant_hc = hc(gamma_inv.complex).dims();

    // pi0 / iota and the antisymmetrization projection, with their checks
    {
        TwistedGroupCyclic xg(gp, cd.phi_in_centralizer, n);
        PiZeroIota pi = pi0_iota(xg);
        rep.checks.emplace_back("pi0_iota_identity",
                                pi.pi0.at(0) * pi.iota.at(0) == SparseMatrix::identity(1));
        check_flat_projection(gp, cd.phi_in_centralizer, n, rep.checks);
    }

    // the three spectral sequences of the flat bicomplex
    Triangularized wsig = triangularize(flat, true);
    Triangularized sig = triangularize(flat, false);
    rep.ss.emplace("I", spectral_sequence(filtered_total(wsig.module), ss_pages));
    {
        // II: columns filtration of the vertical triangularization
        TotalSModule tot = totalize(sig.module);
        std::vector<std::vector<std::size_t>> level(n + 1);
        for (std::size_t m = 0; m <= n; ++m) {
            level[m].assign(tot.module.spaces.dim(m), 0);
            for (std::size_t p = 0; p <= m; ++p) {
                const std::size_t lo = tot.offsets[m][p];
                const std::size_t hi = p + 1 <= m ? tot.offsets[m][p + 1] : tot.module.spaces.dim(m);
                for (std::size_t i = lo; i < hi; ++i) level[m][i] = p;
            }
        }
        rep.ss.emplace("II",
                       spectral_sequence(FilteredComplex(tot.module.chain_view(), std::move(level)),
                                         ss_pages));
    }
    rep.ss.emplace("III", spectral_sequence(filtered_total(sig.module), ss_pages));
    for (const auto& [name, ss] : rep.ss)
        rep.checks.emplace_back("ss_" + name + "_converged", ss.report.converged);

    if (with_direct) {
        CrossedProduct cp = crossed_product(a, g, act);
        SparseMatrix id_cp = SparseMatrix::identity(cp.algebra.dim());
        TwistedAlgebraCyclic full(cp.algebra, id_cp, n, weight);
        auto comps = split_by_class(cp, g, full);
        const ClassComponent& comp = component_of(comps, g, phi);
        MixedComplex direct = derive_parachain(comp.module).as_mixed();
        rep.direct_hc = hc(direct).dims();
        rep.direct_computed = true;

        // mu_phi with its structure checks
        TwistedGroupCyclic xg(gp, cd.phi_in_centralizer, n);
        GammaTensorModule tm = tensor_over_gamma(xg, xa.module(), xa.action_family(gp, [&] {
                                                     std::vector<SparseMatrix> mats;
                                                     for (std::size_t x = 0; x < gp.order(); ++x)
                                                         mats.push_back(act.matrix(cd.embedding[x]));
                                                     return GroupAction(a, gp, std::move(mats));
                                                 }()));
        MuPhiMap mu = mu_phi(g, cd, act, xa, tm, full, comp);
        rep.checks.emplace_back("mu_phi_structure_preserving", true);  // throws otherwise
        (void)mu;
    }

    rep.hc_equal = true;
    for (std::size_t deg = 0; deg + 2 <= n; ++deg) {
        if (rep.model_hc[deg] != rep.invariant_hc[deg]) rep.hc_equal = false;
        if (rep.direct_computed && rep.model_hc[deg] != rep.direct_hc[deg]) rep.hc_equal = false;
    }
    rep.checks.emplace_back("hc_endpoints_equal", rep.hc_equal);
    return rep;
}

EulerCocycleData euler_cocycle_from_section(const FiniteGroup& gbar,
                                            const std::vector<long>& section, long phi_step) {
    if (section.size() != gbar.order())
        throw CheckError("SchemaError", "need one section value per element");
    if (phi_step == 0) throw CheckError("SchemaError", "phi must generate a nontrivial subgroup");
    std::vector<std::vector<long>> c(gbar.order(), std::vector<long>(gbar.order(), 0));
    for (std::size_t x = 0; x < gbar.order(); ++x)
        for (std::size_t y = 0; y < gbar.order(); ++y) {
            const long num = section[x] + section[y] - section[gbar.mul(x, y)];
            if (num % phi_step != 0)
                throw CheckError("NotACocycle", "section defect is not a multiple of phi",
                                 gbar.name(x) + "*" + gbar.name(y));
            c[x][y] = num / phi_step;
        }
    return euler_cocycle(gbar, std::move(c));
}

EulerCocycleData euler_cocycle(const FiniteGroup& gbar, std::vector<std::vector<long>> c) {
    const std::size_t go = gbar.order();
    if (c.size() != go) throw CheckError("SchemaError", "cocycle table has wrong shape");
    for (const auto& row : c)
        if (row.size() != go) throw CheckError("SchemaError", "cocycle table has wrong shape");
    for (std::size_t x = 0; x < go; ++x)
        for (std::size_t y = 0; y < go; ++y)
            for (std::size_t z = 0; z < go; ++z)
                if (c[y][z] - c[gbar.mul(x, y)][z] + c[x][gbar.mul(y, z)] - c[x][y] != 0)
                    throw CheckError("NotACocycle", "2-cocycle identity fails",
                                     gbar.name(x) + "," + gbar.name(y) + "," + gbar.name(z));
    GroupCochain u;
    u.degree = 2;
    u.values.assign(go * go, Rational(0));
    for (std::size_t p1 = 0; p1 < go; ++p1)
        for (std::size_t p2 = 0; p2 < go; ++p2)
            u.values[p1 + p2 * go] = Rational(c[p1][gbar.mul(gbar.inv(p1), p2)]);
    if (!u.is_cocycle(gbar))
        throw CheckError("NotACocycle", "homogeneous representative fails the cocycle identity");
    EulerCocycleData out{std::move(c), std::move(u)};
    return out;
}

SigmaModel sigma_model(const FiniteGroup& gbar, const EulerCocycleData& e,
                       const EquivariantMixed& c, std::size_t ss_pages, bool literal_sign) {
    const std::size_t n = c.complex.spaces.truncation;
    GroupChainTensor tensor(gbar, c.complex.spaces, c.action, n);
    BiFamily cap = cap_family(tensor, e.u);
    BiFamily vb = tensor.lift(c.complex.b, -1);
    BiFamily vB = tensor.lift(c.complex.B, +1);

    TotalSpaces tot = totalize_spaces(tensor.spaces());
    std::vector<SparseMatrix> d(n + 1), S(n + 1), T(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            if (m >= 1) {
                if (p >= 1)
                    for (const auto& tr : tensor.partial()[p][q].entries())
                        dt.push_back({tot.offsets[m - 1][p - 1] + tr.row, tot.offsets[m][p] + tr.col,
                                      tr.val});
                if (q >= 1) {
                    SparseMatrix x = p % 2 == 0 ? vb[p][q] : vb[p][q].scaled(Rational(-1));
                    for (const auto& tr : x.entries())
                        dt.push_back({tot.offsets[m - 1][p] + tr.row, tot.offsets[m][p] + tr.col, tr.val});
                }
                if (p >= 2) {
                    // (-1)^p B (u cap -)   [the literal reading uses -1 instead]
                    SparseMatrix x = vB[p - 2][q] * cap[p][q];
                    const bool negate = literal_sign ? true : p % 2 == 1;
                    if (negate) x = x.scaled(Rational(-1));
                    for (const auto& tr : x.entries())
                        dt.push_back({tot.offsets[m - 1][p - 2] + tr.row, tot.offsets[m][p] + tr.col,
                                      tr.val});
                }
            }
            if (m >= 2 && p >= 2)
                for (const auto& tr : cap[p][q].entries())
                    st.push_back({tot.offsets[m - 2][p - 2] + tr.row, tot.offsets[m][p] + tr.col,
                                  tr.val});
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? tot.spaces.dim(m - 1) : 0, tot.spaces.dim(m),
                                           std::move(dt));
        S[m] = SparseMatrix::from_triplets(m >= 2 ? tot.spaces.dim(m - 2) : 0, tot.spaces.dim(m),
                                           std::move(st));
        T[m] = SparseMatrix::identity(tot.spaces.dim(m));
    }
    // (d-dagger)^2 = 0 is the arbiter for the sign reading
    for (std::size_t m = 2; m <= n; ++m) {
        SparseMatrix sq = d[m - 1] * d[m];
        std::size_t r, cc;
        if (!sq.is_zero()) {
            sq.first_difference(SparseMatrix(sq.rows(), sq.cols()), r, cc);
            throw CheckError("DSquaredNonzero",
                             "(d-dagger)^2 != 0 at degree " + std::to_string(m),
                             tot.spaces.label(m, cc));
        }
    }
    SigmaModel out{TotalSModule{ParaSModule(tot.spaces, std::move(d), std::move(S), std::move(T)),
                                tot.offsets},
                   {},
                   {},
                   {}};
    out.stab = s_stabilization(out.total.module);

    // independent route to the periodicity matrices: induced maps of the
    // assembled cap family on homology
    {
        ChainComplex cx = out.total.module.chain_view();
        const std::size_t reliable = n >= 1 ? n - 1 : 0;
        std::vector<Subspace> zs, bs;
        for (std::size_t deg = 0; deg <= reliable; ++deg) {
            zs.push_back(deg == 0 ? Subspace::full(cx.spaces.dim(0)) : kernel(cx.d[deg]));
            bs.push_back(image(cx.d[deg + 1]));
        }
        for (std::size_t deg = 0; deg + 2 <= reliable; ++deg)
            out.cap_on_homology.push_back(induced_map(out.total.module.S[deg + 2], zs[deg + 2],
                                                      bs[deg + 2], zs[deg], bs[deg]));
    }

    // columns filtration spectral sequence
    {
        std::vector<std::vector<std::size_t>> level(n + 1);
        for (std::size_t m = 0; m <= n; ++m) {
            level[m].assign(out.total.module.spaces.dim(m), 0);
            for (std::size_t p = 0; p <= m; ++p) {
                const std::size_t lo = out.total.offsets[m][p];
                const std::size_t hi =
                    p + 1 <= m ? out.total.offsets[m][p + 1] : out.total.module.spaces.dim(m);
                for (std::size_t i = lo; i < hi; ++i) level[m][i] = p;
            }
        }
        out.ss = spectral_sequence(
            FilteredComplex(out.total.module.chain_view(), std::move(level)), ss_pages);
    }
    return out;
}

}  // namespace cychom
