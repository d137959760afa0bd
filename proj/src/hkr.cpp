#include "cychom/hkr.hpp"

#include <algorithm>
#include <map>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

void enumerate_monomials(std::size_t vars, std::size_t weight, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == vars) {
        std::size_t total = 0;
        for (std::size_t e : cur) total += e;
        if (total == weight) out.push_back(cur);
        return;
    }
    std::size_t used = 0;
    for (std::size_t e : cur) used += e;
    for (std::size_t e = 0; e + used <= weight; ++e) {
        cur.push_back(e);
        enumerate_monomials(vars, weight, cur, out);
        cur.pop_back();
    }
}

std::string monomial_label(const std::vector<std::size_t>& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += "x" + std::to_string(i + 1);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = k;
        bool more = false;
        while (i-- > 0) {
            if (cur[i] < n - k + i) {
                ++cur[i];
                for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
                more = true;
                break;
            }
        }
        if (!more || k == 0) break;
    }
    return out;
}

}  // namespace

std::size_t PolyAlgebra::index_of(const std::vector<std::size_t>& e) const {
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i] == e) return i;
    throw CheckError("IndexOutOfRange", "monomial outside the truncated basis");
}

PolyAlgebra poly_algebra(std::size_t vars, std::size_t top_weight) {
    if (vars == 0) throw CheckError("SchemaError", "need at least one variable");
    std::vector<std::vector<std::size_t>> exps;
    for (std::size_t w = 0; w <= top_weight; ++w) {
        std::vector<std::size_t> cur;
        std::vector<std::vector<std::size_t>> level;
        enumerate_monomials(vars, w, cur, level);
        for (auto& e : level) exps.push_back(std::move(e));
    }
    std::vector<std::string> labels;
    std::vector<std::size_t> weights;
    for (const auto& e : exps) {
        labels.push_back(monomial_label(e));
        std::size_t w = 0;
        for (std::size_t x : e) w += x;
        weights.push_back(w);
    }
    auto find = [&](const std::vector<std::size_t>& e) -> long {
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] == e) return long(i);
        return -1;
    };
    const std::size_t dim = exps.size();
    std::vector<std::vector<SparseVec>> structure(dim, std::vector<SparseVec>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            std::vector<std::size_t> sum(vars);
            for (std::size_t v = 0; v < vars; ++v) sum[v] = exps[i][v] + exps[j][v];
            long k = weights[i] + weights[j] <= top_weight ? find(sum) : -1;
            structure[i][j] = k >= 0 ? vec_unit(std::size_t(k)) : SparseVec{};
        }
    Algebra alg(std::move(labels), std::move(structure), vec_unit(0), std::move(weights));
    return PolyAlgebra{vars, top_weight, std::move(alg), std::move(exps)};
}

LinearAction linear_action(const PolyAlgebra& a, const FiniteGroup& g,
                           std::vector<SparseMatrix> space_matrices) {
    const std::size_t k = a.vars;
    if (space_matrices.size() != g.order())
        throw CheckError("SchemaError", "need one space matrix per group element");
    for (std::size_t x = 0; x < g.order(); ++x) {
        if (space_matrices[x].rows() != k || space_matrices[x].cols() != k)
            throw CheckError("SchemaError", "space matrix has wrong shape", g.name(x));
        // finite order
        SparseMatrix pow = SparseMatrix::identity(k);
        for (std::size_t i = 0; i < g.element_order(x); ++i) pow = space_matrices[x] * pow;
        if (pow != SparseMatrix::identity(k))
            throw CheckError("NotAnAutomorphism", "space matrix order does not divide the element order",
                             g.name(x));
    }
    for (std::size_t x = 0; x < g.order(); ++x)
        for (std::size_t y = 0; y < g.order(); ++y)
            if (space_matrices[x] * space_matrices[y] != space_matrices[g.mul(x, y)])
                throw CheckError("NotAHomomorphism", "space matrices do not compose",
                                 g.name(x) + "*" + g.name(y));

    // pullback of functions: alpha_g(x_i) = sum_j (M_g^{-1})[i][j] x_j
    std::vector<SparseMatrix> mats;
    for (std::size_t x = 0; x < g.order(); ++x) {
        SparseMatrix minv = inverse(space_matrices[x]);
        std::vector<Triplet> ts;
        for (std::size_t col = 0; col < a.algebra.dim(); ++col) {
            SparseVec acc = a.algebra.unit();
            for (std::size_t v = 0; v < k; ++v) {
                for (std::size_t rep = 0; rep < a.exponents[col][v]; ++rep) {
                    SparseVec lin;
                    for (std::size_t j = 0; j < k; ++j) {
                        Rational c = minv.at(v, j);
                        if (c != 0) {
                            std::vector<std::size_t> e(k, 0);
                            e[j] = 1;
                            lin.emplace_back(a.index_of(e), c);
                        }
                    }
                    std::sort(lin.begin(), lin.end());
                    acc = a.algebra.multiply(acc, lin);
                }
            }
            for (const auto& [r, v] : acc) ts.push_back({r, col, v});
        }
        mats.push_back(SparseMatrix::from_triplets(a.algebra.dim(), a.algebra.dim(), std::move(ts)));
    }
    GroupAction on_poly(a.algebra, g, std::move(mats));
    return LinearAction{std::move(space_matrices), std::move(on_poly)};
}

FixedForms::FixedForms(const PolyAlgebra& a, const SparseMatrix& space_phi) : a_(&a) {
    const std::size_t k = a.vars;
    if (space_phi.rows() != k || space_phi.cols() != k)
        throw CheckError("SchemaError", "space matrix has wrong shape");
    fixed_space_ = kernel(space_phi - SparseMatrix::identity(k));
    fixed_dim_ = fixed_space_.dim();
    tmons_.resize(a.top_weight + 1);
    for (std::size_t w = 0; w <= a.top_weight; ++w) {
        std::vector<std::size_t> cur;
        if (fixed_dim_ > 0) enumerate_monomials(fixed_dim_, w, cur, tmons_[w]);
        else if (w == 0) tmons_[0].push_back({});
    }
}

std::size_t FixedForms::tmon_index(const std::vector<std::size_t>& e) const {
    std::size_t w = 0;
    for (std::size_t x : e) w += x;
    for (std::size_t i = 0; i < tmons_[w].size(); ++i)
        if (tmons_[w][i] == e) return i;
    throw CheckError("IndexOutOfRange", "t-monomial outside the basis");
}

std::size_t FixedForms::form_dim(std::size_t w, std::size_t q) const {
    if (q > fixed_dim_ || q > w || w > a_->top_weight) return 0;
    const std::size_t mons = tmons_[w - q].size();
    return mons * combinations(fixed_dim_, q).size();
}

FixedForms::Form FixedForms::restrict_poly(std::size_t algebra_idx) const {
    const auto& exp = a_->exponents[algebra_idx];
    // substitute x_i = sum_a v_a[i] t_a and expand
    std::map<std::vector<std::size_t>, Rational> acc;
    acc[std::vector<std::size_t>(fixed_dim_, 0)] = Rational(1);
    for (std::size_t i = 0; i < a_->vars; ++i) {
        for (std::size_t rep = 0; rep < exp[i]; ++rep) {
            std::map<std::vector<std::size_t>, Rational> next;
            for (const auto& [mon, c] : acc) {
                for (std::size_t aa = 0; aa < fixed_dim_; ++aa) {
                    Rational coeff = vec_at(fixed_space_.basis()[aa], i);
                    if (coeff == 0) continue;
                    auto m2 = mon;
                    ++m2[aa];
                    auto [it, fresh] = next.emplace(std::move(m2), c * coeff);
                    if (!fresh) it->second += c * coeff;
                }
            }
            acc = std::move(next);
        }
    }
    Form out;
    for (const auto& [mon, c] : acc)
        if (c != 0) out.terms.push_back({{mon, {}}, c});
    return out;
}

FixedForms::Form FixedForms::wedge(const Form& x, const Form& y) const {
    std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, Rational> acc;
    for (const auto& [bx, cx] : x.terms)
        for (const auto& [by, cy] : y.terms) {
            // disjointness of the dt-subsets
            std::vector<std::size_t> merged;
            bool clash = false;
            int sign = 1;
            {
                std::vector<std::size_t> concat = bx.second;
                concat.insert(concat.end(), by.second.begin(), by.second.end());
                // insertion-sort, counting transpositions
                for (std::size_t i = 1; i < concat.size(); ++i)
                    for (std::size_t j = i; j > 0 && concat[j] < concat[j - 1]; --j) {
                        std::swap(concat[j], concat[j - 1]);
                        sign = -sign;
                    }
                for (std::size_t i = 1; i < concat.size(); ++i)
                    if (concat[i] == concat[i - 1]) clash = true;
                merged = std::move(concat);
            }
            if (clash) continue;
            std::vector<std::size_t> mon(fixed_dim_, 0);
            std::size_t w = merged.size();
            for (std::size_t i = 0; i < fixed_dim_; ++i) {
                mon[i] = bx.first[i] + by.first[i];
                w += mon[i];
            }
            if (w > a_->top_weight) continue;  // weight truncation
            Rational c = cx * cy * Rational(sign);
            auto key = std::make_pair(std::move(mon), std::move(merged));
            auto [it, fresh] = acc.emplace(std::move(key), c);
            if (!fresh) {
                it->second += c;
                if (it->second == 0) acc.erase(it);
            }
        }
    Form out;
    for (auto& [key, c] : acc)
        if (c != 0) out.terms.push_back({key, c});
    return out;
}

FixedForms::Form FixedForms::exterior_d(const Form& x) const {
    std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, Rational> acc;
    for (const auto& [b, c] : x.terms) {
        for (std::size_t aa = 0; aa < fixed_dim_; ++aa) {
            if (b.first[aa] == 0) continue;
            // d(t^mon) wedge dt_I: dt_a moves into sorted position in I
            bool clash = false;
            int sign = 1;
            std::vector<std::size_t> subset;
            for (std::size_t i : b.second) {
                if (i == aa) clash = true;
                if (i < aa) continue;
            }
            if (clash) continue;
            std::size_t before = 0;
            for (std::size_t i : b.second)
                if (i < aa) ++before;
            sign = before % 2 == 0 ? 1 : -1;
            subset = b.second;
            subset.insert(std::upper_bound(subset.begin(), subset.end(), aa), aa);
            auto mon = b.first;
            --mon[aa];
            Rational coeff = c * Rational(long(b.first[aa])) * Rational(sign);
            auto key = std::make_pair(std::move(mon), std::move(subset));
            auto [it, fresh] = acc.emplace(std::move(key), coeff);
            if (!fresh) {
                it->second += coeff;
                if (it->second == 0) acc.erase(it);
            }
        }
    }
    Form out;
    for (auto& [key, c] : acc)
        if (c != 0) out.terms.push_back({key, c});
    return out;
}

SparseVec FixedForms::form_coords(const Form& x, std::size_t w, std::size_t q) const {
    auto subs = combinations(fixed_dim_, q);
    const std::size_t nsubs = subs.size();
    SparseVec out;
    for (const auto& [b, c] : x.terms) {
        std::size_t mw = 0;
        for (std::size_t e : b.first) mw += e;
        if (b.second.size() != q || mw + q != w)
            throw CheckError("IndexOutOfRange", "form term outside the (weight, degree) block");
        std::size_t spos = nsubs;
        for (std::size_t i = 0; i < nsubs; ++i)
            if (subs[i] == b.second) {
                spos = i;
                break;
            }
        out.emplace_back(tmon_index(b.first) * nsubs + spos, c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

MixedComplex FixedForms::de_rham(std::size_t w, std::size_t n) const {
    std::vector<std::size_t> dims(n + 1, 0);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t q = 0; q <= n; ++q) {
        dims[q] = form_dim(w, q);
        auto subs = combinations(fixed_dim_, q);
        if (dims[q] > 0)
            for (const auto& mon : tmons_[w - q])
                for (const auto& sub : subs) {
                    std::string l = monomial_label(mon);
                    for (std::size_t i : sub) l += "*dt" + std::to_string(i + 1);
                    labels[q].push_back(l);
                }
    }
    GradedModule spaces(n, dims, std::move(labels));
    std::vector<SparseMatrix> b(n + 1), B(n + 1);
    for (std::size_t q = 0; q <= n; ++q) {
        b[q] = SparseMatrix(q >= 1 ? dims[q - 1] : 0, dims[q]);
        if (q + 1 <= n) {
            std::vector<Triplet> ts;
            auto subs = combinations(fixed_dim_, q);
            if (dims[q] > 0) {
                std::size_t col = 0;
                for (const auto& mon : tmons_[w - q])
                    for (const auto& sub : subs) {
                        Form f;
                        f.terms.push_back({{mon, sub}, Rational(1)});
                        Form df = exterior_d(f);
                        if (!df.terms.empty())
                            for (const auto& [r, v] : form_coords(df, w, q + 1))
                                ts.push_back({r, col, v});
                        ++col;
                    }
            }
            B[q] = SparseMatrix::from_triplets(dims[q + 1], dims[q], std::move(ts));
        } else {
            B[q] = SparseMatrix(0, dims[q]);
        }
    }
    return MixedComplex(std::move(spaces), std::move(b), std::move(B));
}

std::vector<SparseMatrix> FixedForms::form_action(const SparseMatrix& space_g, std::size_t w,
                                                  std::size_t n) const {
    // restricted matrix N on the fixed subspace, then pullback P = (N^{-1})^T
    std::vector<Triplet> nts;
    for (std::size_t aa = 0; aa < fixed_dim_; ++aa) {
        std::vector<Rational> coeffs;
        SparseVec img = space_g.apply(fixed_space_.basis()[aa]);
        SparseVec rem = fixed_space_.reduce(img, &coeffs);
        if (!vec_is_zero(rem))
            throw CheckError("NotAnAutomorphism", "space matrix does not preserve the fixed subspace");
        for (std::size_t b = 0; b < coeffs.size(); ++b)
            if (coeffs[b] != 0) nts.push_back({b, aa, coeffs[b]});
    }
    SparseMatrix nmat = SparseMatrix::from_triplets(fixed_dim_, fixed_dim_, std::move(nts));
    SparseMatrix minv = inverse(nmat);

    std::vector<SparseMatrix> out(n + 1);
    for (std::size_t q = 0; q <= n; ++q) {
        const std::size_t dim = form_dim(w, q);
        std::vector<Triplet> ts;
        if (dim > 0) {
            auto subs = combinations(fixed_dim_, q);
            std::size_t col = 0;
            for (const auto& mon : tmons_[w - q]) {
                for (const auto& sub : subs) {
                    // image form: product of variable images and dt images
                    Form acc;
                    acc.terms.push_back({{std::vector<std::size_t>(fixed_dim_, 0), {}}, Rational(1)});
                    for (std::size_t aa = 0; aa < fixed_dim_; ++aa)
                        for (std::size_t rep = 0; rep < mon[aa]; ++rep) {
                            Form lin;
                            for (std::size_t b = 0; b < fixed_dim_; ++b) {
                                Rational cc = minv.at(aa, b);
                                if (cc == 0) continue;
                                std::vector<std::size_t> m2(fixed_dim_, 0);
                                m2[b] = 1;
                                lin.terms.push_back({{m2, {}}, cc});
                            }
                            acc = wedge(acc, lin);
                        }
                    for (std::size_t aa : sub) {
                        Form lin;
                        for (std::size_t b = 0; b < fixed_dim_; ++b) {
                            Rational cc = minv.at(aa, b);
                            if (cc == 0) continue;
                            lin.terms.push_back(
                                {{std::vector<std::size_t>(fixed_dim_, 0), {b}}, cc});
                        }
                        acc = wedge(acc, lin);
                    }
                    for (const auto& [r, v] : form_coords(acc, w, q)) ts.push_back({r, col, v});
                    ++col;
                }
            }
        }
        out[q] = SparseMatrix::from_triplets(dim, dim, std::move(ts));
    }
    return out;
}

GradedMap FixedForms::hkr_map(const TwistedAlgebraCyclic& xa) const {
    const std::size_t n = xa.module().spaces().truncation;
    const std::size_t w = xa.weight();
    MixedComplex omega = de_rham(w, n);
    std::vector<SparseMatrix> mats(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> ts;
        Rational fact(1);
        for (std::size_t i = 2; i <= m; ++i) fact *= Rational(long(i));
        for (std::size_t col = 0; col < xa.tuples(m).size(); ++col) {
            const auto& tup = xa.tuples(m)[col];
            Form acc = restrict_poly(tup[0]);
            for (std::size_t kk = 1; kk <= m && !acc.terms.empty(); ++kk)
                acc = wedge(acc, exterior_d(restrict_poly(tup[kk])));
            if (acc.terms.empty()) continue;
            for (auto& [key, c] : acc.terms) c /= fact;
            for (const auto& [r, v] : form_coords(acc, w, m)) ts.push_back({r, col, v});
        }
        mats[m] = SparseMatrix::from_triplets(omega.spaces.dim(m), xa.module().spaces().dim(m),
                                              std::move(ts));
    }
    // parachain-map property: alpha b = 0 and alpha B = d alpha
    ParachainComplex pc = derive_parachain(xa.module());
    for (std::size_t m = 1; m <= n; ++m) {
        SparseMatrix lhs = mats[m - 1] * pc.b[m];
        std::size_t r, c;
        if (!lhs.is_zero()) {
            lhs.first_difference(SparseMatrix(lhs.rows(), lhs.cols()), r, c);
            throw CheckError("NotAParachainMap", "alpha does not kill the b-differential",
                             xa.module().spaces().label(m, c));
        }
    }
    for (std::size_t m = 0; m + 1 <= n; ++m) {
        SparseMatrix lhs = mats[m + 1] * pc.B[m];
        SparseMatrix rhs = omega.B[m] * mats[m];
        std::size_t r, c;
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.first_difference(rhs, r, c))
            throw CheckError("NotAParachainMap", "alpha does not intertwine B with d",
                             xa.module().spaces().label(m, c));
    }
    return GradedMap(0, xa.module().spaces(), omega.spaces, std::move(mats));
}

std::vector<VarietiesReport> varieties_pipeline(const PolyAlgebra& a, const FiniteGroup& g,
                                                const LinearAction& act, std::size_t phi,
                                                std::size_t n) {
    ConjugacyData cd = conjugacy_analysis(g, phi);
    const FiniteGroup& gp = cd.centralizer;
    FixedForms forms(a, act.space[phi]);

    CrossedProduct cp = crossed_product(a.algebra, g, act.on_polynomials);
    std::vector<VarietiesReport> out;
    for (std::size_t w = 0; w <= a.top_weight; ++w) {
        VarietiesReport rep;
        rep.weight = w;
        {
            std::size_t rr = phi;
            for (std::size_t x = 0; x < g.order(); ++x)
                rr = std::min(rr, g.mul(g.mul(x, phi), g.inv(x)));
            rep.class_rep = rr;
        }

        // twisted HKR certificate on the weight-w piece
        TwistedAlgebraCyclic xa(a.algebra, act.on_polynomials.matrix(phi), n, w);
        GradedMap alpha = forms.hkr_map(xa);
        rep.checks.emplace_back("hkr_parachain_map", true);  // throws otherwise
        ChainComplex bcx = derive_parachain(xa.module()).b_complex();
        MixedComplex omega = forms.de_rham(w, n);
        rep.hkr_quasi_iso = true;
        for (std::size_t deg = 0; deg + 1 <= n; ++deg) {
            Subspace z = deg == 0 ? Subspace::full(bcx.spaces.dim(0)) : kernel(bcx.d[deg]);
            Subspace bd = image(bcx.d[deg + 1]);
            SparseMatrix ind = induced_map(alpha.at(deg), z, bd,
                                           Subspace::full(omega.spaces.dim(deg)),
                                           Subspace::zero(omega.spaces.dim(deg)));
            if (ind.rows() != ind.cols() || rank(ind) != ind.rows()) rep.hkr_quasi_iso = false;
        }
        rep.checks.emplace_back("hkr_quasi_iso_weightwise", rep.hkr_quasi_iso);

        // phi acts trivially on its own fixed set
        auto phi_forms = forms.form_action(act.space[phi], w, n);
        bool phi_trivial = true;
        for (std::size_t q = 0; q <= n; ++q)
            if (phi_forms[q] != SparseMatrix::identity(phi_forms[q].rows())) phi_trivial = false;
        rep.checks.emplace_back("phi_trivial_on_fixed_forms", phi_trivial);

        // flat model Tot(C-flat(Gamma_phi, Omega_w))
        std::vector<std::vector<SparseMatrix>> gp_forms(gp.order());
        for (std::size_t x = 0; x < gp.order(); ++x)
            gp_forms[x] = forms.form_action(act.space[cd.embedding[x]], w, n);
        EquivariantMixed em(omega, gp, gp_forms);
        GroupChainTensor tensor(gp, omega.spaces, gp_forms, n);
        BiFamily hB(n + 1, std::vector<SparseMatrix>(n + 1));
        for (std::size_t p = 0; p <= n; ++p)
            for (std::size_t q = 0; q <= n; ++q)
                hB[p][q] = SparseMatrix(p + 1 <= n ? tensor.spaces().dim(p + 1, q) : 0,
                                        tensor.spaces().dim(p, q));
        ParachainBicomplex flat(tensor.spaces(), tensor.partial(), std::move(hB),
                                tensor.lift(omega.b, -1), tensor.lift(omega.B, +1));
        rep.flat_model_hc = hc(totalize_mixed(flat).complex).dims();

        // invariant model Omega^{Gamma_phi}
        std::vector<std::vector<SparseMatrix>> inv_fam;
        for (std::size_t x = 0; x < gp.order(); ++x) inv_fam.push_back(gp_forms[x]);
        InvariantComplex oinv =
            invariants_projector(ParachainComplex::from_mixed(omega), inv_fam);
        rep.invariant_model_hc = hc(oinv.complex).dims();

        // direct side
        TwistedAlgebraCyclic full(cp.algebra, SparseMatrix::identity(cp.algebra.dim()), n, w);
        auto comps = split_by_class(cp, g, full);
        const ClassComponent& comp = component_of(comps, g, phi);
        rep.direct_hc = hc(derive_parachain(comp.module).as_mixed()).dims();

        rep.hc_equal = true;
        for (std::size_t deg = 0; deg + 2 <= n; ++deg) {
            if (rep.direct_hc[deg] != rep.flat_model_hc[deg]) rep.hc_equal = false;
            if (rep.direct_hc[deg] != rep.invariant_model_hc[deg]) rep.hc_equal = false;
        }
        rep.checks.emplace_back("hc_endpoints_equal", rep.hc_equal);
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace cychom
