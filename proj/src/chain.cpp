#include "cychom/chain.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

namespace detail {

void expect_equal(const SparseMatrix& lhs, const SparseMatrix& rhs, const GradedModule& spaces,
                  std::size_t m, const std::string& identity) {
    std::size_t r = 0, c = 0;
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        throw CheckError("IdentityViolation", identity + " has mismatched shapes at degree " +
                                                  std::to_string(m));
    if (lhs.first_difference(rhs, r, c))
        throw CheckError("IdentityViolation", identity + " fails at degree " + std::to_string(m),
                         c < spaces.dim(m) ? spaces.label(m, c) : "column " + std::to_string(c));
}

void expect_invertible(const SparseMatrix& t, const GradedModule& spaces, std::size_t m,
                       const std::string& what) {
    if (t.rows() != t.cols() || t.rows() != spaces.dim(m))
        throw CheckError("IdentityViolation", what + " has wrong shape at degree " + std::to_string(m));
    if (rank(t) != t.rows())
        throw CheckError("IdentityViolation", what + " is singular at degree " + std::to_string(m));
}

void expect_family_shape(const std::vector<SparseMatrix>& mats, const GradedModule& spaces,
                         int degree, const std::string& what) {
    const std::size_t n = spaces.truncation;
    if (mats.size() != n + 1)
        throw CheckError("IdentityViolation", what + " family has wrong length");
    for (std::size_t m = 0; m <= n; ++m) {
        const int tgt = int(m) + degree;
        const std::size_t want_rows = (tgt >= 0 && std::size_t(tgt) <= n) ? spaces.dim(tgt) : 0;
        if (mats[m].rows() != want_rows || mats[m].cols() != spaces.dim(m))
            throw CheckError("IdentityViolation", what + " has wrong shape at degree " + std::to_string(m));
    }
}

}  // namespace detail

GradedModule::GradedModule(std::size_t n, std::vector<std::size_t> dims_,
                           std::vector<std::vector<std::string>> labels_)
    : truncation(n), dims(std::move(dims_)), labels(std::move(labels_)) {
    if (dims.size() != n + 1 || labels.size() != n + 1)
        throw CheckError("IdentityViolation", "graded module has wrong number of degrees");
    for (std::size_t m = 0; m <= n; ++m)
        if (labels[m].size() != dims[m])
            throw CheckError("IdentityViolation",
                             "label count mismatch at degree " + std::to_string(m));
}

GradedModule GradedModule::numbered(std::size_t n, const std::vector<std::size_t>& dims,
                                    const std::string& prefix) {
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t m = 0; m <= n; ++m)
        for (std::size_t i = 0; i < dims[m]; ++i)
            labels[m].push_back(prefix + "." + std::to_string(m) + "." + std::to_string(i));
    return GradedModule(n, dims, std::move(labels));
}

GradedMap::GradedMap(int degree_, GradedModule src_, GradedModule dst_,
                     std::vector<SparseMatrix> mats_)
    : degree(degree_), src(std::move(src_)), dst(std::move(dst_)), mats(std::move(mats_)) {
    if (mats.size() != src.truncation + 1)
        throw CheckError("IdentityViolation", "graded map family has wrong length");
    for (std::size_t m = 0; m <= src.truncation; ++m) {
        const int tgt = int(m) + degree;
        const std::size_t want_rows =
            (tgt >= 0 && std::size_t(tgt) <= dst.truncation) ? dst.dim(tgt) : 0;
        if (mats[m].rows() != want_rows || mats[m].cols() != src.dim(m))
            throw CheckError("IdentityViolation",
                             "graded map has wrong shape at degree " + std::to_string(m));
    }
}

ChainComplex::ChainComplex(GradedModule spaces_, std::vector<SparseMatrix> d_)
    : spaces(std::move(spaces_)), d(std::move(d_)) {
    detail::expect_family_shape(d, spaces, -1, "differential");
    for (std::size_t m = 2; m <= spaces.truncation; ++m)
        detail::expect_equal(d[m - 1] * d[m], SparseMatrix::zero(spaces.dim(m - 2), spaces.dim(m)),
                             spaces, m, "d^2 = 0");
}

std::vector<std::size_t> HomologyTable::dims() const {
    std::vector<std::size_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.dim);
    return out;
}

namespace {

struct CycleSpaces {
    Subspace cycles;
    Subspace boundaries;
};

CycleSpaces cycle_spaces(const ChainComplex& c, std::size_t n) {
    Subspace z = (n == 0) ? Subspace::full(c.spaces.dim(0)) : kernel(c.d[n]);
    Subspace b = image(c.d[n + 1]);
    return {std::move(z), std::move(b)};
}

}  // namespace

HomologyTable homology(const ChainComplex& c) {
    HomologyTable t;
    const std::size_t n = c.spaces.truncation;
    t.reliable_to = n == 0 ? 0 : n - 1;
    for (std::size_t deg = 0; deg + 1 <= n; ++deg) {
        auto [z, b] = cycle_spaces(c, deg);
        Quotient q(std::move(z), std::move(b));
        HomologyEntry e;
        e.degree = deg;
        e.dim = q.dim();
        for (std::size_t i = 0; i < q.dim(); ++i) e.representatives.push_back(q.representative(i));
        t.entries.push_back(std::move(e));
    }
    return t;
}

MixedComplex::MixedComplex(GradedModule spaces_, std::vector<SparseMatrix> b_,
                           std::vector<SparseMatrix> B_)
    : spaces(std::move(spaces_)), b(std::move(b_)), B(std::move(B_)) {
    detail::expect_family_shape(b, spaces, -1, "b");
    detail::expect_family_shape(B, spaces, +1, "B");
    const std::size_t n = spaces.truncation;
    for (std::size_t m = 2; m <= n; ++m)
        detail::expect_equal(b[m - 1] * b[m], SparseMatrix::zero(spaces.dim(m - 2), spaces.dim(m)),
                             spaces, m, "b^2 = 0");
    for (std::size_t m = 0; m + 2 <= n; ++m)
        detail::expect_equal(B[m + 1] * B[m], SparseMatrix::zero(spaces.dim(m + 2), spaces.dim(m)),
                             spaces, m, "B^2 = 0");
    for (std::size_t m = 0; m + 1 <= n; ++m) {
        SparseMatrix anti = b[m + 1] * B[m];
        if (m >= 1) anti = anti + B[m - 1] * b[m];
        detail::expect_equal(anti, SparseMatrix::zero(spaces.dim(m), spaces.dim(m)), spaces, m,
                             "bB + Bb = 0");
    }
}

ChainComplex MixedComplex::b_complex() const { return ChainComplex(spaces, b); }

ParachainComplex::ParachainComplex(GradedModule spaces_, std::vector<SparseMatrix> b_,
                                   std::vector<SparseMatrix> B_, std::vector<SparseMatrix> T_)
    : spaces(std::move(spaces_)), b(std::move(b_)), B(std::move(B_)), T(std::move(T_)) {
    detail::expect_family_shape(b, spaces, -1, "b");
    detail::expect_family_shape(B, spaces, +1, "B");
    detail::expect_family_shape(T, spaces, 0, "T");
    const std::size_t n = spaces.truncation;
    for (std::size_t m = 0; m <= n; ++m) detail::expect_invertible(T[m], spaces, m, "T");
    for (std::size_t m = 2; m <= n; ++m)
        detail::expect_equal(b[m - 1] * b[m], SparseMatrix::zero(spaces.dim(m - 2), spaces.dim(m)),
                             spaces, m, "b^2 = 0");
    for (std::size_t m = 0; m + 2 <= n; ++m)
        detail::expect_equal(B[m + 1] * B[m], SparseMatrix::zero(spaces.dim(m + 2), spaces.dim(m)),
                             spaces, m, "B^2 = 0");
    for (std::size_t m = 0; m + 1 <= n; ++m) {
        SparseMatrix anti = b[m + 1] * B[m];
        if (m >= 1) anti = anti + B[m - 1] * b[m];
        detail::expect_equal(anti, SparseMatrix::identity(spaces.dim(m)) - T[m], spaces, m,
                             "bB + Bb = 1 - T");
    }
    for (std::size_t m = 1; m <= n; ++m)
        detail::expect_equal(T[m - 1] * b[m], b[m] * T[m], spaces, m, "Tb = bT");
    for (std::size_t m = 0; m + 1 <= n; ++m)
        detail::expect_equal(T[m + 1] * B[m], B[m] * T[m], spaces, m, "TB = BT");
}

ParachainComplex ParachainComplex::from_mixed(const MixedComplex& m) {
    std::vector<SparseMatrix> t;
    for (std::size_t deg = 0; deg <= m.spaces.truncation; ++deg)
        t.push_back(SparseMatrix::identity(m.spaces.dim(deg)));
    return ParachainComplex(m.spaces, m.b, m.B, std::move(t));
}

bool ParachainComplex::is_mixed() const {
    for (std::size_t m = 0; m <= spaces.truncation; ++m)
        if (T[m] != SparseMatrix::identity(spaces.dim(m))) return false;
    return true;
}

MixedComplex ParachainComplex::as_mixed() const {
    if (!is_mixed())
        throw CheckError("IdentityViolation", "parachain complex has T != 1, not a mixed complex");
    return MixedComplex(spaces, b, B);
}

ChainComplex ParachainComplex::b_complex() const { return ChainComplex(spaces, b); }

ParaSModule::ParaSModule(GradedModule spaces_, std::vector<SparseMatrix> d_,
                         std::vector<SparseMatrix> S_, std::vector<SparseMatrix> T_)
    : spaces(std::move(spaces_)), d(std::move(d_)), S(std::move(S_)), T(std::move(T_)) {
    detail::expect_family_shape(d, spaces, -1, "d");
    detail::expect_family_shape(S, spaces, -2, "S");
    detail::expect_family_shape(T, spaces, 0, "T");
    const std::size_t n = spaces.truncation;
    for (std::size_t m = 3; m <= n; ++m)
        detail::expect_equal(d[m - 2] * S[m], S[m - 1] * d[m], spaces, m, "dS = Sd");
    for (std::size_t m = 1; m <= n; ++m)
        detail::expect_equal(T[m - 1] * d[m], d[m] * T[m], spaces, m, "dT = Td");
    for (std::size_t m = 2; m <= n; ++m)
        detail::expect_equal(T[m - 2] * S[m], S[m] * T[m], spaces, m, "ST = TS");
    for (std::size_t m = 2; m <= n; ++m)
        detail::expect_equal(d[m - 1] * d[m], S[m] - T[m - 2] * S[m], spaces, m, "d^2 = (1 - T)S");
}

bool ParaSModule::is_s_module() const {
    for (std::size_t m = 0; m <= spaces.truncation; ++m)
        if (T[m] != SparseMatrix::identity(spaces.dim(m))) return false;
    return true;
}

ChainComplex ParaSModule::chain_view() const {
    if (!is_s_module())
        throw CheckError("IdentityViolation", "para-S-module with T != 1 has no chain complex view");
    return ChainComplex(spaces, d);
}

CyclicComplex cyclic_complex(const ParachainComplex& c) {
    const std::size_t n = c.spaces.truncation;
    if (n < 1) throw CheckError("IdentityViolation", "cyclic complex needs truncation >= 1");
    std::vector<std::size_t> dims(n + 1, 0);
    std::vector<std::vector<std::string>> labels(n + 1);
    std::vector<std::vector<std::size_t>> offsets(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        for (std::size_t j = 0; 2 * j <= m; ++j) {
            offsets[m].push_back(dims[m]);
            const std::size_t base = m - 2 * j;
            dims[m] += c.spaces.dim(base);
            for (std::size_t i = 0; i < c.spaces.dim(base); ++i)
                labels[m].push_back(j == 0 ? c.spaces.label(base, i)
                                           : "S^" + std::to_string(j) + "[" +
                                                 c.spaces.label(base, i) + "]");
        }
    }
    GradedModule spaces(n, dims, std::move(labels));

    std::vector<SparseMatrix> d(n + 1), S(n + 1), T(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st, tt;
        for (std::size_t j = 0; 2 * j <= m; ++j) {
            const std::size_t base = m - 2 * j;
            // d component j of degree m-1 receives b x_j + B x_{j+1}
            if (m >= 1) {
                if (base >= 1)
                    for (const auto& e : c.b[base].entries())
                        dt.push_back({offsets[m - 1][j] + e.row, offsets[m][j] + e.col, e.val});
                if (2 * (j + 1) <= m) {
                    const std::size_t lower = m - 2 * (j + 1);
                    for (const auto& e : c.B[lower].entries())
                        dt.push_back({offsets[m - 1][j] + e.row, offsets[m][j + 1] + e.col, e.val});
                }
            }
            // S drops the top summand: block j+1 of degree m -> block j of degree m-2
            if (m >= 2 && 2 * (j + 1) <= m)
                for (std::size_t i = 0; i < c.spaces.dim(m - 2 * (j + 1)); ++i)
                    st.push_back({offsets[m - 2][j] + i, offsets[m][j + 1] + i, Rational(1)});
            for (const auto& e : c.T[base].entries())
                tt.push_back({offsets[m][j] + e.row, offsets[m][j] + e.col, e.val});
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? dims[m - 1] : 0, dims[m], std::move(dt));
        S[m] = SparseMatrix::from_triplets(m >= 2 ? dims[m - 2] : 0, dims[m], std::move(st));
        T[m] = SparseMatrix::from_triplets(dims[m], dims[m], std::move(tt));
    }
    CyclicComplex out{ParaSModule(std::move(spaces), std::move(d), std::move(S), std::move(T)),
                      std::move(offsets)};
    return out;
}

CyclicComplex cyclic_complex(const MixedComplex& c) {
    return cyclic_complex(ParachainComplex::from_mixed(c));
}

HomologyTable hc(const MixedComplex& c) {
    return homology(cyclic_complex(c).module.chain_view());
}

SStabilization s_stabilization(const ParaSModule& p) {
    if (!p.is_s_module())
        throw CheckError("IdentityViolation", "s_stabilization requires a genuine S-module (T = 1)");
    ChainComplex c = p.chain_view();
    SStabilization out{homology(c), {}, {}};
    const std::size_t n = p.spaces.truncation;
    if (n < 1) return out;
    const std::size_t reliable = n - 1;

    std::vector<CycleSpaces> zs;
    for (std::size_t deg = 0; deg <= reliable; ++deg) zs.push_back(cycle_spaces(c, deg));
    for (std::size_t deg = 0; deg + 2 <= reliable; ++deg)
        out.s_on_homology.push_back(induced_map(p.S[deg + 2], zs[deg + 2].cycles,
                                                zs[deg + 2].boundaries, zs[deg].cycles,
                                                zs[deg].boundaries));

    for (int parity = 0; parity < 2; ++parity) {
        std::vector<std::size_t> applicable;
        for (std::size_t deg = parity; deg + 2 <= reliable; deg += 2) applicable.push_back(deg);
        HpEstimate& est = out.hp[parity];
        if (applicable.size() < 2) {
            est.stabilized = false;
            est.note = "inconclusive at truncation N = " + std::to_string(n);
            est.dim = 0;
            continue;
        }
        auto iso = [&](std::size_t deg) {
            const SparseMatrix& s = out.s_on_homology[deg];
            return s.rows() == s.cols() && rank(s) == s.rows();
        };
        std::size_t top = applicable[applicable.size() - 1];
        std::size_t prev = applicable[applicable.size() - 2];
        if (iso(top) && iso(prev)) {
            est.stabilized = true;
            est.dim = out.table.entries[top].dim;
            est.note = "S iso on H_" + std::to_string(top + 2) + "->H_" + std::to_string(top) +
                       " and H_" + std::to_string(prev + 2) + "->H_" + std::to_string(prev);
        } else {
            est.stabilized = false;
            est.dim = 0;
            est.note = "inconclusive at truncation N = " + std::to_string(n);
        }
    }
    return out;
}

}  // namespace cychom
