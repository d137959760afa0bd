#include "cychom/simplicial.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

std::string deg_witness(const GradedModule& spaces, std::size_t m, std::size_t col) {
    return col < spaces.dim(m) ? spaces.label(m, col) : "column " + std::to_string(col);
}

void expect(const SparseMatrix& lhs, const SparseMatrix& rhs, const GradedModule& spaces,
            std::size_t m, const std::string& identity) {
    std::size_t r = 0, c = 0;
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        throw CheckError("IdentityViolation",
                         identity + " has mismatched shapes at degree " + std::to_string(m));
    if (lhs.first_difference(rhs, r, c))
        throw CheckError("IdentityViolation", identity + " fails at degree " + std::to_string(m),
                         deg_witness(spaces, m, c));
}

}  // namespace

ParacyclicModule::ParacyclicModule(GradedModule spaces, std::vector<SparseMatrix> d,
                                   std::vector<SparseMatrix> s, std::vector<SparseMatrix> t)
    : spaces_(std::move(spaces)), d_(std::move(d)), s_(std::move(s)), t_(std::move(t)) {
    detail::expect_family_shape(d_, spaces_, -1, "end face d");
    detail::expect_family_shape(s_, spaces_, +1, "extra degeneracy s");
    detail::expect_family_shape(t_, spaces_, 0, "cyclic operator t");
    const std::size_t n = spaces_.truncation;
    tinv_.reserve(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        detail::expect_invertible(t_[m], spaces_, m, "t");
        tinv_.push_back(inverse(t_[m]));
    }
    for (std::size_t m = 0; m + 1 <= n; ++m)
        expect(d_[m + 1] * s_[m], t_[m], spaces_, m, "t = ds");

    // Simplicial identities among the derived faces and degeneracies.
    for (std::size_t m = 2; m <= n; ++m)
        for (std::size_t j = 1; j <= m; ++j)
            for (std::size_t i = 0; i < j; ++i)
                expect(face(m - 1, i) * face(m, j), face(m - 1, j - 1) * face(m, i), spaces_, m,
                       "d_i d_j = d_{j-1} d_i (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
    for (std::size_t m = 0; m + 2 <= n; ++m)
        for (std::size_t j = 0; j <= m; ++j)
            for (std::size_t i = 0; i <= j; ++i)
                expect(degeneracy(m + 1, i) * degeneracy(m, j),
                       degeneracy(m + 1, j + 1) * degeneracy(m, i), spaces_, m,
                       "s_i s_j = s_{j+1} s_i (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
    for (std::size_t m = 0; m + 1 <= n; ++m) {
        for (std::size_t j = 0; j <= m; ++j) {
            for (std::size_t i = 0; i <= m + 1; ++i) {
                SparseMatrix lhs = face(m + 1, i) * degeneracy(m, j);
                if (i == j || i == j + 1) {
                    expect(lhs, SparseMatrix::identity(spaces_.dim(m)), spaces_, m,
                           "d_i s_j = 1 (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                } else if (i < j) {
                    if (m == 0) continue;
                    expect(lhs, degeneracy(m - 1, j - 1) * face(m, i), spaces_, m,
                           "d_i s_j = s_{j-1} d_i (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                } else {
                    if (m == 0) continue;
                    expect(lhs, degeneracy(m - 1, j) * face(m, i - 1), spaces_, m,
                           "d_i s_j = s_j d_{i-1} (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                }
            }
        }
    }

    cyclic_ = true;
    for (std::size_t m = 0; m <= n; ++m)
        if (cyclic_power(m, long(m) + 1) != SparseMatrix::identity(spaces_.dim(m))) {
            cyclic_ = false;
            break;
        }
}

SparseMatrix ParacyclicModule::cyclic_power(std::size_t m, long k) const {
    SparseMatrix acc = SparseMatrix::identity(spaces_.dim(m));
    const SparseMatrix& step = k >= 0 ? t_[m] : tinv_[m];
    for (long i = 0; i < (k >= 0 ? k : -k); ++i) acc = step * acc;
    return acc;
}

SparseMatrix ParacyclicModule::face(std::size_t m, std::size_t j) const {
    if (m < 1 || j > m) throw CheckError("IndexOutOfRange", "face index");
    // d_j = t^j d t^{-(j+1)}
    return cyclic_power(m - 1, long(j)) * d_[m] * cyclic_power(m, -long(j) - 1);
}

SparseMatrix ParacyclicModule::degeneracy(std::size_t m, std::size_t j) const {
    if (m + 1 > spaces_.truncation || j > m) throw CheckError("IndexOutOfRange", "degeneracy index");
    // s_j = t^{j+1} s t^{-(j+1)}
    return cyclic_power(m + 1, long(j) + 1) * s_[m] * cyclic_power(m, -long(j) - 1);
}

bool ParacyclicModule::has_twist(const std::vector<SparseMatrix>& action) const {
    for (std::size_t m = 0; m <= spaces_.truncation; ++m)
        if (cyclic_power(m, long(m) + 1) != action[m]) return false;
    return true;
}

namespace {

SparseMatrix simplicial_b(const ParacyclicModule& p, std::size_t m) {
    SparseMatrix b(m >= 1 ? p.spaces().dim(m - 1) : 0, p.spaces().dim(m));
    if (m < 1) return b;
    for (std::size_t j = 0; j <= m; ++j) {
        SparseMatrix f = p.face(m, j);
        b = (j % 2 == 0) ? b + f : b - f;
    }
    return b;
}

SparseMatrix norm_op(const ParacyclicModule& p, std::size_t m) {
    // N = 1 + tau + ... + tau^m with tau = (-1)^m t
    const SparseMatrix tau = m % 2 == 0 ? p.cyclic_op(m) : p.cyclic_op(m).scaled(Rational(-1));
    SparseMatrix acc = SparseMatrix::identity(p.spaces().dim(m));
    SparseMatrix out = acc;
    for (std::size_t i = 1; i <= m; ++i) {
        acc = tau * acc;
        out = out + acc;
    }
    return out;
}

}  // namespace

ParachainComplex derive_parachain(const ParacyclicModule& p) {
    const std::size_t n = p.spaces().truncation;
    std::vector<SparseMatrix> b(n + 1), big_b(n + 1), t_pow(n + 1);
    for (std::size_t m = 0; m <= n; ++m) b[m] = simplicial_b(p, m);
    for (std::size_t m = 0; m <= n; ++m) {
        if (m + 1 <= n) {
            SparseMatrix s_part;
            if (p.is_cyclic()) {
                s_part = p.extra_degeneracy(m);
            } else {
                // s' = s b' s with b' the sum of all faces but the last
                SparseMatrix bprime = b[m + 1];
                SparseMatrix last = p.face(m + 1, m + 1);
                bprime = (m + 1) % 2 == 0 ? bprime - last : bprime + last;
                s_part = p.extra_degeneracy(m) * bprime * p.extra_degeneracy(m);
            }
            const SparseMatrix tau_up = (m + 1) % 2 == 0
                                            ? p.cyclic_op(m + 1)
                                            : p.cyclic_op(m + 1).scaled(Rational(-1));
            big_b[m] = (SparseMatrix::identity(p.spaces().dim(m + 1)) - tau_up) * s_part * norm_op(p, m);
        } else {
            big_b[m] = SparseMatrix(0, p.spaces().dim(m));
        }
        t_pow[m] = p.cyclic_power(m, long(m) + 1);
    }
    // T = 1 - (bB + Bb) must agree with t^{m+1} wherever both sides are formed.
    for (std::size_t m = 0; m + 1 <= n; ++m) {
        SparseMatrix anti = b[m + 1] * big_b[m];
        if (m >= 1) anti = anti + big_b[m - 1] * b[m];
        expect(SparseMatrix::identity(p.spaces().dim(m)) - anti, t_pow[m], p.spaces(), m,
               "1 - (bB + Bb) = t^{m+1}");
    }
    return ParachainComplex(p.spaces(), std::move(b), std::move(big_b), std::move(t_pow));
}

ChainComplex lambda_complex(const ParacyclicModule& p) {
    const std::size_t n = p.spaces().truncation;
    for (std::size_t m = 0; m <= n; ++m)
        if (p.cyclic_power(m, long(m) + 1) != SparseMatrix::identity(p.spaces().dim(m)))
            throw CheckError("NotCyclic", "t^{m+1} != 1 at degree " + std::to_string(m));

    std::vector<Subspace> ranges;   // ran(1 - tau) per degree
    std::vector<Quotient> quots;
    std::vector<std::size_t> dims(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const SparseMatrix tau =
            m % 2 == 0 ? p.cyclic_op(m) : p.cyclic_op(m).scaled(Rational(-1));
        ranges.push_back(image(SparseMatrix::identity(p.spaces().dim(m)) - tau));
        quots.emplace_back(Subspace::full(p.spaces().dim(m)), ranges.back());
        dims[m] = quots.back().dim();
    }
    GradedModule spaces = GradedModule::numbered(n, dims, "lam");
    std::vector<SparseMatrix> d(n + 1);
    d[0] = SparseMatrix(0, dims[0]);
    for (std::size_t m = 1; m <= n; ++m)
        d[m] = induced_map(simplicial_b(p, m), Subspace::full(p.spaces().dim(m)), ranges[m],
                           Subspace::full(p.spaces().dim(m - 1)), ranges[m - 1]);
    return ChainComplex(std::move(spaces), std::move(d));
}

namespace {

void expect_bifamily_shape(const BiFamily& f, const BiGradedModule& spaces, int dp, int dq,
                           const std::string& what) {
    const std::size_t n = spaces.truncation;
    if (f.size() != n + 1) throw CheckError("IdentityViolation", what + " family has wrong length");
    for (std::size_t p = 0; p <= n; ++p) {
        if (f[p].size() != n + 1)
            throw CheckError("IdentityViolation", what + " family has wrong length");
        for (std::size_t q = 0; q <= n; ++q) {
            const int tp = int(p) + dp, tq = int(q) + dq;
            const bool inside = tp >= 0 && tq >= 0 && std::size_t(tp) <= n && std::size_t(tq) <= n;
            const std::size_t want_rows = inside ? spaces.dim(tp, tq) : 0;
            if (f[p][q].rows() != want_rows || f[p][q].cols() != spaces.dim(p, q))
                throw CheckError("IdentityViolation", what + " has wrong shape at (" +
                                                          std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }
}

void expect_commute(const BiFamily& h, int hp, int hq, const BiFamily& v, int vp, int vq,
                    const BiGradedModule& spaces, const std::string& what) {
    const std::size_t n = spaces.truncation;
    for (std::size_t p = 0; p <= n; ++p) {
        for (std::size_t q = 0; q <= n; ++q) {
            const int mp = int(p) + hp + vp, mq = int(q) + hq + vq;
            if (mp < 0 || mq < 0 || std::size_t(mp) > n || std::size_t(mq) > n) continue;
            const int ap = int(p) + vp, aq = int(q) + vq;  // after v
            const int bp = int(p) + hp, bq = int(q) + hq;  // after h
            if (ap < 0 || aq < 0 || std::size_t(ap) > n || std::size_t(aq) > n) continue;
            if (bp < 0 || bq < 0 || std::size_t(bp) > n || std::size_t(bq) > n) continue;
            SparseMatrix lhs = h[ap][aq] * v[p][q];
            SparseMatrix rhs = v[bp][bq] * h[p][q];
            std::size_t r, c;
            if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.first_difference(rhs, r, c))
                throw CheckError("IdentityViolation",
                                 what + " fails to commute at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")",
                                 c < spaces.dim(p, q) ? spaces.label(p, q, c) : "");
        }
    }
}

GradedModule row_module(const BiGradedModule& spaces, std::size_t q) {
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::string>> labels;
    for (std::size_t p = 0; p <= spaces.truncation; ++p) {
        dims.push_back(spaces.dim(p, q));
        labels.push_back(spaces.labels[p][q]);
    }
    return GradedModule(spaces.truncation, std::move(dims), std::move(labels));
}

GradedModule col_module(const BiGradedModule& spaces, std::size_t p) {
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::string>> labels;
    for (std::size_t q = 0; q <= spaces.truncation; ++q) {
        dims.push_back(spaces.dim(p, q));
        labels.push_back(spaces.labels[p][q]);
    }
    return GradedModule(spaces.truncation, std::move(dims), std::move(labels));
}

}  // namespace

BiParacyclicModule::BiParacyclicModule(BiGradedModule spaces, BiFamily hd, BiFamily hs, BiFamily ht,
                                       BiFamily vd, BiFamily vs, BiFamily vt)
    : spaces_(std::move(spaces)),
      hd_(std::move(hd)),
      hs_(std::move(hs)),
      ht_(std::move(ht)),
      vd_(std::move(vd)),
      vs_(std::move(vs)),
      vt_(std::move(vt)) {
    expect_bifamily_shape(hd_, spaces_, -1, 0, "horizontal d");
    expect_bifamily_shape(hs_, spaces_, +1, 0, "horizontal s");
    expect_bifamily_shape(ht_, spaces_, 0, 0, "horizontal t");
    expect_bifamily_shape(vd_, spaces_, 0, -1, "vertical d");
    expect_bifamily_shape(vs_, spaces_, 0, +1, "vertical s");
    expect_bifamily_shape(vt_, spaces_, 0, 0, "vertical t");

    const std::size_t n = spaces_.truncation;
    // Every row and column must itself be a paracyclic module.
    for (std::size_t q = 0; q <= n; ++q) {
        std::vector<SparseMatrix> d, s, t;
        for (std::size_t p = 0; p <= n; ++p) {
            d.push_back(hd_[p][q]);
            s.push_back(hs_[p][q]);
            t.push_back(ht_[p][q]);
        }
        rows_.emplace_back(row_module(spaces_, q), std::move(d), std::move(s), std::move(t));
    }
    for (std::size_t p = 0; p <= n; ++p) {
        std::vector<SparseMatrix> d, s, t;
        for (std::size_t q = 0; q <= n; ++q) {
            d.push_back(vd_[p][q]);
            s.push_back(vs_[p][q]);
            t.push_back(vt_[p][q]);
        }
        cols_.emplace_back(col_module(spaces_, p), std::move(d), std::move(s), std::move(t));
    }

    const BiFamily* hops[3] = {&hd_, &hs_, &ht_};
    const int hdeg[3] = {-1, +1, 0};
    const char* hname[3] = {"hd", "hs", "ht"};
    const BiFamily* vops[3] = {&vd_, &vs_, &vt_};
    const int vdeg[3] = {-1, +1, 0};
    const char* vname[3] = {"vd", "vs", "vt"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            expect_commute(*hops[i], hdeg[i], 0, *vops[j], 0, vdeg[j], spaces_,
                           std::string(hname[i]) + "/" + vname[j]);

    cylindrical_ = true;
    bicyclic_ = true;
    for (std::size_t p = 0; p <= n && (cylindrical_ || bicyclic_); ++p) {
        for (std::size_t q = 0; q <= n; ++q) {
            SparseMatrix hpow = rows_[q].cyclic_power(p, long(p) + 1);
            SparseMatrix vpow = cols_[p].cyclic_power(q, long(q) + 1);
            const SparseMatrix id = SparseMatrix::identity(spaces_.dim(p, q));
            if (hpow * vpow != id) cylindrical_ = false;
            if (hpow != id || vpow != id) bicyclic_ = false;
        }
    }
}

BiParacyclicModule tensor_paracyclic(const ParacyclicModule& x, const ParacyclicModule& y) {
    const std::size_t n = std::min(x.spaces().truncation, y.spaces().truncation);
    BiGradedModule spaces;
    spaces.truncation = n;
    spaces.dims.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
    spaces.labels.assign(n + 1, std::vector<std::vector<std::string>>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            spaces.dims[p][q] = x.spaces().dim(p) * y.spaces().dim(q);
            for (std::size_t i = 0; i < x.spaces().dim(p); ++i)
                for (std::size_t j = 0; j < y.spaces().dim(q); ++j)
                    spaces.labels[p][q].push_back(x.spaces().label(p, i) + "(x)" +
                                                  y.spaces().label(q, j));
        }
    auto fam = [&](auto h_mat, int dp, int dq) {
        BiFamily f(n + 1, std::vector<SparseMatrix>(n + 1));
        for (std::size_t p = 0; p <= n; ++p)
            for (std::size_t q = 0; q <= n; ++q) {
                const int tp = int(p) + dp, tq = int(q) + dq;
                if (tp < 0 || tq < 0 || std::size_t(tp) > n || std::size_t(tq) > n)
                    f[p][q] = SparseMatrix(0, spaces.dim(p, q));
                else
                    f[p][q] = h_mat(p, q);
            }
        return f;
    };
    auto idx = [&](std::size_t k) { return SparseMatrix::identity(k); };
    return BiParacyclicModule(
        spaces,
        fam([&](std::size_t p, std::size_t q) { return kron(x.end_face(p), idx(y.spaces().dim(q))); }, -1, 0),
        fam([&](std::size_t p, std::size_t q) { return kron(x.extra_degeneracy(p), idx(y.spaces().dim(q))); }, +1, 0),
        fam([&](std::size_t p, std::size_t q) { return kron(x.cyclic_op(p), idx(y.spaces().dim(q))); }, 0, 0),
        fam([&](std::size_t p, std::size_t q) { return kron(idx(x.spaces().dim(p)), y.end_face(q)); }, 0, -1),
        fam([&](std::size_t p, std::size_t q) { return kron(idx(x.spaces().dim(p)), y.extra_degeneracy(q)); }, 0, +1),
        fam([&](std::size_t p, std::size_t q) { return kron(idx(x.spaces().dim(p)), y.cyclic_op(q)); }, 0, 0));
}

ParacyclicModule diagonal(const BiParacyclicModule& c) {
    const std::size_t n = c.spaces().truncation;
    std::vector<std::size_t> dims(n + 1);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        dims[m] = c.spaces().dim(m, m);
        labels[m] = c.spaces().labels[m][m];
    }
    GradedModule spaces(n, dims, std::move(labels));
    std::vector<SparseMatrix> d(n + 1), s(n + 1), t(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        d[m] = m >= 1 ? c.hd()[m][m - 1] * c.vd()[m][m] : SparseMatrix(0, dims[0]);
        s[m] = m + 1 <= n ? c.hs()[m][m + 1] * c.vs()[m][m] : SparseMatrix(0, dims[n]);
        t[m] = c.ht()[m][m] * c.vt()[m][m];
    }
    return ParacyclicModule(std::move(spaces), std::move(d), std::move(s), std::move(t));
}

TotalSpaces totalize_spaces(const BiGradedModule& b) {
    const std::size_t n = b.truncation;
    std::vector<std::size_t> dims(n + 1, 0);
    std::vector<std::vector<std::string>> labels(n + 1);
    std::vector<std::vector<std::size_t>> offsets(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        for (std::size_t p = 0; p <= m; ++p) {
            offsets[m].push_back(dims[m]);
            dims[m] += b.dim(p, m - p);
            for (std::size_t i = 0; i < b.dim(p, m - p); ++i)
                labels[m].push_back(b.label(p, m - p, i));
        }
    }
    return {GradedModule(n, dims, std::move(labels)), std::move(offsets)};
}

namespace {

// b-differential of the total complex: b_bar + (-1)^p b, blockwise.
std::vector<SparseMatrix> total_b(const BiParacyclicModule& c, const TotalSpaces& tot) {
    const std::size_t n = c.spaces().truncation;
    std::vector<SparseMatrix> out(n + 1);
    out[0] = SparseMatrix(0, tot.spaces.dim(0));
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<Triplet> ts;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            if (p >= 1) {
                SparseMatrix hb = simplicial_b(c.row(q), p);
                for (const auto& e : hb.entries())
                    ts.push_back({tot.offsets[m - 1][p - 1] + e.row, tot.offsets[m][p] + e.col, e.val});
            }
            if (q >= 1) {
                SparseMatrix vb = simplicial_b(c.column(p), q);
                if (p % 2 == 1) vb = vb.scaled(Rational(-1));
                for (const auto& e : vb.entries())
                    ts.push_back({tot.offsets[m - 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
            }
        }
        out[m] = SparseMatrix::from_triplets(tot.spaces.dim(m - 1), tot.spaces.dim(m), std::move(ts));
    }
    return out;
}

// Lexicographic successor of a p-subset of {0..m-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& mu, std::size_t m) {
    const std::size_t p = mu.size();
    std::size_t i = p;
    while (i-- > 0) {
        if (mu[i] < m - p + i) {
            ++mu[i];
            for (std::size_t k = i + 1; k < p; ++k) mu[k] = mu[k - 1] + 1;
            return true;
        }
    }
    return false;
}

void check_chain_map(const std::vector<SparseMatrix>& f, const std::vector<SparseMatrix>& b_src,
                     const std::vector<SparseMatrix>& b_dst, const GradedModule& src,
                     const std::string& what) {
    for (std::size_t m = 1; m <= src.truncation; ++m) {
        SparseMatrix lhs = f[m - 1] * b_src[m];
        SparseMatrix rhs = b_dst[m] * f[m];
        std::size_t r, c;
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.first_difference(rhs, r, c))
            throw CheckError("NotAChainMap", what + " fails to commute with b at degree " + std::to_string(m),
                             c < src.dim(m) ? src.label(m, c) : "");
    }
}

}  // namespace

GradedMap shuffle(const BiParacyclicModule& c) {
    const std::size_t n = c.spaces().truncation;
    TotalSpaces tot = totalize_spaces(c.spaces());
    ParacyclicModule diag = diagonal(c);
    std::vector<SparseMatrix> mats(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> ts;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            // enumerate p-subsets mu of {0..m-1}; nu is the complement
            std::vector<std::size_t> mu(p);
            for (std::size_t i = 0; i < p; ++i) mu[i] = i;
            do {
                std::vector<std::size_t> nu;
                {
                    std::vector<char> in_mu(m, 0);
                    for (std::size_t v : mu) in_mu[v] = 1;
                    for (std::size_t v = 0; v < m; ++v)
                        if (!in_mu[v]) nu.push_back(v);
                }
                int inversions = 0;
                for (std::size_t a : mu)
                    for (std::size_t b : nu)
                        if (a > b) ++inversions;
                // vertical degeneracies indexed by mu raise q to m, then
                // horizontal ones indexed by nu raise p to m
                SparseMatrix term = SparseMatrix::identity(c.spaces().dim(p, q));
                for (std::size_t k = 0; k < p; ++k)
                    term = c.column(p).degeneracy(q + k, mu[k]) * term;
                for (std::size_t k = 0; k < q; ++k)
                    term = c.row(m).degeneracy(p + k, nu[k]) * term;
                if (inversions % 2 == 1) term = term.scaled(Rational(-1));
                for (const auto& e : term.entries())
                    ts.push_back({e.row, tot.offsets[m][p] + e.col, e.val});
            } while (next_combination(mu, m));
        }
        mats[m] = SparseMatrix::from_triplets(c.spaces().dim(m, m), tot.spaces.dim(m), std::move(ts));
    }
    std::vector<SparseMatrix> b_tot = total_b(c, tot);
    std::vector<SparseMatrix> b_diag(n + 1);
    for (std::size_t m = 0; m <= n; ++m) b_diag[m] = simplicial_b(diag, m);
    check_chain_map(mats, b_tot, b_diag, tot.spaces, "shuffle");
    return GradedMap(0, tot.spaces, diag.spaces(), std::move(mats));
}

GradedMap alexander_whitney(const BiParacyclicModule& c) {
    const std::size_t n = c.spaces().truncation;
    TotalSpaces tot = totalize_spaces(c.spaces());
    ParacyclicModule diag = diagonal(c);
    std::vector<SparseMatrix> mats(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> ts;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            // back q-face vertically: (d_0)^p from (m,m) down to (m,q)
            SparseMatrix term = SparseMatrix::identity(c.spaces().dim(m, m));
            for (std::size_t k = 0; k < p; ++k) term = c.column(m).face(m - k, 0) * term;
            // front p-face horizontally: repeated end faces (m,q) -> (p,q)
            for (std::size_t pc = m; pc > p; --pc) term = c.row(q).end_face(pc) * term;
            for (const auto& e : term.entries())
                ts.push_back({tot.offsets[m][p] + e.row, e.col, e.val});
        }
        mats[m] = SparseMatrix::from_triplets(tot.spaces.dim(m), c.spaces().dim(m, m), std::move(ts));
    }
    std::vector<SparseMatrix> b_tot = total_b(c, tot);
    std::vector<SparseMatrix> b_diag(n + 1);
    for (std::size_t m = 0; m <= n; ++m) b_diag[m] = simplicial_b(diag, m);
    check_chain_map(mats, b_diag, b_tot, diag.spaces(), "alexander_whitney");
    return GradedMap(0, diag.spaces(), tot.spaces, std::move(mats));
}

}  // namespace cychom
