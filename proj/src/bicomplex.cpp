#include "cychom/bicomplex.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

void expect_bishape(const BiFamily& f, const BiGradedModule& spaces, int dp, int dq,
                    const std::string& what) {
    const std::size_t n = spaces.truncation;
    if (f.size() != n + 1) throw CheckError("IdentityViolation", what + " family has wrong length");
    for (std::size_t p = 0; p <= n; ++p) {
        if (f[p].size() != n + 1)
            throw CheckError("IdentityViolation", what + " family has wrong length");
        for (std::size_t q = 0; q <= n; ++q) {
            const int tp = int(p) + dp, tq = int(q) + dq;
            const bool inside = tp >= 0 && tq >= 0 && std::size_t(tp) <= n && std::size_t(tq) <= n;
            const std::size_t want = inside ? spaces.dim(tp, tq) : 0;
            if (f[p][q].rows() != want || f[p][q].cols() != spaces.dim(p, q))
                throw CheckError("IdentityViolation", what + " has wrong shape at (" +
                                                          std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }
}

void expect_bi_equal(const SparseMatrix& lhs, const SparseMatrix& rhs, const BiGradedModule& spaces,
                     std::size_t p, std::size_t q, const std::string& identity) {
    std::size_t r, c;
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.first_difference(rhs, r, c))
        throw CheckError("IdentityViolation",
                         identity + " fails at (" + std::to_string(p) + "," + std::to_string(q) + ")",
                         c < spaces.dim(p, q) ? spaces.label(p, q, c) : "");
}

void expect_bicommute(const BiFamily& f, int fp, int fq, const BiFamily& g, int gp, int gq,
                      const BiGradedModule& spaces, const std::string& what) {
    const std::size_t n = spaces.truncation;
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            const int ap = int(p) + gp, aq = int(q) + gq;
            const int bp = int(p) + fp, bq = int(q) + fq;
            const int mp = int(p) + fp + gp, mq = int(q) + fq + gq;
            if (mp < 0 || mq < 0 || std::size_t(mp) > n || std::size_t(mq) > n) continue;
            if (ap < 0 || aq < 0 || std::size_t(ap) > n || std::size_t(aq) > n) continue;
            if (bp < 0 || bq < 0 || std::size_t(bp) > n || std::size_t(bq) > n) continue;
            // both composition paths must stay inside the triangle window
            if (p + q > n || std::size_t(ap + aq) > n || std::size_t(bp + bq) > n ||
                std::size_t(mp + mq) > n)
                continue;
            expect_bi_equal(f[ap][aq] * g[p][q], g[bp][bq] * f[p][q], spaces, p, q, what);
        }
}

BiFamily zero_bifamily(const BiGradedModule& spaces, int dp, int dq) {
    const std::size_t n = spaces.truncation;
    BiFamily f(n + 1, std::vector<SparseMatrix>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            const int tp = int(p) + dp, tq = int(q) + dq;
            const bool inside = tp >= 0 && tq >= 0 && std::size_t(tp) <= n && std::size_t(tq) <= n;
            f[p][q] = SparseMatrix(inside ? spaces.dim(tp, tq) : 0, spaces.dim(p, q));
        }
    return f;
}

}  // namespace

ParachainBicomplex::ParachainBicomplex(BiGradedModule spaces_, BiFamily hb_, BiFamily hB_,
                                       BiFamily vb_, BiFamily vB_)
    : spaces(std::move(spaces_)),
      hb(std::move(hb_)),
      hB(std::move(hB_)),
      vb(std::move(vb_)),
      vB(std::move(vB_)) {
    const std::size_t n = spaces.truncation;
    // Parachain bicomplexes live on the triangle p + q <= N: the blocks
    // beyond it never enter a totalization, and the twists hT, vT are only
    // representable when the full anticommutator stays inside the window.
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q)
            if (p + q > n) {
                spaces.dims[p][q] = 0;
                spaces.labels[p][q].clear();
            }
    auto clip = [&](BiFamily& f, int dp, int dq) {
        for (std::size_t p = 0; p <= n; ++p)
            for (std::size_t q = 0; q <= n; ++q) {
                const int tp = int(p) + dp, tq = int(q) + dq;
                const bool inside = tp >= 0 && tq >= 0 && std::size_t(tp) <= n &&
                                    std::size_t(tq) <= n;
                const std::size_t rows = inside ? spaces.dim(tp, tq) : 0;
                if (f[p][q].rows() != rows || f[p][q].cols() != spaces.dim(p, q)) {
                    std::vector<Triplet> kept;
                    if (spaces.dim(p, q) > 0 && rows > 0)
                        for (const auto& e : f[p][q].entries())
                            if (e.row < rows && e.col < spaces.dim(p, q)) kept.push_back(e);
                    f[p][q] = SparseMatrix::from_triplets(rows, spaces.dim(p, q), std::move(kept));
                }
            }
    };
    clip(hb, -1, 0);
    clip(hB, +1, 0);
    clip(vb, 0, -1);
    clip(vB, 0, +1);
    expect_bishape(hb, spaces, -1, 0, "hb");
    expect_bishape(hB, spaces, +1, 0, "hB");
    expect_bishape(vb, spaces, 0, -1, "vb");
    expect_bishape(vB, spaces, 0, +1, "vB");

    // rows and columns are parachain complexes
    for (std::size_t q = 0; q <= n; ++q) {
        for (std::size_t p = 2; p <= n; ++p)
            expect_bi_equal(hb[p - 1][q] * hb[p][q], SparseMatrix(spaces.dim(p - 2, q), spaces.dim(p, q)),
                            spaces, p, q, "hb^2 = 0");
        for (std::size_t p = 0; p + 2 <= n; ++p)
            expect_bi_equal(hB[p + 1][q] * hB[p][q], SparseMatrix(spaces.dim(p + 2, q), spaces.dim(p, q)),
                            spaces, p, q, "hB^2 = 0");
    }
    for (std::size_t p = 0; p <= n; ++p) {
        for (std::size_t q = 2; q <= n; ++q)
            expect_bi_equal(vb[p][q - 1] * vb[p][q], SparseMatrix(spaces.dim(p, q - 2), spaces.dim(p, q)),
                            spaces, p, q, "vb^2 = 0");
        for (std::size_t q = 0; q + 2 <= n; ++q)
            expect_bi_equal(vB[p][q + 1] * vB[p][q], SparseMatrix(spaces.dim(p, q + 2), spaces.dim(p, q)),
                            spaces, p, q, "vB^2 = 0");
    }
    expect_bicommute(hb, -1, 0, vb, 0, -1, spaces, "hb/vb");
    expect_bicommute(hb, -1, 0, vB, 0, +1, spaces, "hb/vB");
    expect_bicommute(hB, +1, 0, vb, 0, -1, spaces, "hB/vb");
    expect_bicommute(hB, +1, 0, vB, 0, +1, spaces, "hB/vB");

    hT = zero_bifamily(spaces, 0, 0);
    vT = zero_bifamily(spaces, 0, 0);
    mixed = true;
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            const SparseMatrix id = SparseMatrix::identity(spaces.dim(p, q));
            // the twists are representable exactly when the anticommutator
            // stays inside the triangle; past that they are extended by 1
            const bool genuine = p + q + 1 <= n;
            SparseMatrix hanti(spaces.dim(p, q), spaces.dim(p, q));
            SparseMatrix vanti(spaces.dim(p, q), spaces.dim(p, q));
            if (genuine) {
                hanti = hb[p + 1][q] * hB[p][q];
                if (p >= 1) hanti = hanti + hB[p - 1][q] * hb[p][q];
                vanti = vb[p][q + 1] * vB[p][q];
                if (q >= 1) vanti = vanti + vB[p][q - 1] * vb[p][q];
            }
            hT[p][q] = genuine ? id - hanti : id;
            vT[p][q] = genuine ? id - vanti : id;
            if (hT[p][q] != id || vT[p][q] != id) mixed = false;
        }
    cylindrical = true;
    for (std::size_t p = 0; p <= n && cylindrical; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            if (p + q + 1 > n) continue;  // only genuine twists are meaningful
            if (hT[p][q] * vT[p][q] != SparseMatrix::identity(spaces.dim(p, q))) {
                cylindrical = false;
                break;
            }
        }
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            if (rank(hT[p][q]) != spaces.dim(p, q))
                throw CheckError("IdentityViolation", "hT is singular at (" + std::to_string(p) +
                                                          "," + std::to_string(q) + ")");
            if (rank(vT[p][q]) != spaces.dim(p, q))
                throw CheckError("IdentityViolation", "vT is singular at (" + std::to_string(p) +
                                                          "," + std::to_string(q) + ")");
        }
}

ParachainBicomplex ParachainBicomplex::from_biparacyclic(const BiParacyclicModule& c) {
    const std::size_t n = c.spaces().truncation;
    BiFamily hb(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily hB(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily vb(n + 1, std::vector<SparseMatrix>(n + 1));
    BiFamily vB(n + 1, std::vector<SparseMatrix>(n + 1));
    for (std::size_t q = 0; q <= n; ++q) {
        ParachainComplex row = derive_parachain(c.row(q));
        for (std::size_t p = 0; p <= n; ++p) {
            hb[p][q] = row.b[p];
            hB[p][q] = row.B[p];
        }
    }
    for (std::size_t p = 0; p <= n; ++p) {
        ParachainComplex col = derive_parachain(c.column(p));
        for (std::size_t q = 0; q <= n; ++q) {
            vb[p][q] = col.b[q];
            vB[p][q] = col.B[q];
        }
    }
    return ParachainBicomplex(c.spaces(), std::move(hb), std::move(hB), std::move(vb), std::move(vB));
}

TotalizedMixed totalize_mixed(const ParachainBicomplex& c) {
    if (!c.mixed && !c.cylindrical)
        throw CheckError("NotCylindrical",
                         "mixed totalization needs a mixed bicomplex or a cylindrical complex");
    const std::size_t n = c.spaces.truncation;
    TotalSpaces tot = totalize_spaces(c.spaces);
    std::vector<SparseMatrix> b(n + 1), B(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> bt, Bt;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            if (m >= 1) {
                if (p >= 1)
                    for (const auto& e : c.hb[p][q].entries())
                        bt.push_back({tot.offsets[m - 1][p - 1] + e.row, tot.offsets[m][p] + e.col, e.val});
                if (q >= 1) {
                    SparseMatrix t = p % 2 == 0 ? c.vb[p][q] : c.vb[p][q].scaled(Rational(-1));
                    for (const auto& e : t.entries())
                        bt.push_back({tot.offsets[m - 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
                }
            }
            if (m + 1 <= n) {
                for (const auto& e : c.hB[p][q].entries())
                    Bt.push_back({tot.offsets[m + 1][p + 1] + e.row, tot.offsets[m][p] + e.col, e.val});
                // cylindrical B-dagger twists the vertical part by hT; the
                // twist is applied at the source block, where it is genuine
                SparseMatrix t = c.mixed ? c.vB[p][q] : c.vB[p][q] * c.hT[p][q];
                if (p % 2 == 1) t = t.scaled(Rational(-1));
                for (const auto& e : t.entries())
                    Bt.push_back({tot.offsets[m + 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
            }
        }
        b[m] = SparseMatrix::from_triplets(m >= 1 ? tot.spaces.dim(m - 1) : 0, tot.spaces.dim(m),
                                           std::move(bt));
        B[m] = SparseMatrix::from_triplets(m + 1 <= n ? tot.spaces.dim(m + 1) : 0, tot.spaces.dim(m),
                                           std::move(Bt));
    }
    return TotalizedMixed{MixedComplex(tot.spaces, std::move(b), std::move(B)), tot.offsets};
}

TotalizedParachain totalize_parachain(const ParachainBicomplex& c) {
    // The block twists at p + q = N are not representable inside the window,
    // so the honest parachain total stops one degree lower.
    if (c.spaces.truncation == 0)
        throw CheckError("IdentityViolation", "parachain totalization needs truncation >= 1");
    const std::size_t n = c.spaces.truncation - 1;
    TotalSpaces tot_full = totalize_spaces(c.spaces);
    TotalSpaces tot;
    {
        std::vector<std::size_t> dims(n + 1);
        std::vector<std::vector<std::string>> labels(n + 1);
        tot.offsets.resize(n + 1);
        for (std::size_t m = 0; m <= n; ++m) {
            dims[m] = tot_full.spaces.dim(m);
            labels[m] = tot_full.spaces.labels[m];
            tot.offsets[m] = tot_full.offsets[m];
        }
        tot.spaces = GradedModule(n, std::move(dims), std::move(labels));
    }
    std::vector<SparseMatrix> b(n + 1), B(n + 1), T(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> bt, Bt, Tt;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            if (m >= 1) {
                if (p >= 1)
                    for (const auto& e : c.hb[p][q].entries())
                        bt.push_back({tot.offsets[m - 1][p - 1] + e.row, tot.offsets[m][p] + e.col, e.val});
                if (q >= 1) {
                    SparseMatrix t = p % 2 == 0 ? c.vb[p][q] : c.vb[p][q].scaled(Rational(-1));
                    for (const auto& e : t.entries())
                        bt.push_back({tot.offsets[m - 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
                }
            }
            if (m + 1 <= n) {
                for (const auto& e : c.hB[p][q].entries())
                    Bt.push_back({tot.offsets[m + 1][p + 1] + e.row, tot.offsets[m][p] + e.col, e.val});
                SparseMatrix t = p % 2 == 0 ? c.vB[p][q] : c.vB[p][q].scaled(Rational(-1));
                for (const auto& e : t.entries())
                    Bt.push_back({tot.offsets[m + 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
            }
            // T-dagger = hT + vT - 1 blockwise
            SparseMatrix tt = c.hT[p][q] + c.vT[p][q] - SparseMatrix::identity(c.spaces.dim(p, q));
            for (const auto& e : tt.entries())
                Tt.push_back({tot.offsets[m][p] + e.row, tot.offsets[m][p] + e.col, e.val});
        }
        b[m] = SparseMatrix::from_triplets(m >= 1 ? tot.spaces.dim(m - 1) : 0, tot.spaces.dim(m),
                                           std::move(bt));
        B[m] = SparseMatrix::from_triplets(m + 1 <= n ? tot.spaces.dim(m + 1) : 0, tot.spaces.dim(m),
                                           std::move(Bt));
        T[m] = SparseMatrix::from_triplets(tot.spaces.dim(m), tot.spaces.dim(m), std::move(Tt));
    }
    return TotalizedParachain{
        ParachainComplex(tot.spaces, std::move(b), std::move(B), std::move(T)), tot.offsets};
}

TriangularSModule::TriangularSModule(Orientation o, BiGradedModule spaces_, BiFamily d_,
                                     BiFamily up_, BiFamily b_, BiFamily B_, BiFamily S_)
    : orientation(o),
      spaces(std::move(spaces_)),
      d(std::move(d_)),
      up(std::move(up_)),
      b(std::move(b_)),
      B(std::move(B_)),
      S(std::move(S_)) {
    const std::size_t n = spaces.truncation;
    expect_bishape(d, spaces, -1, 0, "row differential");
    expect_bishape(b, spaces, 0, -1, "column differential");
    if (orientation == Orientation::horizontal) {
        expect_bishape(B, spaces, 0, +1, "column B");
        expect_bishape(S, spaces, -2, 0, "S");
        expect_bicommute(d, -1, 0, b, 0, -1, spaces, "d/b");
        expect_bicommute(d, -1, 0, B, 0, +1, spaces, "d/B");
        expect_bicommute(S, -2, 0, b, 0, -1, spaces, "S/b");
        expect_bicommute(S, -2, 0, B, 0, +1, spaces, "S/B");
        expect_bicommute(d, -1, 0, S, -2, 0, spaces, "d/S");
        // columns: b^2 = 0, B^2 = 0
        for (std::size_t p = 0; p <= n; ++p) {
            for (std::size_t q = 2; q <= n; ++q)
                expect_bi_equal(b[p][q - 1] * b[p][q], SparseMatrix(spaces.dim(p, q - 2), spaces.dim(p, q)),
                                spaces, p, q, "b^2 = 0");
            for (std::size_t q = 0; q + 2 <= n; ++q)
                expect_bi_equal(B[p][q + 1] * B[p][q], SparseMatrix(spaces.dim(p, q + 2), spaces.dim(p, q)),
                                spaces, p, q, "B^2 = 0");
        }
        // triangular identity d^2 + (bB + Bb)S = 0 where representable
        for (std::size_t p = 2; p <= n; ++p)
            for (std::size_t q = 0; q + 1 <= n; ++q) {
                SparseMatrix lhs = d[p - 1][q] * d[p][q];
                SparseMatrix anti = b[p - 2][q + 1] * B[p - 2][q];
                if (q >= 1) anti = anti + B[p - 2][q - 1] * b[p - 2][q];
                expect_bi_equal(lhs + anti * S[p][q],
                                SparseMatrix(spaces.dim(p - 2, q), spaces.dim(p, q)), spaces, p, q,
                                "d^2 + (bB + Bb)S = 0");
            }
    } else {
        expect_bishape(up, spaces, +1, 0, "row B");
        expect_bishape(S, spaces, 0, -2, "S");
        expect_bicommute(d, -1, 0, b, 0, -1, spaces, "bbar/d");
        expect_bicommute(up, +1, 0, b, 0, -1, spaces, "Bbar/d");
        expect_bicommute(d, -1, 0, S, 0, -2, spaces, "bbar/S");
        expect_bicommute(up, +1, 0, S, 0, -2, spaces, "Bbar/S");
        expect_bicommute(b, 0, -1, S, 0, -2, spaces, "d/S");
        // rows: bbar^2 = 0, Bbar^2 = 0
        for (std::size_t q = 0; q <= n; ++q) {
            for (std::size_t p = 2; p <= n; ++p)
                expect_bi_equal(d[p - 1][q] * d[p][q], SparseMatrix(spaces.dim(p - 2, q), spaces.dim(p, q)),
                                spaces, p, q, "bbar^2 = 0");
            for (std::size_t p = 0; p + 2 <= n; ++p)
                expect_bi_equal(up[p + 1][q] * up[p][q],
                                SparseMatrix(spaces.dim(p + 2, q), spaces.dim(p, q)), spaces, p, q,
                                "Bbar^2 = 0");
        }
        // (bbar Bbar + Bbar bbar)S + d^2 = 0 where representable
        for (std::size_t p = 0; p + 1 <= n; ++p)
            for (std::size_t q = 2; q <= n; ++q) {
                SparseMatrix lhs = b[p][q - 1] * b[p][q];
                SparseMatrix anti = d[p + 1][q - 2] * up[p][q - 2];
                if (p >= 1) anti = anti + up[p - 1][q - 2] * d[p][q - 2];
                expect_bi_equal(anti * S[p][q] + lhs,
                                SparseMatrix(spaces.dim(p, q - 2), spaces.dim(p, q)), spaces, p, q,
                                "(bbar Bbar + Bbar bbar)S + d^2 = 0");
            }
    }
}

TotalSModule totalize(const TriangularSModule& t) {
    const std::size_t n = t.spaces.truncation;
    TotalSpaces tot = totalize_spaces(t.spaces);
    const bool horiz = t.orientation == TriangularSModule::Orientation::horizontal;
    std::vector<SparseMatrix> d(n + 1), S(n + 1), T(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st;
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t q = m - p;
            if (m >= 1) {
                if (p >= 1)  // row differential lowers p
                    for (const auto& e : t.d[p][q].entries())
                        dt.push_back({tot.offsets[m - 1][p - 1] + e.row, tot.offsets[m][p] + e.col, e.val});
                if (horiz) {
                    if (q >= 1) {
                        SparseMatrix x = p % 2 == 0 ? t.b[p][q] : t.b[p][q].scaled(Rational(-1));
                        for (const auto& e : x.entries())
                            dt.push_back({tot.offsets[m - 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
                    }
                    if (p >= 2) {  // (-1)^p B S : (p,q) -> (p-2, q+1)
                        SparseMatrix x = t.B[p - 2][q] * t.S[p][q];
                        if (p % 2 == 1) x = x.scaled(Rational(-1));
                        for (const auto& e : x.entries())
                            dt.push_back({tot.offsets[m - 1][p - 2] + e.row, tot.offsets[m][p] + e.col, e.val});
                    }
                } else {
                    if (q >= 1) {
                        SparseMatrix x = p % 2 == 0 ? t.b[p][q] : t.b[p][q].scaled(Rational(-1));
                        for (const auto& e : x.entries())
                            dt.push_back({tot.offsets[m - 1][p] + e.row, tot.offsets[m][p] + e.col, e.val});
                    }
                    if (q >= 2) {  // Bbar S : (p,q) -> (p+1, q-2)
                        SparseMatrix x = t.up[p][q - 2] * t.S[p][q];
                        for (const auto& e : x.entries())
                            dt.push_back({tot.offsets[m - 1][p + 1] + e.row, tot.offsets[m][p] + e.col, e.val});
                    }
                }
            }
            if (m >= 2) {
                if (horiz && p >= 2)
                    for (const auto& e : t.S[p][q].entries())
                        st.push_back({tot.offsets[m - 2][p - 2] + e.row, tot.offsets[m][p] + e.col, e.val});
                if (!horiz && q >= 2)
                    for (const auto& e : t.S[p][q].entries())
                        st.push_back({tot.offsets[m - 2][p] + e.row, tot.offsets[m][p] + e.col, e.val});
            }
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? tot.spaces.dim(m - 1) : 0, tot.spaces.dim(m),
                                           std::move(dt));
        S[m] = SparseMatrix::from_triplets(m >= 2 ? tot.spaces.dim(m - 2) : 0, tot.spaces.dim(m),
                                           std::move(st));
        T[m] = SparseMatrix::identity(tot.spaces.dim(m));
    }
    return TotalSModule{ParaSModule(tot.spaces, std::move(d), std::move(S), std::move(T)),
                        tot.offsets};
}

Triangularized triangularize(const ParachainBicomplex& c, bool wsigma) {
    if (!c.cylindrical && !c.mixed)
        throw CheckError("NotCylindrical", "triangularize needs a cylindrical complex");
    const std::size_t n = c.spaces.truncation;

    BiGradedModule spaces;
    spaces.truncation = n;
    spaces.dims.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
    spaces.labels.assign(n + 1, std::vector<std::vector<std::string>>(n + 1));
    std::vector<std::vector<std::vector<std::size_t>>> offs(
        n + 1, std::vector<std::vector<std::size_t>>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            if (p + q > n) continue;  // the total S-module lives on the triangle
            const std::size_t steps = wsigma ? p : q;
            for (std::size_t j = 0; 2 * j <= steps; ++j) {
                offs[p][q].push_back(spaces.dims[p][q]);
                const std::size_t bp = wsigma ? p - 2 * j : p;
                const std::size_t bq = wsigma ? q : q - 2 * j;
                spaces.dims[p][q] += c.spaces.dim(bp, bq);
                for (std::size_t i = 0; i < c.spaces.dim(bp, bq); ++i)
                    spaces.labels[p][q].push_back(
                        j == 0 ? c.spaces.label(bp, bq, i)
                               : "S^" + std::to_string(j) + "[" + c.spaces.label(bp, bq, i) + "]");
            }
        }

    auto fam = [&](int dp, int dq) { return zero_bifamily(spaces, dp, dq); };
    BiFamily d = fam(-1, 0), up = fam(+1, 0), b = fam(0, -1), B = fam(0, +1),
             S = wsigma ? fam(-2, 0) : fam(0, -2);

    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            if (p + q > n) continue;
            const std::size_t steps = wsigma ? p : q;
            std::vector<Triplet> dt, ut, bt, Bt, st;
            for (std::size_t j = 0; 2 * j <= steps; ++j) {
                const std::size_t bp = wsigma ? p - 2 * j : p;
                const std::size_t bq = wsigma ? q : q - 2 * j;
                if (wsigma) {
                    // row differential (d x)_j = hb x_j + hB x_{j+1}
                    if (p >= 1) {
                        if (bp >= 1)
                            for (const auto& e : c.hb[bp][bq].entries())
                                dt.push_back({offs[p - 1][q][j] + e.row, offs[p][q][j] + e.col, e.val});
                        if (2 * (j + 1) <= p)
                            for (const auto& e : c.hB[p - 2 * (j + 1)][bq].entries())
                                dt.push_back({offs[p - 1][q][j] + e.row, offs[p][q][j + 1] + e.col, e.val});
                    }
                    // vertical parachain: b blockwise, B twisted by hT
                    if (q >= 1 && bq >= 1)
                        for (const auto& e : c.vb[bp][bq].entries())
                            bt.push_back({offs[p][q - 1][j] + e.row, offs[p][q][j] + e.col, e.val});
                    if (p + q + 1 <= n) {
                        SparseMatrix x = c.mixed ? c.vB[bp][bq] : c.vB[bp][bq] * c.hT[bp][bq];
                        for (const auto& e : x.entries())
                            Bt.push_back({offs[p][q + 1][j] + e.row, offs[p][q][j] + e.col, e.val});
                    }
                    if (p >= 2 && 2 * (j + 1) <= p)
                        for (std::size_t i = 0; i < c.spaces.dim(p - 2 * (j + 1), bq); ++i)
                            st.push_back({offs[p - 2][q][j] + i, offs[p][q][j + 1] + i, Rational(1)});
                } else {
                    // rows carry the parachain pair (hb, hB) blockwise
                    if (p >= 1)
                        for (const auto& e : c.hb[bp][bq].entries())
                            dt.push_back({offs[p - 1][q][j] + e.row, offs[p][q][j] + e.col, e.val});
                    if (p + q + 1 <= n)
                        for (const auto& e : c.hB[bp][bq].entries())
                            ut.push_back({offs[p + 1][q][j] + e.row, offs[p][q][j] + e.col, e.val});
                    // vertical S-direction: (d x)_j = vb x_j + hT vB x_{j+1}
                    if (q >= 1) {
                        if (bq >= 1)
                            for (const auto& e : c.vb[bp][bq].entries())
                                bt.push_back({offs[p][q - 1][j] + e.row, offs[p][q][j] + e.col, e.val});
                        if (2 * (j + 1) <= q) {
                            const std::size_t lq = q - 2 * (j + 1);
                            SparseMatrix x = c.mixed ? c.vB[bp][lq] : c.vB[bp][lq] * c.hT[bp][lq];
                            for (const auto& e : x.entries())
                                bt.push_back({offs[p][q - 1][j] + e.row, offs[p][q][j + 1] + e.col, e.val});
                        }
                    }
                    if (q >= 2 && 2 * (j + 1) <= q)
                        for (std::size_t i = 0; i < c.spaces.dim(bp, q - 2 * (j + 1)); ++i)
                            st.push_back({offs[p][q - 2][j] + i, offs[p][q][j + 1] + i, Rational(1)});
                }
            }
            auto put = [&](BiFamily& f, int dp, int dq, std::vector<Triplet> ts) {
                const int tp = int(p) + dp, tq = int(q) + dq;
                if (tp < 0 || tq < 0 || std::size_t(tp) > n || std::size_t(tq) > n) return;
                if (std::size_t(tp + tq) > n) return;  // target beyond the triangle
                f[p][q] = SparseMatrix::from_triplets(spaces.dims[tp][tq], spaces.dims[p][q],
                                                      std::move(ts));
            };
            put(d, -1, 0, std::move(dt));
            if (!wsigma) put(up, +1, 0, std::move(ut));
            put(b, 0, -1, std::move(bt));
            if (wsigma) put(B, 0, +1, std::move(Bt));
            if (wsigma)
                put(S, -2, 0, std::move(st));
            else
                put(S, 0, -2, std::move(st));
        }

    TriangularSModule module(wsigma ? TriangularSModule::Orientation::horizontal
                                    : TriangularSModule::Orientation::vertical,
                             std::move(spaces), std::move(d), std::move(up), std::move(b),
                             std::move(B), std::move(S));

    // The total S-module must equal Tot(C)-natural on the nose, up to the
    // canonical reindexing of the (p, q, j) summands.
    {
        TotalSModule ours = totalize(module);
        TotalizedMixed tm = totalize_mixed(c);
        TotalSpaces plain = totalize_spaces(c.spaces);
        CyclicComplex cnat = cyclic_complex(ParachainComplex::from_mixed(tm.complex));
        TotalSpaces tri = totalize_spaces(module.spaces);
        std::vector<SparseMatrix> perm(n + 1);
        for (std::size_t m = 0; m <= n; ++m) {
            std::vector<std::size_t> target(ours.module.spaces.dim(m));
            for (std::size_t pc = 0; pc <= m; ++pc) {
                const std::size_t qc = m - pc;
                const std::size_t steps = wsigma ? pc : qc;
                for (std::size_t j = 0; 2 * j <= steps; ++j) {
                    const std::size_t bp = wsigma ? pc - 2 * j : pc;
                    const std::size_t bq = wsigma ? qc : qc - 2 * j;
                    for (std::size_t i = 0; i < c.spaces.dim(bp, bq); ++i)
                        target[tri.offsets[m][pc] + offs[pc][qc][j] + i] =
                            cnat.offsets[m][j] + plain.offsets[m - 2 * j][bp] + i;
                }
            }
            perm[m] = SparseMatrix::permutation(target);
        }
        for (std::size_t m = 1; m <= n; ++m)
            if (perm[m - 1] * ours.module.d[m] != cnat.module.d[m] * perm[m])
                throw CheckError("IdentityViolation",
                                 "triangularized total differs from Tot(C)-natural at degree " +
                                     std::to_string(m));
        for (std::size_t m = 2; m <= n; ++m)
            if (perm[m - 2] * ours.module.S[m] != cnat.module.S[m] * perm[m])
                throw CheckError("IdentityViolation",
                                 "triangularized periodicity differs from Tot(C)-natural at degree " +
                                     std::to_string(m));
    }
    return Triangularized{std::move(module), std::move(offs)};
}

TriangularSModule tensor_s_with_parachain(const ParaSModule& r, const ParachainComplex& c) {
    const std::size_t n = std::min(r.spaces.truncation, c.spaces.truncation);
    BiGradedModule spaces;
    spaces.truncation = n;
    spaces.dims.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
    spaces.labels.assign(n + 1, std::vector<std::vector<std::string>>(n + 1));
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            spaces.dims[p][q] = r.spaces.dim(p) * c.spaces.dim(q);
            for (std::size_t i = 0; i < r.spaces.dim(p); ++i)
                for (std::size_t j = 0; j < c.spaces.dim(q); ++j)
                    spaces.labels[p][q].push_back(r.spaces.label(p, i) + "(x)" +
                                                  c.spaces.label(q, j));
        }
    BiFamily d = zero_bifamily(spaces, -1, 0), up, b = zero_bifamily(spaces, 0, -1),
             B = zero_bifamily(spaces, 0, +1), S = zero_bifamily(spaces, -2, 0);
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            if (p >= 1) d[p][q] = kron(r.d[p], SparseMatrix::identity(c.spaces.dim(q)));
            if (p >= 2) S[p][q] = kron(r.S[p], SparseMatrix::identity(c.spaces.dim(q)));
            if (q >= 1) b[p][q] = kron(SparseMatrix::identity(r.spaces.dim(p)), c.b[q]);
            if (q + 1 <= n) B[p][q] = kron(SparseMatrix::identity(r.spaces.dim(p)), c.B[q]);
        }
    return TriangularSModule(TriangularSModule::Orientation::horizontal, std::move(spaces),
                             std::move(d), std::move(up), std::move(b), std::move(B), std::move(S));
}

}  // namespace cychom
