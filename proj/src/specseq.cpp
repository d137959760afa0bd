#include "cychom/specseq.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

FilteredComplex::FilteredComplex(ChainComplex total_, std::vector<std::vector<std::size_t>> level_)
    : total(std::move(total_)), level(std::move(level_)) {
    const std::size_t n = total.spaces.truncation;
    if (level.size() != n + 1)
        throw CheckError("FiltrationNotPreserved", "level table has wrong length");
    for (std::size_t m = 0; m <= n; ++m) {
        if (level[m].size() != total.spaces.dim(m))
            throw CheckError("FiltrationNotPreserved",
                             "level table has wrong length at degree " + std::to_string(m));
        for (std::size_t lv : level[m]) levels = std::max(levels, lv + 1);
    }
    for (std::size_t m = 1; m <= n; ++m)
        for (const auto& e : total.d[m].entries())
            if (level[m - 1][e.row] > level[m][e.col])
                throw CheckError("FiltrationNotPreserved",
                                 "differential raises the filtration level at degree " +
                                     std::to_string(m),
                                 total.spaces.label(m, e.col) + " -> " +
                                     total.spaces.label(m - 1, e.row));
}

namespace {

Subspace level_subspace(const FilteredComplex& f, std::size_t m, long p) {
    std::vector<SparseVec> gens;
    if (p >= 0)
        for (std::size_t i = 0; i < f.total.spaces.dim(m); ++i)
            if (long(f.level[m][i]) <= p) gens.push_back(vec_unit(i));
    return Subspace::span(f.total.spaces.dim(m), gens);
}

}  // namespace

SpectralSequence spectral_sequence(const FilteredComplex& f, std::size_t pages) {
    const std::size_t n = f.total.spaces.truncation;
    const long plevels = long(f.levels);
    SpectralSequence out;
    if (n == 0) {
        out.report.converged = true;
        return out;
    }
    const std::size_t top = n - 1;  // reliable range for entries

    // F_p at every degree we touch (including degree n for the boundary data)
    std::vector<std::vector<Subspace>> filt(n + 1);
    for (std::size_t m = 0; m <= n; ++m)
        for (long p = -1; p < plevels; ++p) filt[m].push_back(level_subspace(f, m, p));
    auto fsub = [&](std::size_t m, long p) -> const Subspace& {
        p = std::min(p, plevels - 1);
        return filt[m][std::size_t(std::max(p, long(-1)) + 1)];
    };

    // Z^r_{p, m} = F_p intersect d^{-1}(F_{p-r});  r = 0..pages+1
    // cached as z[r][m][p]
    std::vector<std::vector<std::vector<Subspace>>> z(
        pages + 2, std::vector<std::vector<Subspace>>(n + 1));
    for (std::size_t r = 0; r <= pages + 1; ++r)
        for (std::size_t m = 0; m <= n; ++m)
            for (long p = 0; p < plevels; ++p) {
                if (m == 0) {
                    z[r][m].push_back(fsub(0, p));
                } else {
                    Subspace pre = preimage(f.total.d[m], fsub(m - 1, p - long(r)));
                    z[r][m].push_back(intersect(fsub(m, p), pre));
                }
            }

    auto boundary_part = [&](std::size_t r, std::size_t m, long p) {
        // E^0 is the associated graded: boundary is F_{p-1} alone.
        if (r == 0) return fsub(m, p - 1);
        // Z^{r-1}_{p-1, m} + d(Z^{r-1}_{p+r-1, m+1})
        Subspace bnd = p >= 1 ? z[r - 1][m][std::size_t(p - 1)]
                              : Subspace::zero(f.total.spaces.dim(m));
        if (m + 1 <= n) {
            const long src = p + long(r) - 1;
            if (src >= 0) {
                // past the top level F_src is everything, but the d-target
                // constraint stays at F_p
                Subspace zsrc = src < plevels ? z[r - 1][m + 1][std::size_t(src)]
                                              : preimage(f.total.d[m + 1], fsub(m, p));
                std::vector<SparseVec> gens;
                for (const auto& v : zsrc.basis()) gens.push_back(f.total.d[m + 1].apply(v));
                bnd = sum(bnd, Subspace::span(f.total.spaces.dim(m), gens));
            }
        }
        return bnd;
    };

    std::vector<std::size_t> h_tot;
    {
        HomologyTable h = homology(f.total);
        h_tot = h.dims();
    }

    struct EntryData {
        Subspace zz, bb;
    };
    std::vector<std::map<long, EntryData>> prev_entries;  // indexed by degree m, then p

    for (std::size_t r = 0; r <= pages; ++r) {
        SSPage page;
        page.r = r;
        std::vector<std::map<long, EntryData>> entries(top + 1);
        for (std::size_t m = 0; m <= top; ++m) {
            for (long p = 0; p < plevels; ++p) {
                EntryData e{z[r][m][std::size_t(p)], boundary_part(r, m, p)};
                const std::size_t dim = subquotient_dim(e.zz, e.bb);
                if (dim > 0) page.dims[{p, long(m) - p}] = dim;
                entries[m][p] = std::move(e);
            }
        }
        for (std::size_t m = 1; m <= top; ++m) {
            for (long p = 0; p < plevels; ++p) {
                const long tp = p - long(r);
                if (tp < 0 || tp >= plevels) continue;
                if (page.dim(p, long(m) - p) == 0) continue;
                const EntryData& src = entries[m].at(p);
                const EntryData& dst = entries[m - 1].at(tp);
                page.differentials[{p, long(m) - p}] =
                    induced_map(f.total.d[m], src.zz, src.bb, dst.zz, dst.bb);
            }
        }
        // d^r o d^r = 0 wherever composable
        for (std::size_t m = 2; m <= top; ++m)
            for (long p = 0; p < plevels; ++p) {
                auto it1 = page.differentials.find({p, long(m) - p});
                auto it2 = page.differentials.find({p - long(r), long(m - 1) - (p - long(r))});
                if (it1 != page.differentials.end() && it2 != page.differentials.end())
                    if (!(it2->second * it1->second).is_zero())
                        throw CheckError("IdentityViolation", "d^r d^r != 0 on page " + std::to_string(r));
            }
        // E^{r+1} = homology of (E^r, d^r), dimension-wise. The incoming
        // differential at total degree `top` would originate beyond the
        // truncation window, so the check stops one degree lower.
        if (r >= 1 && !prev_entries.empty()) {
            const SSPage& prev = out.pages.back();
            for (std::size_t m = 0; m + 1 <= top; ++m)
                for (long p = 0; p < plevels; ++p) {
                    const std::size_t here = page.dim(p, long(m) - p);
                    std::size_t rank_out = 0, rank_in = 0;
                    auto ito = prev.differentials.find({p, long(m) - p});
                    if (ito != prev.differentials.end()) rank_out = rank(ito->second);
                    auto iti = prev.differentials.find(
                        {p + long(r) - 1, long(m + 1) - (p + long(r) - 1)});
                    if (iti != prev.differentials.end()) rank_in = rank(iti->second);
                    const std::size_t want = prev.dim(p, long(m) - p) - rank_out - rank_in;
                    if (here != want)
                        throw CheckError("IdentityViolation",
                                         "E^{r+1} is not the homology of (E^r, d^r) at (" +
                                             std::to_string(p) + "," + std::to_string(long(m) - p) + ")");
                }
        }
        prev_entries = std::move(entries);
        out.pages.push_back(std::move(page));
    }

    // convergence report against the direct homology of the total complex
    const SSPage& last = out.pages.back();
    out.report.homology_totals = h_tot;
    out.report.einf_totals.assign(top + 1, 0);
    for (std::size_t m = 0; m <= top; ++m)
        for (long p = 0; p < plevels; ++p) out.report.einf_totals[m] += last.dim(p, long(m) - p);
    out.report.converged = true;
    for (std::size_t m = 0; m + 1 <= top; ++m)
        if (out.report.einf_totals[m] != h_tot[m]) out.report.converged = false;
    return out;
}

FilteredComplex filtered_total(const TriangularSModule& t) {
    TotalSModule tot = totalize(t);
    const std::size_t n = tot.module.spaces.truncation;
    const bool horiz = t.orientation == TriangularSModule::Orientation::horizontal;
    std::vector<std::vector<std::size_t>> level(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        level[m].assign(tot.module.spaces.dim(m), 0);
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t lo = tot.offsets[m][p];
            const std::size_t hi = p + 1 <= m ? tot.offsets[m][p + 1] : tot.module.spaces.dim(m);
            for (std::size_t i = lo; i < hi; ++i) level[m][i] = horiz ? p : m - p;
        }
    }
    return FilteredComplex(tot.module.chain_view(), std::move(level));
}

FilteredComplex filtered_bicomplex(const TotalizedMixed& t, const ParachainBicomplex& c,
                                   bool by_columns) {
    (void)c;
    const std::size_t n = t.complex.spaces.truncation;
    std::vector<std::vector<std::size_t>> level(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        level[m].assign(t.complex.spaces.dim(m), 0);
        for (std::size_t p = 0; p <= m; ++p) {
            const std::size_t lo = t.offsets[m][p];
            const std::size_t hi = p + 1 <= m ? t.offsets[m][p + 1] : t.complex.spaces.dim(m);
            for (std::size_t i = lo; i < hi; ++i) level[m][i] = by_columns ? p : m - p;
        }
    }
    return FilteredComplex(t.complex.b_complex(), std::move(level));
}

}  // namespace cychom
