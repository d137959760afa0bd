#pragma once

#include <map>

#include "cychom/bicomplex.hpp"
#include "cychom/chain.hpp"

namespace cychom {

/// Chain complex filtered by basis blocks: level[m][i] is the filtration
/// level of the i-th basis vector of Tot_m, and F_p is spanned by the vectors
/// of level <= p. The constructor checks d(F_p) <= F_p and throws
/// FiltrationNotPreserved with a witness entry otherwise.
struct FilteredComplex {
    ChainComplex total;
    std::vector<std::vector<std::size_t>> level;
    std::size_t levels = 0;

    FilteredComplex(ChainComplex total_, std::vector<std::vector<std::size_t>> level_);
};

/// One page of a spectral sequence. Entries are indexed by (p, q) with
/// p the filtration degree; only total degrees n = p + q <= N - 1 are stored.
struct SSPage {
    std::size_t r = 0;
    std::map<std::pair<long, long>, std::size_t> dims;
    // d^r : (p, q) -> (p - r, q + r - 1)
    std::map<std::pair<long, long>, SparseMatrix> differentials;

    std::size_t dim(long p, long q) const {
        auto it = dims.find({p, q});
        return it == dims.end() ? 0 : it->second;
    }
};

struct ConvergenceReport {
    // per total degree n <= N-1: sum of final-page dims vs dim H_n(Tot)
    std::vector<std::size_t> einf_totals;
    std::vector<std::size_t> homology_totals;
    bool converged = false;  // equality on n <= N-2
};

struct SpectralSequence {
    std::vector<SSPage> pages;  // r = 0 .. requested
    ConvergenceReport report;
};

/// Pages E^0..E^pages with differentials, plus the convergence report. Every
/// page is verified to satisfy d^r d^r = 0 and E^{r+1} = H(E^r, d^r)
/// dimension-wise.
SpectralSequence spectral_sequence(const FilteredComplex& f, std::size_t pages);

/// Filtration by columns of the total S-module of a horizontal triangular
/// S-module (level = p), or by rows of a vertical one (level = q).
FilteredComplex filtered_total(const TriangularSModule& t);

/// Filtration of a totalized mixed bicomplex by columns (level = p) or rows.
FilteredComplex filtered_bicomplex(const TotalizedMixed& t, const ParachainBicomplex& c,
                                   bool by_columns);

}  // namespace cychom
