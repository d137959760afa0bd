#include "cychom/linalg.hpp"

#include <algorithm>
#include <limits>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

// Sparse Gauss-Jordan over Q. Pivot choice is Markowitz-style: among the
// candidate entries of the active submatrix, minimize (rnnz-1)*(cnnz-1) with
// exact nonzero pivots, ties broken by (column, row) for determinism. The
// result (an RREF) is unique whatever the pivot order, so canonicality does
// not depend on this heuristic; fill-in does.
struct Eliminator {
    std::size_t ncols;
    std::vector<SparseVec> rows;
    std::vector<char> pivoted;
    std::vector<std::size_t> colcount;  // nnz per column over non-pivot rows

    explicit Eliminator(std::size_t ncols_, std::vector<SparseVec> rows_)
        : ncols(ncols_), rows(std::move(rows_)), pivoted(rows.size(), 0), colcount(ncols_, 0) {
        for (const auto& r : rows)
            for (const auto& [c, v] : r) ++colcount[c];
    }

    // (row, col) of the chosen pivot, or nullopt when the active part is zero.
    std::optional<std::pair<std::size_t, std::size_t>> choose_pivot() const {
        bool found = false;
        std::size_t best_r = 0, best_c = 0;
        unsigned long long best_score = std::numeric_limits<unsigned long long>::max();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (pivoted[r] || rows[r].empty()) continue;
            const auto rn = static_cast<unsigned long long>(rows[r].size() - 1);
            for (const auto& [c, v] : rows[r]) {
                unsigned long long score = rn * static_cast<unsigned long long>(colcount[c] - 1);
                if (!found || score < best_score ||
                    (score == best_score && (c < best_c || (c == best_c && r < best_r)))) {
                    found = true;
                    best_score = score;
                    best_r = r;
                    best_c = c;
                }
            }
        }
        if (!found) return std::nullopt;
        return std::make_pair(best_r, best_c);
    }

    void update_row(std::size_t r, const Rational& factor, const SparseVec& pivot_row) {
        for (const auto& [c, v] : rows[r]) --colcount[c];
        vec_axpy(rows[r], factor, pivot_row);
        for (const auto& [c, v] : rows[r]) ++colcount[c];
    }

    // Forward phase; returns (row index, pivot col) pairs.
    std::vector<std::pair<std::size_t, std::size_t>> forward() {
        std::vector<std::pair<std::size_t, std::size_t>> pivots;
        while (auto p = choose_pivot()) {
            auto [pr, pc] = *p;
            Rational pval = vec_at(rows[pr], pc);
            if (pval != 1) {
                Rational inv = 1 / pval;
                for (auto& [c, v] : rows[pr]) v *= inv;
            }
            for (const auto& [c, v] : rows[pr]) --colcount[c];
            pivoted[pr] = 1;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (pivoted[r] || rows[r].empty()) continue;
                Rational x = vec_at(rows[r], pc);
                if (x != 0) update_row(r, -x, rows[pr]);
            }
            pivots.emplace_back(pr, pc);
        }
        return pivots;
    }
};

RowEchelon rref_of_rows(std::vector<SparseVec> input_rows, std::size_t ncols) {
    // Phase 1: Markowitz forward elimination controls fill-in and leaves an
    // independent spanning set of the row space (Markowitz pivots need not be
    // leading entries, so this is not yet an echelon form).
    Eliminator e(ncols, std::move(input_rows));
    auto pivots = e.forward();
    std::vector<SparseVec> rows;
    rows.reserve(pivots.size());
    for (const auto& [r, c] : pivots) rows.push_back(std::move(e.rows[r]));

    // Phase 2: classic left-to-right Gauss-Jordan on the rank many survivors;
    // its output is the unique RREF of the original row space.
    RowEchelon out;
    std::size_t next = 0;
    for (std::size_t c = 0; c < ncols && next < rows.size(); ++c) {
        std::size_t piv = rows.size();
        for (std::size_t i = next; i < rows.size(); ++i) {
            if (!rows[i].empty() && rows[i].front().first == c) {
                piv = i;
                break;
            }
        }
        if (piv == rows.size()) continue;
        std::swap(rows[next], rows[piv]);
        Rational lead = rows[next].front().second;
        if (lead != 1) {
            Rational inv = 1 / lead;
            for (auto& [cc, v] : rows[next]) v *= inv;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == next) continue;
            Rational x = vec_at(rows[i], c);
            if (x != 0) vec_axpy(rows[i], -x, rows[next]);
        }
        out.pivot_cols.push_back(c);
        ++next;
    }
    out.rank = next;
    rows.resize(next);
    out.rows = std::move(rows);
    return out;
}

}  // namespace

RowEchelon rref(const SparseMatrix& m) { return rref_of_rows(m.to_rows(), m.cols()); }

std::size_t rank(const SparseMatrix& m) {
    Eliminator e(m.cols(), m.to_rows());
    return e.forward().size();
}

SparseMatrix inverse(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw CheckError("IdentityViolation", "inverse of non-square matrix");
    const std::size_t n = m.rows();
    RowEchelon e = rref(hstack({m, SparseMatrix::identity(n)}));
    if (e.rank != n) throw CheckError("IdentityViolation", "matrix is singular");
    std::vector<Triplet> ts;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [c, v] : e.rows[i])
            if (c >= n) ts.push_back({i, c - n, v});
    return SparseMatrix::from_triplets(n, n, std::move(ts));
}

Subspace Subspace::full(std::size_t ambient) {
    std::vector<SparseVec> gens;
    gens.reserve(ambient);
    for (std::size_t i = 0; i < ambient; ++i) gens.push_back(vec_unit(i));
    return span(ambient, gens);
}

Subspace Subspace::span(std::size_t ambient, const std::vector<SparseVec>& gens) {
    for (const auto& g : gens)
        for (const auto& [i, v] : g)
            if (i >= ambient) throw CheckError("IndexOutOfRange", "generator index beyond ambient dim");
    RowEchelon e = rref_of_rows(gens, ambient);
    Subspace s(ambient);
    s.basis_ = std::move(e.rows);
    s.pivots_ = std::move(e.pivot_cols);
    return s;
}

SparseVec Subspace::reduce(const SparseVec& v, std::vector<Rational>* coeffs) const {
    if (coeffs) coeffs->assign(basis_.size(), Rational(0));
    SparseVec r = v;
    // Echelon basis vectors vanish at each other's pivots, so one pass suffices.
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        Rational x = vec_at(r, pivots_[k]);
        if (x != 0) {
            vec_axpy(r, -x, basis_[k]);
            if (coeffs) (*coeffs)[k] = x;
        }
    }
    return r;
}

bool Subspace::contains(const Subspace& other) const { return !first_vector_outside(other).has_value(); }

std::optional<std::size_t> Subspace::first_vector_outside(const Subspace& other) const {
    for (std::size_t k = 0; k < other.basis_.size(); ++k)
        if (!contains(other.basis_[k])) return k;
    return std::nullopt;
}

Subspace kernel(const SparseMatrix& m) {
    RowEchelon e = rref(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = 1;
    std::vector<SparseVec> gens;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        SparseVec v = vec_unit(f);
        for (std::size_t i = 0; i < e.rows.size(); ++i) {
            Rational x = vec_at(e.rows[i], f);
            if (x != 0) vec_axpy(v, Rational(1), SparseVec{{e.pivot_cols[i], -x}});
        }
        gens.push_back(std::move(v));
    }
    return Subspace::span(m.cols(), gens);
}

Subspace image(const SparseMatrix& m) { return Subspace::span(m.rows(), m.transpose().to_rows()); }

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw CheckError("ShapeMismatch", "subspace sum ambient mismatch");
    std::vector<SparseVec> gens = a.basis();
    gens.insert(gens.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient_dim(), gens);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw CheckError("ShapeMismatch", "subspace intersection ambient mismatch");
    // Solve A x = B y; intersection is spanned by the A x parts.
    std::vector<Triplet> ts;
    for (std::size_t k = 0; k < a.dim(); ++k)
        for (const auto& [i, v] : a.basis()[k]) ts.push_back({i, k, v});
    for (std::size_t k = 0; k < b.dim(); ++k)
        for (const auto& [i, v] : b.basis()[k]) ts.push_back({i, a.dim() + k, -v});
    SparseMatrix ab = SparseMatrix::from_triplets(a.ambient_dim(), a.dim() + b.dim(), std::move(ts));
    Subspace ker = kernel(ab);
    std::vector<SparseVec> gens;
    for (const auto& kv : ker.basis()) {
        SparseVec w;
        for (const auto& [idx, x] : kv) {
            if (idx >= a.dim()) break;
            vec_axpy(w, x, a.basis()[idx]);
        }
        if (!vec_is_zero(w)) gens.push_back(std::move(w));
    }
    return Subspace::span(a.ambient_dim(), gens);
}

Subspace preimage(const SparseMatrix& m, const Subspace& target) {
    if (m.rows() != target.ambient_dim())
        throw CheckError("ShapeMismatch", "preimage target ambient mismatch");
    // residual(v) = v - sum_k v[pivot_k] basis_k is linear with kernel = target
    std::vector<Triplet> ts;
    for (std::size_t i = 0; i < m.rows(); ++i) ts.push_back({i, i, Rational(1)});
    for (std::size_t k = 0; k < target.dim(); ++k)
        for (const auto& [i, v] : target.basis()[k]) ts.push_back({i, target.pivots()[k], -v});
    SparseMatrix residual = SparseMatrix::from_triplets(m.rows(), m.rows(), std::move(ts));
    return kernel(residual * m);
}

std::size_t subquotient_dim(const Subspace& z, const Subspace& b) {
    if (auto k = z.first_vector_outside(b))
        throw CheckError("NotContained", "denominator basis vector #" + std::to_string(*k) +
                                             " lies outside the numerator");
    return z.dim() - b.dim();
}

Quotient::Quotient(Subspace z, Subspace b) : z_(std::move(z)), b_(std::move(b)) {
    if (z_.ambient_dim() != b_.ambient_dim())
        throw CheckError("ShapeMismatch", "quotient ambient mismatch");
    std::vector<SparseVec> b_coords;
    b_coords.reserve(b_.dim());
    for (std::size_t k = 0; k < b_.dim(); ++k) {
        std::vector<Rational> c;
        SparseVec r = z_.reduce(b_.basis()[k], &c);
        if (!vec_is_zero(r))
            throw CheckError("NotContained", "denominator basis vector #" + std::to_string(k) +
                                                 " lies outside the numerator");
        b_coords.push_back(vec_from_dense(c));
    }
    b_in_z_ = rref_of_rows(std::move(b_coords), z_.dim());
    std::vector<char> is_pivot(z_.dim(), 0);
    for (std::size_t c : b_in_z_.pivot_cols) is_pivot[c] = 1;
    for (std::size_t i = 0; i < z_.dim(); ++i)
        if (!is_pivot[i]) free_.push_back(i);
}

std::vector<Rational> Quotient::coords(const SparseVec& v) const {
    std::vector<Rational> c;
    SparseVec r = z_.reduce(v, &c);
    if (!vec_is_zero(r))
        throw CheckError("NotContained", "vector lies outside the numerator subspace");
    for (std::size_t k = 0; k < b_in_z_.rows.size(); ++k) {
        Rational x = c[b_in_z_.pivot_cols[k]];
        if (x != 0)
            for (const auto& [j, w] : b_in_z_.rows[k]) c[j] -= x * w;
    }
    std::vector<Rational> out;
    out.reserve(free_.size());
    for (std::size_t f : free_) out.push_back(c[f]);
    return out;
}

SparseMatrix induced_map(const SparseMatrix& m, const Subspace& src_z, const Subspace& src_b,
                         const Subspace& dst_z, const Subspace& dst_b) {
    for (std::size_t k = 0; k < src_z.dim(); ++k)
        if (!dst_z.contains(m.apply(src_z.basis()[k])))
            throw CheckError("NotAChainMapOnSubspaces",
                             "image of numerator basis vector escapes the target numerator",
                             "srcZ basis #" + std::to_string(k));
    for (std::size_t k = 0; k < src_b.dim(); ++k)
        if (!dst_b.contains(m.apply(src_b.basis()[k])))
            throw CheckError("NotAChainMapOnSubspaces",
                             "image of denominator basis vector escapes the target denominator",
                             "srcB basis #" + std::to_string(k));
    Quotient src(src_z, src_b), dst(dst_z, dst_b);
    std::vector<Triplet> ts;
    for (std::size_t j = 0; j < src.dim(); ++j) {
        std::vector<Rational> col = dst.coords(m.apply(src.representative(j)));
        for (std::size_t i = 0; i < col.size(); ++i)
            if (col[i] != 0) ts.push_back({i, j, col[i]});
    }
    return SparseMatrix::from_triplets(dst.dim(), src.dim(), std::move(ts));
}

}  // namespace cychom
