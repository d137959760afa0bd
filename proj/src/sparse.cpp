#include "cychom/sparse.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> ts) {
    for (const auto& t : ts)
        if (t.row >= rows || t.col >= cols)
            throw CheckError("IndexOutOfRange",
                             "triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                                 ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    for (auto& t : ts) t.val.canonicalize();  // guard against raw mpq_class(n, d) literals
    std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    m.entries_.reserve(ts.size());
    for (auto& t : ts) {
        if (!m.entries_.empty() && m.entries_.back().row == t.row && m.entries_.back().col == t.col) {
            m.entries_.back().val += t.val;
            if (m.entries_.back().val == 0) m.entries_.pop_back();
        } else if (t.val != 0) {
            m.entries_.push_back(std::move(t));
        }
    }
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    m.entries_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.entries_.push_back({i, i, Rational(1)});
    return m;
}

SparseMatrix SparseMatrix::permutation(const std::vector<std::size_t>& perm) {
    std::vector<Triplet> ts;
    ts.reserve(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) ts.push_back({perm[j], j, Rational(1)});
    return from_triplets(perm.size(), perm.size(), std::move(ts));
}

Rational SparseMatrix::at(std::size_t r, std::size_t c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                               [](const Triplet& t, const std::pair<std::size_t, std::size_t>& p) {
                                   return t.row != p.first ? t.row < p.first : t.col < p.second;
                               });
    if (it != entries_.end() && it->row == r && it->col == c) return it->val;
    return Rational(0);
}

SparseVec SparseMatrix::row(std::size_t r) const {
    SparseVec out;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), r,
                               [](const Triplet& t, std::size_t rr) { return t.row < rr; });
    for (; it != entries_.end() && it->row == r; ++it) out.emplace_back(it->col, it->val);
    return out;
}

std::vector<SparseVec> SparseMatrix::to_rows() const {
    std::vector<SparseVec> out(rows_);
    for (const auto& t : entries_) out[t.row].emplace_back(t.col, t.val);
    return out;
}

std::vector<SparseVec> SparseMatrix::to_cols() const {
    std::vector<SparseVec> out(cols_);
    for (const auto& t : entries_) out[t.col].emplace_back(t.row, t.val);
    return out;
}

SparseVec SparseMatrix::apply(const SparseVec& v) const {
    std::vector<Rational> dense(cols_, Rational(0));
    for (const auto& [j, x] : v) {
        if (j >= cols_) throw CheckError("IndexOutOfRange", "vector index beyond matrix columns");
        dense[j] = x;
    }
    std::vector<Rational> acc(rows_, Rational(0));
    for (const auto& t : entries_)
        if (dense[t.col] != 0) acc[t.row] += t.val * dense[t.col];
    return vec_from_dense(acc);
}

std::vector<Rational> SparseMatrix::apply_dense(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw CheckError("IndexOutOfRange", "dense vector length mismatch");
    std::vector<Rational> out(rows_, Rational(0));
    for (const auto& t : entries_)
        if (v[t.col] != 0) out[t.row] += t.val * v[t.col];
    return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
    if (cols_ != other.rows_)
        throw CheckError("ShapeMismatch", "product of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                              " with " + std::to_string(other.rows_) + "x" +
                                              std::to_string(other.cols_));
    auto rhs_rows = other.to_rows();
    std::vector<Triplet> ts;
    std::vector<Rational> acc(other.cols_, Rational(0));
    std::vector<std::size_t> touched;
    std::size_t k = 0;
    while (k < entries_.size()) {
        std::size_t r = entries_[k].row;
        touched.clear();
        for (; k < entries_.size() && entries_[k].row == r; ++k) {
            const auto& t = entries_[k];
            for (const auto& [c, x] : rhs_rows[t.col]) {
                if (acc[c] == 0) touched.push_back(c);
                acc[c] += t.val * x;
            }
        }
        for (std::size_t c : touched) {
            if (acc[c] != 0) ts.push_back({r, c, acc[c]});
            acc[c] = 0;
        }
    }
    return from_triplets(rows_, other.cols_, std::move(ts));
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw CheckError("ShapeMismatch", "sum of mismatched shapes");
    std::vector<Triplet> ts = entries_;
    ts.insert(ts.end(), other.entries_.begin(), other.entries_.end());
    return from_triplets(rows_, cols_, std::move(ts));
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& other) const {
    return *this + other.scaled(Rational(-1));
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const {
    SparseMatrix m(rows_, cols_);
    if (c == 0) return m;
    m.entries_.reserve(entries_.size());
    for (const auto& t : entries_) m.entries_.push_back({t.row, t.col, c * t.val});
    return m;
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> ts;
    ts.reserve(entries_.size());
    for (const auto& t : entries_) ts.push_back({t.col, t.row, t.val});
    return from_triplets(cols_, rows_, std::move(ts));
}

bool SparseMatrix::first_difference(const SparseMatrix& other, std::size_t& r, std::size_t& c) const {
    SparseMatrix d = *this - other;
    if (d.is_zero()) return false;
    r = d.entries_.front().row;
    c = d.entries_.front().col;
    return true;
}

SparseMatrix hstack(const std::vector<SparseMatrix>& blocks) {
    if (blocks.empty()) return {};
    std::size_t rows = blocks.front().rows(), cols = 0;
    std::vector<Triplet> ts;
    for (const auto& b : blocks) {
        if (b.rows() != rows) throw CheckError("ShapeMismatch", "hstack row mismatch");
        for (const auto& t : b.entries()) ts.push_back({t.row, t.col + cols, t.val});
        cols += b.cols();
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(ts));
}

SparseMatrix vstack(const std::vector<SparseMatrix>& blocks) {
    if (blocks.empty()) return {};
    std::size_t cols = blocks.front().cols(), rows = 0;
    std::vector<Triplet> ts;
    for (const auto& b : blocks) {
        if (b.cols() != cols) throw CheckError("ShapeMismatch", "vstack column mismatch");
        for (const auto& t : b.entries()) ts.push_back({t.row + rows, t.col, t.val});
        rows += b.rows();
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(ts));
}

SparseMatrix block_diag(const std::vector<SparseMatrix>& blocks) {
    std::size_t rows = 0, cols = 0;
    std::vector<Triplet> ts;
    for (const auto& b : blocks) {
        for (const auto& t : b.entries()) ts.push_back({t.row + rows, t.col + cols, t.val});
        rows += b.rows();
        cols += b.cols();
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(ts));
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Triplet> ts;
    ts.reserve(a.nnz() * b.nnz());
    for (const auto& ta : a.entries())
        for (const auto& tb : b.entries())
            ts.push_back({ta.row * b.rows() + tb.row, ta.col * b.cols() + tb.col, ta.val * tb.val});
    return SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(ts));
}

}  // namespace cychom
