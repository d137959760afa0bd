#pragma once

#include <cstddef>
#include <vector>

#include "cychom/rational.hpp"

namespace cychom {

struct Triplet {
    std::size_t row;
    std::size_t col;
    Rational val;
};

/// Immutable sparse matrix over the rationals. Entries are kept canonically
/// sorted (row-major), with no stored zeros and no duplicate positions.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    /// Sums duplicate positions, drops zeros, sorts. The one entry point that
    /// accepts unnormalized data.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> ts);

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

    /// Permutation matrix P with P * e_j = e_{perm[j]}.
    static SparseMatrix permutation(const std::vector<std::size_t>& perm);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    const std::vector<Triplet>& entries() const { return entries_; }

    Rational at(std::size_t r, std::size_t c) const;

    /// Row r as a sparse vector over column indices.
    SparseVec row(std::size_t r) const;
    /// All rows at once (cheap single pass).
    std::vector<SparseVec> to_rows() const;
    /// All columns at once.
    std::vector<SparseVec> to_cols() const;

    SparseVec apply(const SparseVec& v) const;                 // M * v
    std::vector<Rational> apply_dense(const std::vector<Rational>& v) const;

    SparseMatrix operator*(const SparseMatrix& other) const;
    SparseMatrix operator+(const SparseMatrix& other) const;
    SparseMatrix operator-(const SparseMatrix& other) const;
    SparseMatrix scaled(const Rational& c) const;
    SparseMatrix transpose() const;

    bool operator==(const SparseMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_ || entries_.size() != other.entries_.size())
            return false;
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const auto& a = entries_[k];
            const auto& b = other.entries_[k];
            if (a.row != b.row || a.col != b.col || a.val != b.val) return false;
        }
        return true;
    }
    bool operator!=(const SparseMatrix& other) const { return !(*this == other); }

    /// First nonzero entry of M - N, if any; used to extract witnesses.
    /// Returns true and fills (r, c) when the matrices differ.
    bool first_difference(const SparseMatrix& other, std::size_t& r, std::size_t& c) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Triplet> entries_;  // row-major sorted

    friend SparseMatrix hstack(const std::vector<SparseMatrix>& blocks);
    friend SparseMatrix vstack(const std::vector<SparseMatrix>& blocks);
};

/// Horizontal/vertical concatenation; all blocks must agree on the shared dimension.
SparseMatrix hstack(const std::vector<SparseMatrix>& blocks);
SparseMatrix vstack(const std::vector<SparseMatrix>& blocks);

/// Block-diagonal assembly.
SparseMatrix block_diag(const std::vector<SparseMatrix>& blocks);

/// Kronecker product, basis of X (x) Y enumerated x-major: (i,j) -> i*dimY + j.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace cychom
