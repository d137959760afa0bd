#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cychom/sparse.hpp"

namespace cychom {

/// Reduced row-echelon form. The RREF of a matrix is unique, so this doubles
/// as the canonical representation of its row space.
struct RowEchelon {
    std::size_t rank = 0;
    std::vector<SparseVec> rows;        // one per pivot, sorted by pivot column, pivot value 1
    std::vector<std::size_t> pivot_cols;
};

RowEchelon rref(const SparseMatrix& m);
std::size_t rank(const SparseMatrix& m);

/// Exact inverse of a square matrix; throws IdentityViolation when singular.
SparseMatrix inverse(const SparseMatrix& m);

/// Subspace of Q^ambient with its unique reduced-echelon basis. Equality of
/// subspaces is syntactic equality of bases.
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(std::size_t ambient) { return Subspace(ambient); }
    static Subspace full(std::size_t ambient);
    static Subspace span(std::size_t ambient, const std::vector<SparseVec>& gens);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<SparseVec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Remainder of v after eliminating the pivot coordinates against the basis.
    /// Zero iff v lies in the subspace. When coeffs is non-null it receives the
    /// coordinates of (v - remainder) in the echelon basis.
    SparseVec reduce(const SparseVec& v, std::vector<Rational>* coeffs = nullptr) const;

    bool contains(const SparseVec& v) const { return vec_is_zero(reduce(v)); }
    bool contains(const Subspace& other) const;
    /// Index of the first basis vector of `other` outside this subspace, if any.
    std::optional<std::size_t> first_vector_outside(const Subspace& other) const;

    bool operator==(const Subspace& other) const {
        return ambient_ == other.ambient_ && basis_ == other.basis_;
    }

private:
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    std::size_t ambient_ = 0;
    std::vector<SparseVec> basis_;
    std::vector<std::size_t> pivots_;
};

Subspace kernel(const SparseMatrix& m);
Subspace image(const SparseMatrix& m);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
/// { v : m v ∈ target }.
Subspace preimage(const SparseMatrix& m, const Subspace& target);

/// dim(Z/B); throws NotContained when B ⊄ Z.
std::size_t subquotient_dim(const Subspace& z, const Subspace& b);

/// Canonical coordinates on a subquotient Z/B. The quotient basis is the set
/// of classes of Z's echelon basis vectors whose Z-coordinates are free with
/// respect to the echelonized coordinate image of B.
class Quotient {
public:
    Quotient() = default;
    Quotient(Subspace z, Subspace b);

    std::size_t dim() const { return free_.size(); }
    const Subspace& numerator() const { return z_; }
    const Subspace& denominator() const { return b_; }

    /// Coordinates of [v] in the canonical quotient basis; NotContained if v ∉ Z.
    std::vector<Rational> coords(const SparseVec& v) const;

    /// Canonical representative of the i-th quotient basis vector.
    const SparseVec& representative(std::size_t i) const { return z_.basis()[free_[i]]; }

private:
    Subspace z_, b_;
    RowEchelon b_in_z_;               // B expressed in Z-coordinates, echelonized
    std::vector<std::size_t> free_;   // non-pivot Z-coordinates
};

/// Matrix of the map induced by m on subquotients, in canonical bases.
/// Throws NotAChainMapOnSubspaces (with a witness vector) when m fails to map
/// srcZ into dstZ or srcB into dstB.
SparseMatrix induced_map(const SparseMatrix& m, const Subspace& src_z, const Subspace& src_b,
                         const Subspace& dst_z, const Subspace& dst_b);

}  // namespace cychom
