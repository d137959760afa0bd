#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cychom/graded.hpp"
#include "cychom/linalg.hpp"

namespace cychom {

/// Chain complex (C_., d), d of degree -1, with d^2 = 0 machine-checked at
/// construction. d[m] : C_m -> C_{m-1} for m = 1..N; d[0] is a 0 x dim(C_0)
/// sentinel so families can be indexed uniformly by source degree.
struct ChainComplex {
    GradedModule spaces;
    std::vector<SparseMatrix> d;

    ChainComplex(GradedModule spaces_, std::vector<SparseMatrix> d_);
};

struct HomologyEntry {
    std::size_t degree = 0;
    std::size_t dim = 0;
    std::vector<SparseVec> representatives;  // canonical cycle representatives
};

/// Exact Betti-type output on the reliable range 0..N-1. Degree n uses only
/// the differentials in degrees n and n+1.
struct HomologyTable {
    std::size_t reliable_to = 0;
    std::vector<HomologyEntry> entries;

    std::vector<std::size_t> dims() const;
};

HomologyTable homology(const ChainComplex& c);

/// Mixed complex (C_., b, B): b^2 = B^2 = bB + Bb = 0 on all representable
/// degrees. B[m] : C_m -> C_{m+1} for m = 0..N-1.
struct MixedComplex {
    GradedModule spaces;
    std::vector<SparseMatrix> b;
    std::vector<SparseMatrix> B;

    MixedComplex(GradedModule spaces_, std::vector<SparseMatrix> b_, std::vector<SparseMatrix> B_);

    ChainComplex b_complex() const;  // (C_., b)
};

/// Parachain complex: b^2 = B^2 = 0 and bB + Bb = 1 - T with T invertible,
/// commuting with b and B.
struct ParachainComplex {
    GradedModule spaces;
    std::vector<SparseMatrix> b;
    std::vector<SparseMatrix> B;
    std::vector<SparseMatrix> T;

    ParachainComplex(GradedModule spaces_, std::vector<SparseMatrix> b_,
                     std::vector<SparseMatrix> B_, std::vector<SparseMatrix> T_);

    static ParachainComplex from_mixed(const MixedComplex& m);

    bool is_mixed() const;                    // T = 1 in all degrees
    MixedComplex as_mixed() const;            // throws IdentityViolation when T != 1
    ChainComplex b_complex() const;
};

/// Para-S-module: d of degree -1, S of degree -2, T of degree 0, pairwise
/// commuting with d^2 = (1 - T) S.
struct ParaSModule {
    GradedModule spaces;
    std::vector<SparseMatrix> d;
    std::vector<SparseMatrix> S;  // S[m] : C_m -> C_{m-2}, m = 2..N
    std::vector<SparseMatrix> T;

    ParaSModule(GradedModule spaces_, std::vector<SparseMatrix> d_, std::vector<SparseMatrix> S_,
                std::vector<SparseMatrix> T_);

    bool is_s_module() const;        // T = 1, equivalently d^2 = 0
    ChainComplex chain_view() const; // requires is_s_module()
};

/// The cyclic complex C-natural of a (para)chain complex, with the summand
/// bookkeeping C^nat_m = C_m + C_{m-2} + ... kept explicit so that the
/// periodicity operator is a literal coordinate projection.
struct CyclicComplex {
    ParaSModule module;
    // offsets[m][j] = first coordinate of the summand C_{m-2j} inside C^nat_m
    std::vector<std::vector<std::size_t>> offsets;
};

CyclicComplex cyclic_complex(const ParachainComplex& c);
CyclicComplex cyclic_complex(const MixedComplex& c);

/// Cyclic homology of a mixed complex: homology of its cyclic complex.
HomologyTable hc(const MixedComplex& c);

struct HpEstimate {
    bool stabilized = false;
    std::size_t dim = 0;
    std::string note;
};

/// Induced periodicity matrices on homology and the HP stabilization verdict.
struct SStabilization {
    HomologyTable table;
    // s_on_homology[n] : H_{n+2} -> H_n in canonical bases, for n <= reliable-3... n+2 reliable
    std::vector<SparseMatrix> s_on_homology;
    HpEstimate hp[2];
};

SStabilization s_stabilization(const ParaSModule& p);

/// Internal helpers shared by the identity-checking constructors.
namespace detail {
/// Verifies lhs == rhs, else throws IdentityViolation naming the identity and
/// the offending basis column of `spaces` at degree m.
void expect_equal(const SparseMatrix& lhs, const SparseMatrix& rhs, const GradedModule& spaces,
                  std::size_t m, const std::string& identity);
void expect_invertible(const SparseMatrix& t, const GradedModule& spaces, std::size_t m,
                       const std::string& what);
void expect_family_shape(const std::vector<SparseMatrix>& mats, const GradedModule& spaces,
                         int degree, const std::string& what);
}  // namespace detail

}  // namespace cychom
