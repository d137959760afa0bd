#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cychom/linalg.hpp"

namespace cychom {

/// Finite group by explicit multiplication table; element 0 is the identity.
/// Associativity, identity and inverses are machine-checked at load.
class FiniteGroup {
public:
    FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<std::size_t>> table);

    static FiniteGroup trivial();
    static FiniteGroup cyclic(std::size_t n);
    static FiniteGroup symmetric3();

    std::size_t order() const { return elements_.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
    std::size_t inv(std::size_t a) const { return inverse_[a]; }
    std::size_t identity() const { return 0; }
    std::size_t power(std::size_t a, long k) const;
    std::size_t element_order(std::size_t a) const;

    const std::string& name(std::size_t i) const { return elements_[i]; }
    std::optional<std::size_t> index_of(const std::string& name) const;

private:
    std::vector<std::string> elements_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> inverse_;
};

/// Conjugacy class and centralizer of one element, with deterministic
/// orderings and the product formula |[phi]| * |Gamma_phi| = |Gamma| checked.
struct ConjugacyData {
    std::size_t phi = 0;
    std::vector<std::size_t> conj_class;     // ascending element indices
    FiniteGroup centralizer;                 // as a standalone group
    std::vector<std::size_t> embedding;      // centralizer index -> parent index
    std::size_t phi_in_centralizer = 0;
    std::size_t order_of_phi = 1;
};

ConjugacyData conjugacy_analysis(const FiniteGroup& g, std::size_t phi);

/// One representative per conjugacy class, ascending by smallest member.
std::vector<std::size_t> class_representatives(const FiniteGroup& g);

/// Finite-dimensional (optionally weight-graded) unital algebra by structure
/// constants. In the graded case multiplication adds weights exactly and
/// products over the top weight are truncated to zero; the per-weight pieces
/// stay exact.
class Algebra {
public:
    Algebra(std::vector<std::string> basis, std::vector<std::vector<SparseVec>> structure,
            SparseVec unit, std::vector<std::size_t> weights = {});

    static Algebra ground_field();
    static Algebra functions_on_points(std::size_t n);  // Q^n, pointwise product
    static Algebra group_algebra(const FiniteGroup& g);

    std::size_t dim() const { return basis_.size(); }
    const std::string& label(std::size_t i) const { return basis_[i]; }
    const SparseVec& unit() const { return unit_; }
    const SparseVec& product(std::size_t i, std::size_t j) const { return structure_[i][j]; }
    SparseVec multiply(const SparseVec& x, const SparseVec& y) const;

    bool graded() const { return graded_; }
    std::size_t weight(std::size_t i) const { return weights_[i]; }
    std::size_t top_weight() const { return top_weight_; }

private:
    std::vector<std::string> basis_;
    std::vector<std::vector<SparseVec>> structure_;
    SparseVec unit_;
    std::vector<std::size_t> weights_;
    bool graded_ = false;
    std::size_t top_weight_ = 0;
};

/// Action of a finite group by unital algebra automorphisms (one invertible
/// matrix per element, homomorphism and weight preservation checked).
class GroupAction {
public:
    GroupAction(const Algebra& a, const FiniteGroup& g, std::vector<SparseMatrix> matrices);

    static GroupAction trivial(const Algebra& a, const FiniteGroup& g);

    const SparseMatrix& matrix(std::size_t g) const { return matrices_[g]; }
    SparseVec apply(std::size_t g, const SparseVec& v) const { return matrices_[g].apply(v); }

private:
    std::vector<SparseMatrix> matrices_;
};

/// Crossed product A x| Gamma with basis {a_i u_g}, index i * |G| + g.
struct CrossedProduct {
    Algebra algebra;
    std::size_t coeff_dim = 0;
    std::size_t group_order = 0;

    std::size_t index(std::size_t i, std::size_t g) const { return i * group_order + g; }
    std::size_t coeff_of(std::size_t idx) const { return idx / group_order; }
    std::size_t group_of(std::size_t idx) const { return idx % group_order; }
};

CrossedProduct crossed_product(const Algebra& a, const FiniteGroup& g, const GroupAction& act);

}  // namespace cychom
