#pragma once

#include "cychom/pipelines.hpp"

namespace cychom {

/// Q[x_1..x_k] truncated above the top weight: basis monomials ordered by
/// weight then lexicographically, products past the top weight cut to zero.
struct PolyAlgebra {
    std::size_t vars = 0;
    std::size_t top_weight = 0;
    Algebra algebra;
    std::vector<std::vector<std::size_t>> exponents;  // per basis index

    std::size_t index_of(const std::vector<std::size_t>& e) const;
};

PolyAlgebra poly_algebra(std::size_t vars, std::size_t top_weight);

/// Finite-order linear action on affine space together with the induced
/// action on polynomials (substitution by the inverse-transpose on the
/// variables; pullback of functions).
struct LinearAction {
    std::vector<SparseMatrix> space;  // M_g on Q^k
    GroupAction on_polynomials;
};

LinearAction linear_action(const PolyAlgebra& a, const FiniteGroup& g,
                           std::vector<SparseMatrix> space_matrices);

/// Algebraic differential forms on the fixed subspace X^phi = ker(M_phi - 1),
/// weight-graded with weight(dt) = weight(t) = 1. Form bases are pairs
/// (t-monomial, strictly increasing dt-subset), ordered monomial-major.
class FixedForms {
public:
    // sum of (t-monomial, dt-subset) basis elements with rational weights
    struct Form {
        std::vector<std::pair<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, Rational>>
            terms;
    };

    FixedForms(const PolyAlgebra& a, const SparseMatrix& space_phi);

    std::size_t fixed_dim() const { return fixed_dim_; }
    const Subspace& fixed_space() const { return fixed_space_; }
    std::size_t top_weight() const { return a_->top_weight; }

    /// dim of Omega^q in weight w.
    std::size_t form_dim(std::size_t w, std::size_t q) const;

    /// The de Rham mixed complex of the weight-w piece, chain degree q =
    /// form degree, truncated at degree n: (Omega^._w, b = 0, B = d).
    MixedComplex de_rham(std::size_t w, std::size_t n) const;

    /// Restriction of the algebra basis monomial to the fixed subspace, as a
    /// weight-homogeneous polynomial form of degree 0.
    Form restrict_poly(std::size_t algebra_idx) const;

    /// Pullback action on forms of a space matrix preserving the fixed
    /// subspace: per (w, q) matrix family usable with de_rham(w, n).
    std::vector<SparseMatrix> form_action(const SparseMatrix& space_g, std::size_t w,
                                          std::size_t n) const;

    /// Twisted HKR map alpha^phi on the weight-w piece: C_m(A)_w -> Omega^m_w,
    /// a^0 (x) .. (x) a^m -> (1/m!) r(a^0) d r(a^1) ... d r(a^m). The
    /// parachain-map property (alpha b = 0 and alpha B = d alpha) is
    /// machine-checked (NotAParachainMap otherwise).
    GradedMap hkr_map(const TwistedAlgebraCyclic& xa) const;

    Form wedge(const Form& x, const Form& y) const;
    Form exterior_d(const Form& x) const;
    SparseVec form_coords(const Form& x, std::size_t w, std::size_t q) const;

private:
    const PolyAlgebra* a_;
    std::size_t fixed_dim_ = 0;
    Subspace fixed_space_;
    // t-monomials by weight: tmons_[w] lexicographic
    std::vector<std::vector<std::vector<std::size_t>>> tmons_;
    std::size_t tmon_index(const std::vector<std::size_t>& e) const;
};

/// Weightwise quasi-isomorphism certificate for alpha^phi plus the full
/// comparison of the Omega-side models against the direct class component.
struct VarietiesReport {
    std::size_t class_rep = 0;
    std::size_t weight = 0;
    std::vector<std::size_t> direct_hc;
    std::vector<std::size_t> flat_model_hc;       // Tot(C-flat(Gamma_phi, Omega))
    std::vector<std::size_t> invariant_model_hc;  // Omega^{Gamma_phi}
    bool hkr_quasi_iso = false;  // alpha^phi iso on b-homology, reliable range
    bool hc_equal = false;       // all sides agree on degrees <= N-2
    std::vector<std::pair<std::string, bool>> checks;
};

std::vector<VarietiesReport> varieties_pipeline(const PolyAlgebra& a, const FiniteGroup& g,
                                                const LinearAction& act, std::size_t phi,
                                                std::size_t n);

}  // namespace cychom
