#pragma once

#include "cychom/crossed.hpp"
#include "cychom/specseq.hpp"

namespace cychom {

/// Finite-dimensional module over a finite group: one matrix per element.
struct GroupModule {
    std::size_t dim = 0;
    std::vector<SparseMatrix> mats;
};

/// Exact group homology H_*(G, M) over Q via the normalized chain complex
/// C_p(G, M), reliable in degrees <= n - 1.
HomologyTable group_homology(const FiniteGroup& g, const GroupModule& m, std::size_t n);

/// Mixed complex of G-modules: the action commutes with b and B (checked).
struct EquivariantMixed {
    MixedComplex complex;
    std::vector<std::vector<SparseMatrix>> action;  // action[g][m]

    EquivariantMixed(MixedComplex complex_, const FiniteGroup& g,
                     std::vector<std::vector<SparseMatrix>> action_);
};

/// Normalized chains C_p(G, M_q) = C_p(G) (x)_G M_q with basis
/// (1, psi_1..psi_p) (x) m_j; carries the group differential and lifts
/// coefficient operators blockwise.
class GroupChainTensor {
public:
    GroupChainTensor(FiniteGroup g, GradedModule coeff,
                     std::vector<std::vector<SparseMatrix>> action, std::size_t n);

    const FiniteGroup& group() const { return g_; }
    const BiGradedModule& spaces() const { return spaces_; }
    const BiFamily& partial() const { return partial_; }

    /// Blockwise lift of a coefficient family f[m] : M_m -> M_{m+dq}.
    BiFamily lift(const std::vector<SparseMatrix>& f, int dq) const;

    std::size_t tuple_index(const std::vector<std::size_t>& psis) const;

private:
    FiniteGroup g_;
    GradedModule coeff_;
    std::vector<std::vector<SparseMatrix>> action_;
    std::size_t n_ = 0;
    BiGradedModule spaces_;
    BiFamily partial_;
    std::vector<std::size_t> pw_;
};

/// Homogeneous equivariant group cochain, stored by its values on normalized
/// tuples (1, psi_1, .., psi_k).
struct GroupCochain {
    std::size_t degree = 0;
    std::vector<Rational> values;  // mixed-radix over (psi_1..psi_k)

    Rational eval(const FiniteGroup& g, const std::vector<std::size_t>& tuple) const;
    /// coboundary as a cochain of degree + 1
    GroupCochain coboundary(const FiniteGroup& g) const;
    bool is_cocycle(const FiniteGroup& g) const;
};

/// Cap product with a homogeneous equivariant cochain as a blockwise family
/// (p, q) -> (p - degree, q) on a group chain tensor. The Leibniz identity
/// d(u cap x) = u cap dx + (-1)^{p-k} (du) cap x is machine-checked.
BiFamily cap_family(const GroupChainTensor& t, const GroupCochain& u);

/// The phi-invariant (or Gamma-invariant) subcomplex of a parachain complex
/// under a finite-group action, with the averaging projector nu. On the
/// invariants bB + Bb = 0, so the result is a mixed complex.
struct InvariantComplex {
    MixedComplex complex;
    std::vector<Subspace> subspaces;
    std::vector<SparseMatrix> inclusion;    // inv_m -> ambient_m
    std::vector<SparseMatrix> restriction;  // ambient_m -> inv_m
    std::vector<SparseMatrix> projector;    // nu = inclusion o restriction

    /// Restriction of an equivariant ambient operator to the invariants.
    SparseMatrix restrict_op(const SparseMatrix& ambient_op, std::size_t m_src,
                             std::size_t m_dst) const;
};

InvariantComplex invariants_projector(const ParachainComplex& c,
                                      const std::vector<std::vector<SparseMatrix>>& action);

/// pi_0 : C^phi(Gamma) -> C(k) (1 on every group element in degree 0, zero
/// above) and its right inverse iota. pi_0 iota = id and the parachain-map
/// property of pi_0 are machine-checked.
struct PiZeroIota {
    GradedMap pi0;
    GradedMap iota;
};
PiZeroIota pi0_iota(const TwistedGroupCyclic& xg);

/// Antisymmetrization of group chains. The signed convention (sum over all
/// permutations of the m+1 entries weighted by sgn/(m+1)!) is the chain map;
/// the unsigned variant is kept for comparison only.
std::vector<SparseMatrix> antisymmetrize(const FiniteGroup& g, std::size_t n,
                                         bool signed_convention = true);
/// Projection onto the phi-invariant submodule of C_*(Gamma); phi must have
/// finite order r (always true in a finite group).
std::vector<SparseMatrix> nu_phi(const FiniteGroup& g, std::size_t phi, std::size_t n);

/// Descends a Gamma-equivariant family on the full C_*(Gamma) (x) M to the
/// normalized tensor over Gamma; `degree` is the family's chain degree.
std::vector<SparseMatrix> normalize_group_map(const FiniteGroup& g,
                                              const std::vector<SparseMatrix>& family,
                                              const GroupModule& coeff, std::size_t n,
                                              int degree = 0);

/// Everything the finite-centralizer / finite-order theorems assert at desk
/// scale for one conjugacy class.
struct PipelineReport {
    std::size_t class_rep = 0;
    std::size_t weight = 0;
    std::string method;  // "finite-order"
    std::vector<std::size_t> model_hc;       // HC dims of Tot(C-flat(Gamma_phi, C^phi))
    std::vector<std::size_t> invariant_hc;   // HC dims of C^{Gamma_phi}
    std::vector<std::size_t> direct_hc;      // HC dims of C(A x| Gamma)_[phi] (if computed)
    bool direct_computed = false;
    bool hc_equal = false;  // all computed sides agree on degrees <= N-2
    HpEstimate hp[2];
    std::vector<std::size_t> periodicity_ranks;  // rank of S : H_{n+2} -> H_n
    std::map<std::string, SpectralSequence> ss;  // "I", "II", "III"
    std::vector<std::pair<std::string, bool>> checks;
};

PipelineReport finite_order_pipeline(const Algebra& a, const FiniteGroup& g,
                                     const GroupAction& act, std::size_t phi, std::size_t n,
                                     std::size_t weight, bool with_direct, std::size_t ss_pages);

/// Integer 2-cocycle data of the extension 1 -> <phi> -> Gamma_phi -> Gbar -> 1.
struct EulerCocycleData {
    std::vector<std::vector<long>> inhomogeneous;  // c[g][h]
    GroupCochain u;                                // homogeneous degree-2 representative
};

/// From section values s(g) (as integer powers of the generator of Gamma_phi
/// = Z) with phi = phi_step * generator: c(g, h) = (s(g)+s(h)-s(gh))/phi_step.
EulerCocycleData euler_cocycle_from_section(const FiniteGroup& gbar,
                                            const std::vector<long>& section, long phi_step);
/// Direct inhomogeneous cocycle input; the cocycle identity is checked
/// (NotACocycle otherwise).
EulerCocycleData euler_cocycle(const FiniteGroup& gbar, std::vector<std::vector<long>> c);

/// Tot(C^sigma(Gbar, C)) with d-dagger = partial + (-1)^p b + (-1)^p B (u cap -),
/// its homology, the periodicity (cap) matrices on homology, and the columns
/// spectral sequence. literal_sign replays the uncorrected sign reading and is
/// expected to fail with DSquaredNonzero.
struct SigmaModel {
    TotalSModule total;
    SStabilization stab;
    std::vector<SparseMatrix> cap_on_homology;
    SpectralSequence ss;
};

SigmaModel sigma_model(const FiniteGroup& gbar, const EulerCocycleData& e,
                       const EquivariantMixed& c, std::size_t ss_pages,
                       bool literal_sign = false);

}  // namespace cychom
