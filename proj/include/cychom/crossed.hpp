#pragma once

#include <map>
#include <optional>

#include "cychom/group_algebra.hpp"
#include "cychom/simplicial.hpp"

namespace cychom {

/// Twisted cyclic module C^phi(A): C_m = A^(x)(m+1) (the weight-w piece in the
/// graded case), paracyclic structure twisted by the automorphism phi. The
/// phi-paracyclic identity t_phi^{m+1} = (phi^{-1})^(x)(m+1) is verified at
/// construction.
class TwistedAlgebraCyclic {
public:
    TwistedAlgebraCyclic(Algebra a, SparseMatrix phi_matrix, std::size_t n, std::size_t weight = 0);

    const ParacyclicModule& module() const { return *module_; }
    const Algebra& algebra() const { return a_; }
    std::size_t weight() const { return weight_; }

    const std::vector<std::vector<std::size_t>>& tuples(std::size_t m) const { return tuples_[m]; }
    std::size_t index_of(std::size_t m, const std::vector<std::size_t>& t) const;

    /// (g)^(x)(m+1) restricted to this weight piece, for any weight-preserving
    /// algebra map g.
    SparseMatrix diagonal_matrix(const SparseMatrix& g, std::size_t m) const;

    /// Diagonal action family of a group action: action[x][m].
    std::vector<std::vector<SparseMatrix>> action_family(const FiniteGroup& g,
                                                         const GroupAction& act) const;

private:
    Algebra a_;
    SparseMatrix phi_inv_;
    std::size_t weight_ = 0;
    std::vector<std::vector<std::vector<std::size_t>>> tuples_;
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> lookup_;
    std::optional<ParacyclicModule> module_;
};

/// Twisted group cyclic module C^phi(Gamma): C_m = Q[Gamma^(m+1)], d drops the
/// last entry, s_phi / t_phi prepend phi^{-1} psi_m. phi must be central.
/// The b-differential is verified to equal the group differential.
class TwistedGroupCyclic {
public:
    TwistedGroupCyclic(FiniteGroup g, std::size_t phi, std::size_t n);

    const ParacyclicModule& module() const { return *module_; }
    const FiniteGroup& group() const { return g_; }
    std::size_t phi() const { return phi_; }

    std::size_t tuple_index(const std::vector<std::size_t>& t) const;
    std::vector<std::size_t> tuple_of(std::size_t m, std::size_t idx) const;

    /// Diagonal left-multiplication family: action[x][m].
    std::vector<std::vector<SparseMatrix>> left_action_family() const;

private:
    FiniteGroup g_;
    std::size_t phi_ = 0;
    std::optional<ParacyclicModule> module_;
};

/// C^phi(Gamma, C') = C^phi(Gamma) (x)_Gamma C': the tensor over the group,
/// in the normalized basis (1, psi_1..psi_p) (x) c_j. Block index within
/// (p, q) is e * dim(C'_q) + j, where e encodes (psi_1..psi_p) in mixed radix
/// with psi_1 least significant.
struct GammaTensorModule {
    BiParacyclicModule module;
    std::size_t group_order = 0;
    std::vector<std::size_t> coeff_dims;  // dim C'_q

    std::size_t group_tuple_index(const std::vector<std::size_t>& psis) const;
    std::vector<std::size_t> group_tuple_of(std::size_t p, std::size_t e) const;
};

/// Builds C^phi(Gamma, C'); y_action[x][m] must be a Gamma-action commuting
/// with the structure maps of y (checked).
GammaTensorModule tensor_over_gamma(const TwistedGroupCyclic& x, const ParacyclicModule& y,
                                    const std::vector<std::vector<SparseMatrix>>& y_action);

/// One conjugacy-class component of C(A x| Gamma).
struct ClassComponent {
    std::size_t rep = 0;  // smallest element of the class
    ParacyclicModule module;
    std::vector<std::vector<std::size_t>> selection;  // per-degree indices into the full basis
};

/// Splits the cyclic module of a crossed product along conjugacy classes of
/// the group-label product; each part is machine-checked to be closed under
/// (d, s, t) and the dimensions add up to the full module.
std::vector<ClassComponent> split_by_class(const CrossedProduct& cp, const FiniteGroup& g,
                                           const TwistedAlgebraCyclic& full);

const ClassComponent& component_of(const std::vector<ClassComponent>& components,
                                   const FiniteGroup& g, std::size_t phi);

/// The natural embedding mu_phi : Diag(C^phi(Gamma_phi, A)) -> C(A x| Gamma)_[phi],
/// realized both in full coordinates and in component coordinates. Injectivity
/// and (d, s, t)-equivariance are machine-checked (NotStructurePreserving).
struct MuPhiMap {
    GradedMap into_full;
    GradedMap into_component;
};

MuPhiMap mu_phi(const FiniteGroup& g, const ConjugacyData& cd, const GroupAction& act,
                const TwistedAlgebraCyclic& xa, const GammaTensorModule& tm,
                const TwistedAlgebraCyclic& full, const ClassComponent& comp);

/// Inverse of mu_1 on the identity component (phi = 1 only).
GradedMap mu_inverse(const FiniteGroup& g, const GroupAction& act, const TwistedAlgebraCyclic& xa,
                     const GammaTensorModule& tm, const TwistedAlgebraCyclic& full,
                     const ClassComponent& comp);

}  // namespace cychom
