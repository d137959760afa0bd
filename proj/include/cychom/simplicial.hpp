#pragma once

#include <optional>
#include <vector>

#include "cychom/chain.hpp"

namespace cychom {

/// Paracyclic module from the (d, s, t) datum: d the end face, s the extra
/// degeneracy, t invertible with t = ds. Faces and degeneracies are derived
/// (d_j = t^j d t^-(j+1), s_j = t^(j+1) s t^-(j+1)), never stored; the full
/// simplicial identity list is machine-checked at construction.
class ParacyclicModule {
public:
    ParacyclicModule(GradedModule spaces, std::vector<SparseMatrix> d, std::vector<SparseMatrix> s,
                     std::vector<SparseMatrix> t);

    const GradedModule& spaces() const { return spaces_; }
    const SparseMatrix& end_face(std::size_t m) const { return d_[m]; }
    const SparseMatrix& extra_degeneracy(std::size_t m) const { return s_[m]; }
    const SparseMatrix& cyclic_op(std::size_t m) const { return t_[m]; }
    const SparseMatrix& cyclic_op_inv(std::size_t m) const { return tinv_[m]; }

    /// t^k as a matrix on C_m (k may be negative).
    SparseMatrix cyclic_power(std::size_t m, long k) const;

    /// d_j : C_m -> C_{m-1}, 0 <= j <= m, m >= 1.
    SparseMatrix face(std::size_t m, std::size_t j) const;
    /// s_j : C_m -> C_{m+1}, 0 <= j <= m, m <= N-1.
    SparseMatrix degeneracy(std::size_t m, std::size_t j) const;

    /// t^{m+1} = 1 in every degree.
    bool is_cyclic() const { return cyclic_; }

    /// Checks t^{m+1} = action[m] in every degree (the phi-paracyclic flag,
    /// with action the matrix family of phi^{-1}).
    bool has_twist(const std::vector<SparseMatrix>& action) const;

private:
    GradedModule spaces_;
    std::vector<SparseMatrix> d_, s_, t_, tinv_;
    bool cyclic_ = false;
};

/// b = sum (-1)^j d_j together with Connes' B. Cyclic modules use
/// B = (1 - tau) s N; paracyclic ones the s' = s b' s correction. The derived
/// T = 1 - (bB + Bb) is verified to equal t^{m+1} degreewise.
ParachainComplex derive_parachain(const ParacyclicModule& p);

/// Connes lambda-complex of a genuine cyclic module: degree m is the cokernel
/// of (1 - tau), tau = (-1)^m t, with the induced b. Throws NotCyclic.
ChainComplex lambda_complex(const ParacyclicModule& p);

/// Bigraded module on the full square p, q <= N (the diagonal needs it).
struct BiGradedModule {
    std::size_t truncation = 0;
    std::vector<std::vector<std::size_t>> dims;                 // dims[p][q]
    std::vector<std::vector<std::vector<std::string>>> labels;  // labels[p][q]

    std::size_t dim(std::size_t p, std::size_t q) const { return dims[p][q]; }
    const std::string& label(std::size_t p, std::size_t q, std::size_t i) const {
        return labels[p][q][i];
    }
};

/// Operator family on a bigraded module: mats[p][q] maps (p,q) to
/// (p + dp, q + dq); zero-shape when the target leaves the square.
using BiFamily = std::vector<std::vector<SparseMatrix>>;

/// Bi-paracyclic module: every row and column is a paracyclic module and all
/// horizontal operators commute with all vertical operators.
class BiParacyclicModule {
public:
    BiParacyclicModule(BiGradedModule spaces, BiFamily hd, BiFamily hs, BiFamily ht, BiFamily vd,
                       BiFamily vs, BiFamily vt);

    const BiGradedModule& spaces() const { return spaces_; }
    const ParacyclicModule& row(std::size_t q) const { return rows_[q]; }
    const ParacyclicModule& column(std::size_t p) const { return cols_[p]; }

    const BiFamily& hd() const { return hd_; }
    const BiFamily& hs() const { return hs_; }
    const BiFamily& ht() const { return ht_; }
    const BiFamily& vd() const { return vd_; }
    const BiFamily& vs() const { return vs_; }
    const BiFamily& vt() const { return vt_; }

    /// ht^{p+1} vt^{q+1} = 1 on every block.
    bool is_cylindrical() const { return cylindrical_; }
    /// ht^{p+1} = vt^{q+1} = 1 on every block.
    bool is_bicyclic() const { return bicyclic_; }

private:
    BiGradedModule spaces_;
    BiFamily hd_, hs_, ht_, vd_, vs_, vt_;
    std::vector<ParacyclicModule> rows_, cols_;
    bool cylindrical_ = false, bicyclic_ = false;
};

/// Tensor product of two paracyclic modules over k (bi-paracyclic result).
BiParacyclicModule tensor_paracyclic(const ParacyclicModule& x, const ParacyclicModule& y);

/// Diag_m = C_{m,m} with composite operators; cyclic when the input is
/// cylindrical.
ParacyclicModule diagonal(const BiParacyclicModule& c);

/// Total graded module (blocks ordered by ascending p) and its block offsets.
struct TotalSpaces {
    GradedModule spaces;
    std::vector<std::vector<std::size_t>> offsets;  // offsets[m][p], p = 0..m
};
TotalSpaces totalize_spaces(const BiGradedModule& b);

/// Classical signed shuffle map Tot_m -> Diag_m; commutes with the simplicial
/// b-differentials (machine-checked, NotAChainMap otherwise).
GradedMap shuffle(const BiParacyclicModule& c);
/// Classical Alexander-Whitney map Diag_m -> Tot_m (front face x back face).
GradedMap alexander_whitney(const BiParacyclicModule& c);

}  // namespace cychom
