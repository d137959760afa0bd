#pragma once

#include "cychom/simplicial.hpp"

namespace cychom {

/// Parachain bicomplex: every row and column a parachain complex, all
/// horizontal differentials commuting with all vertical ones. The twists
/// hT = 1 - (hb hB + hB hb) and vT are computed and classified: mixed when
/// both are 1, cylindrical when hT vT = 1.
struct ParachainBicomplex {
    BiGradedModule spaces;
    BiFamily hb, hB, vb, vB;
    BiFamily hT, vT;
    bool mixed = false;
    bool cylindrical = false;

    ParachainBicomplex(BiGradedModule spaces_, BiFamily hb_, BiFamily hB_, BiFamily vb_,
                       BiFamily vB_);

    static ParachainBicomplex from_biparacyclic(const BiParacyclicModule& c);
};

/// Totalization bookkeeping: the mixed/parachain complex plus block offsets
/// offsets[m][p] of C_{p, m-p} inside Tot_m.
struct TotalizedMixed {
    MixedComplex complex;
    std::vector<std::vector<std::size_t>> offsets;
};
struct TotalizedParachain {
    ParachainComplex complex;
    std::vector<std::vector<std::size_t>> offsets;
};

/// Tot with b-dagger = hb + (-1)^p vb and B-dagger = hB + (-1)^p vB (mixed) or
/// hB + (-1)^p hT vB (cylindrical). Throws NotCylindrical when a cylindrical
/// totalization is requested on a non-cylindrical input.
TotalizedMixed totalize_mixed(const ParachainBicomplex& c);

/// General parachain totalization with plain B-dagger; the resulting twist
/// T-dagger = hT + vT - 1 must be invertible.
TotalizedParachain totalize_parachain(const ParachainBicomplex& c);

/// Triangular (para-)S-module. Horizontal orientation: rows carry (d, S) with
/// S of degree (-2, 0) and columns carry a parachain pair (b, B); the
/// triangular identity is d^2 + (bB + Bb)S = 0. Vertical orientation: rows
/// carry a parachain pair (d = b-bar, up = B-bar), columns carry the
/// S-direction with S of degree (0, -2) and vertical differential b; the
/// identity is (b-bar B-bar + B-bar b-bar)S + b^2 = 0.
struct TriangularSModule {
    enum class Orientation { horizontal, vertical };

    Orientation orientation;
    BiGradedModule spaces;
    BiFamily d;   // degree (-1, 0)
    BiFamily up;  // degree (+1, 0); vertical orientation only (empty family otherwise)
    BiFamily b;   // degree (0, -1)
    BiFamily B;   // degree (0, +1); horizontal orientation only
    BiFamily S;   // degree (-2, 0) horizontal, (0, -2) vertical

    TriangularSModule(Orientation o, BiGradedModule spaces_, BiFamily d_, BiFamily up_,
                      BiFamily b_, BiFamily B_, BiFamily S_);
};

/// Total S-module of a triangular S-module, with block offsets by p.
struct TotalSModule {
    ParaSModule module;
    std::vector<std::vector<std::size_t>> offsets;
};
TotalSModule totalize(const TriangularSModule& t);

/// The two triangularizations of a cylindrical complex. For cylindrical input
/// the twist hT rides along on the summand-shifting B-part so that the total
/// S-module equals Tot(C)-natural on the nose (machine-checked).
struct Triangularized {
    TriangularSModule module;
    // summand_offsets[p][q][j]: offset of the j-th shifted copy inside D_{p,q}
    std::vector<std::vector<std::vector<std::size_t>>> summand_offsets;
};

Triangularized triangularize(const ParachainBicomplex& c, bool wsigma);

/// Tensor product of an S-module row structure with a parachain complex
/// column structure (the triangular S-module of a para-S-module and a
/// parachain complex): D_{p,q} = R_p (x) C_q.
TriangularSModule tensor_s_with_parachain(const ParaSModule& r, const ParachainComplex& c);

}  // namespace cychom
