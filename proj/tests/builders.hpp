// Hand-rolled cyclic/paracyclic modules used as test fixtures. These are
// built directly from the defining formulas with bit-level tuple encodings,
// independently of the library's own constructors in the crossed-product
// layer, so they double as oracles for those.
#pragma once

#include <string>
#include <vector>

#include "cychom/simplicial.hpp"

namespace builders {

using namespace cychom;

// Cyclic module of the ground field: every degree is 1-dimensional and all
// structure maps are the identity.
inline ParacyclicModule trivial_cyclic(std::size_t n) {
    std::vector<std::size_t> dims(n + 1, 1);
    GradedModule spaces = GradedModule::numbered(n, dims, "k");
    std::vector<SparseMatrix> d(n + 1), s(n + 1), t(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        d[m] = m >= 1 ? SparseMatrix::identity(1) : SparseMatrix(0, 1);
        s[m] = m + 1 <= n ? SparseMatrix::identity(1) : SparseMatrix(0, 1);
        t[m] = SparseMatrix::identity(1);
    }
    return ParacyclicModule(std::move(spaces), std::move(d), std::move(s), std::move(t));
}

// Cyclic module of the group algebra Q[Z/2]. Basis of C_m: (m+1)-tuples over
// {1, s}, encoded as bits (entry k = bit k).
inline ParacyclicModule qz2_cyclic(std::size_t n) {
    std::vector<std::size_t> dims(n + 1);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        dims[m] = std::size_t(1) << (m + 1);
        for (std::size_t idx = 0; idx < dims[m]; ++idx) {
            std::string l;
            for (std::size_t k = 0; k <= m; ++k) l += ((idx >> k) & 1) ? "s" : "1";
            labels[m].push_back(l);
        }
    }
    GradedModule spaces(n, dims, std::move(labels));
    std::vector<SparseMatrix> d(n + 1), s(n + 1), t(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st, tt;
        for (std::size_t idx = 0; idx < dims[m]; ++idx) {
            const std::size_t last = (idx >> m) & 1;
            const std::size_t head = idx & ((std::size_t(1) << m) - 1);
            if (m >= 1) {
                // d: multiply a^m into a^0, keep a^1..a^{m-1}
                const std::size_t prod = (head & 1) ^ last;
                const std::size_t rest = (head >> 1) << 1;
                dt.push_back({prod | rest, idx, Rational(1)});
            }
            if (m + 1 <= n) st.push_back({idx << 1, idx, Rational(1)});  // 1 (x) a^0 ... a^m
            tt.push_back({last | (head << 1), idx, Rational(1)});        // rotate right
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? dims[m - 1] : 0, dims[m], std::move(dt));
        s[m] = SparseMatrix::from_triplets(m + 1 <= n ? dims[m + 1] : 0, dims[m], std::move(st));
        t[m] = SparseMatrix::from_triplets(dims[m], dims[m], std::move(tt));
    }
    return ParacyclicModule(std::move(spaces), std::move(d), std::move(s), std::move(t));
}

// sigma-twisted group paracyclic module of Z/2: C_m = Q[(Z/2)^{m+1}],
// d drops the last entry, s and t prepend sigma^{-1} psi_m = sigma psi_m.
inline ParacyclicModule z2_twisted_group(std::size_t n) {
    std::vector<std::size_t> dims(n + 1);
    for (std::size_t m = 0; m <= n; ++m) dims[m] = std::size_t(1) << (m + 1);
    GradedModule spaces = GradedModule::numbered(n, dims, "g");
    std::vector<SparseMatrix> d(n + 1), s(n + 1), t(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<Triplet> dt, st, tt;
        for (std::size_t idx = 0; idx < dims[m]; ++idx) {
            const std::size_t last = (idx >> m) & 1;
            const std::size_t head = idx & ((std::size_t(1) << m) - 1);
            if (m >= 1) dt.push_back({head, idx, Rational(1)});
            if (m + 1 <= n) st.push_back({(last ^ 1) | (idx << 1), idx, Rational(1)});
            tt.push_back({(last ^ 1) | (head << 1), idx, Rational(1)});
        }
        d[m] = SparseMatrix::from_triplets(m >= 1 ? dims[m - 1] : 0, dims[m], std::move(dt));
        s[m] = SparseMatrix::from_triplets(m + 1 <= n ? dims[m + 1] : 0, dims[m], std::move(st));
        t[m] = SparseMatrix::from_triplets(dims[m], dims[m], std::move(tt));
    }
    return ParacyclicModule(std::move(spaces), std::move(d), std::move(s), std::move(t));
}

}  // namespace builders
