#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cychom/sparse.hpp"

namespace cychom {

/// Enumerated, labeled basis for each chain degree 0..N. Every operator in the
/// library is a per-degree sparse matrix over such bases.
struct GradedModule {
    std::size_t truncation = 0;  // N
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::string>> labels;

    GradedModule() = default;
    GradedModule(std::size_t n, std::vector<std::size_t> dims_,
                 std::vector<std::vector<std::string>> labels_);

    /// Numbered labels "prefix.m.i" when no natural naming exists.
    static GradedModule numbered(std::size_t n, const std::vector<std::size_t>& dims,
                                 const std::string& prefix);

    std::size_t dim(std::size_t m) const { return m < dims.size() ? dims[m] : 0; }
    const std::string& label(std::size_t m, std::size_t i) const { return labels[m][i]; }

    bool operator==(const GradedModule& other) const {
        return truncation == other.truncation && dims == other.dims;
    }
};

/// Degree-homogeneous map between graded modules: mats[m] : src_m -> dst_{m+degree},
/// stored for every m = 0..N whose target degree lies in the window.
struct GradedMap {
    int degree = 0;
    GradedModule src;
    GradedModule dst;
    std::vector<SparseMatrix> mats;  // indexed by source degree; zero-shape outside window

    GradedMap() = default;
    GradedMap(int degree_, GradedModule src_, GradedModule dst_, std::vector<SparseMatrix> mats_);

    const SparseMatrix& at(std::size_t m) const { return mats[m]; }
    bool in_window(std::size_t m) const {
        return m <= src.truncation && int(m) + degree >= 0 &&
               std::size_t(int(m) + degree) <= dst.truncation;
    }
};

}  // namespace cychom
