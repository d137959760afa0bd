#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "cychom/errors.hpp"

namespace cychom {

/// Exact ground field: arbitrary-precision rationals, always in lowest terms
/// with positive denominator (mpq_class maintains both).
using Rational = mpq_class;

inline std::string rat_str(const Rational& q) { return q.get_str(); }

/// Canonicalized fraction. Raw mpq_class(num, den) does not reduce to lowest
/// terms; always build literals through here.
inline Rational rat(long num, long den = 1) {
    if (den == 0) throw CheckError("SchemaError", "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "n", "-n" or "p/q". Throws SchemaError on malformed input or q = 0.
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw CheckError("SchemaError", "empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw CheckError("SchemaError", "bad rational literal '" + s + "'");
    if (q.get_den() == 0)
        throw CheckError("SchemaError", "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

/// Sparse coordinate vector: (index, value) pairs, strictly increasing indices,
/// no zero values. The canonical representation of chains throughout.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

inline bool vec_is_zero(const SparseVec& v) { return v.empty(); }

/// v += c * w, keeping the representation canonical.
inline void vec_axpy(SparseVec& v, const Rational& c, const SparseVec& w) {
    if (c == 0 || w.empty()) return;
    SparseVec out;
    out.reserve(v.size() + w.size());
    std::size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
            out.push_back(std::move(v[i++]));
        } else if (i == v.size() || w[j].first < v[i].first) {
            out.emplace_back(w[j].first, c * w[j].second);
            ++j;
        } else {
            Rational val = v[i].second + c * w[j].second;
            if (val != 0) out.emplace_back(v[i].first, std::move(val));
            ++i;
            ++j;
        }
    }
    v = std::move(out);
}

inline Rational vec_at(const SparseVec& v, std::size_t idx) {
    for (const auto& [i, x] : v) {
        if (i == idx) return x;
        if (i > idx) break;
    }
    return Rational(0);
}

inline SparseVec vec_scaled(const SparseVec& v, const Rational& c) {
    if (c == 0) return {};
    SparseVec out;
    out.reserve(v.size());
    for (const auto& [i, x] : v) out.emplace_back(i, c * x);
    return out;
}

inline SparseVec vec_unit(std::size_t idx) { return SparseVec{{idx, Rational(1)}}; }

inline SparseVec vec_from_dense(const std::vector<Rational>& d) {
    SparseVec out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) out.emplace_back(i, d[i]);
    return out;
}

inline std::vector<Rational> vec_to_dense(const SparseVec& v, std::size_t n) {
    std::vector<Rational> d(n, Rational(0));
    for (const auto& [i, x] : v) d[i] = x;
    return d;
}

}  // namespace cychom
