#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "toricmmp/rational.hpp"

namespace toricmmp {

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;
using QMat = std::vector<QVec>; // row major

inline QVec to_qvec(const ZVec& v) {
    QVec q(v.size());
    for (size_t i = 0; i < v.size(); ++i) q[i] = Rat(v[i]);
    return q;
}

inline Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const QVec& a, const ZVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

inline Int dot(const ZVec& a, const ZVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline ZVec add(const ZVec& a, const ZVec& b) {
    ZVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline ZVec scale(const Int& c, const ZVec& v) {
    ZVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

// Divides by the gcd of the entries; the zero vector stays zero. Sign is NOT
// normalized here (rays keep their geometric direction).
inline ZVec primitive(ZVec v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g > 1) {
        for (auto& x : v) x /= g;
    }
    return v;
}

inline bool is_zero(const ZVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline bool is_zero(const QVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Clears denominators and divides by content; fixes the sign so the first
// nonzero entry is positive. Used for covector/relation normalization.
ZVec primitive_integer_direction(const QVec& v);

Rat det(QMat m);                       // square matrix determinant, fraction-free-ish Gauss
int rank_of(QMat m);                   // row rank
std::optional<QVec> solve(QMat a, QVec b); // solve a x = b (any consistent system; least dims)
std::optional<QMat> inverse(const QMat& m);

// Basis of the rational kernel {x : m x = 0}.
std::vector<QVec> kernel_basis(QMat m);

// For a primitive vector v, returns a unimodular matrix U (rows) with
// U * v = e_1. The last n-1 rows then give coordinates on Z^n / Z v.
std::vector<ZVec> unimodular_completion(const ZVec& v);

// Lattice basis of {x in Z^n : <v, x> = 0} for primitive v (saturated).
std::vector<ZVec> functional_kernel_basis(const ZVec& v);

inline QMat transpose(const QMat& m) {
    if (m.empty()) return {};
    QMat t(m[0].size(), QVec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

} // namespace toricmmp
