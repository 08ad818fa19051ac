#include "toricmmp/linalg.hpp"

#include <cassert>

namespace toricmmp {

ZVec primitive_integer_direction(const QVec& v) {
    Int den = 1;
    for (const auto& q : v) den = lcm(den, q.get_den());
    ZVec z(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        Rat s = v[i] * Rat(den);
        z[i] = s.get_num();
    }
    z = primitive(std::move(z));
    for (const auto& x : z) {
        if (x != 0) {
            if (x < 0)
                for (auto& y : z) y = -y;
            break;
        }
    }
    return z;
}

Rat det(QMat m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    Rat result = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            result = -result;
        }
        result *= m[col][col];
        const Rat inv = 1 / m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const Rat f = m[r][col] * inv;
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return result;
}

namespace {

// Row echelon in place; returns pivot columns.
std::vector<int> echelon(QMat& m) {
    std::vector<int> pivots;
    size_t row = 0;
    const size_t cols = m.empty() ? 0 : m[0].size();
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        size_t p = row;
        while (p < m.size() && m[p][col] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[row]);
        const Rat inv = 1 / m[row][col];
        for (size_t c = col; c < cols; ++c) m[row][c] *= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            const Rat f = m[r][col];
            for (size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(static_cast<int>(col));
        ++row;
    }
    return pivots;
}

} // namespace

int rank_of(QMat m) { return static_cast<int>(echelon(m).size()); }

std::optional<QVec> solve(QMat a, QVec b) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    for (size_t r = 0; r < rows; ++r) a[r].push_back(b[r]);
    QMat aug = a;
    std::vector<int> pivots = echelon(aug);
    for (int p : pivots)
        if (static_cast<size_t>(p) == cols) return std::nullopt; // inconsistent
    QVec x(cols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
    return x;
}

std::optional<QMat> inverse(const QMat& m) {
    const size_t n = m.size();
    QMat aug(n, QVec(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    std::vector<int> pivots = echelon(aug);
    if (pivots.size() != n) return std::nullopt;
    QMat inv(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

std::vector<QVec> kernel_basis(QMat m) {
    const size_t cols = m.empty() ? 0 : m[0].size();
    std::vector<int> pivots = echelon(m);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<QVec> basis;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        QVec v(cols, Rat(0));
        v[free_col] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<ZVec> functional_kernel_basis(const ZVec& v) {
    std::vector<ZVec> u = unimodular_completion(v);
    // U v = e_1, so <v, x> is the first coordinate of U^{-T} x; the lattice
    // {x : <v,x> = 0} is generated by rows 2..n of U.
    return {u.begin() + 1, u.end()};
}

std::vector<ZVec> unimodular_completion(const ZVec& v) {
    const int n = static_cast<int>(v.size());
    // Invariant: rows * v_original = current, current eventually e_1.
    std::vector<ZVec> rows(n, ZVec(n, Int(0)));
    for (int i = 0; i < n; ++i) rows[i][i] = 1;
    ZVec cur = v;
    // Repeated extended-gcd steps folding entry j into entry 0.
    for (int j = 1; j < n; ++j) {
        if (cur[j] == 0) continue;
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), cur[0].get_mpz_t(), cur[j].get_mpz_t());
        const Int a = cur[0] / g, b = cur[j] / g;
        ZVec r0 = rows[0], rj = rows[j];
        for (int c = 0; c < n; ++c) {
            rows[0][c] = s * r0[c] + t * rj[c];
            rows[j][c] = -b * r0[c] + a * rj[c];
        }
        cur[0] = g;
        cur[j] = 0;
    }
    require(cur[0] == 1 || cur[0] == -1, "NotPrimitive", "unimodular completion needs a primitive vector");
    if (cur[0] == -1)
        for (int c = 0; c < n; ++c) rows[0][c] = -rows[0][c];
    return rows;
}

} // namespace toricmmp
