#include "toricmmp/lp.hpp"

#include "toricmmp/error.hpp"

namespace toricmmp {

// Phase-1 simplex over the rationals with Bland's rule. Free variables are
// split; rows with negative right-hand side get artificials.
std::optional<QVec> lp_feasible_point(const QMat& rows, const QVec& rhs) {
    const int m = static_cast<int>(rows.size());
    const int n = m == 0 ? 0 : static_cast<int>(rows[0].size());
    if (m == 0) return QVec(n, Rat(0));

    // columns: x+ (n), x- (n), slack (m), artificial (<= m)
    int art_count = 0;
    for (int i = 0; i < m; ++i)
        if (rhs[i] < 0) ++art_count;
    const int cols = 2 * n + m + art_count;
    QMat t(m, QVec(cols + 1, Rat(0))); // last column = rhs
    std::vector<int> basis(m);
    int art_seen = 0;
    for (int i = 0; i < m; ++i) {
        const bool neg = rhs[i] < 0;
        const Rat sign = neg ? Rat(-1) : Rat(1);
        for (int j = 0; j < n; ++j) {
            t[i][j] = sign * rows[i][j];
            t[i][n + j] = -sign * rows[i][j];
        }
        t[i][2 * n + i] = sign; // slack
        t[i][cols] = sign * rhs[i];
        if (neg) {
            t[i][2 * n + m + art_seen] = 1;
            basis[i] = 2 * n + m + art_seen;
            ++art_seen;
        } else {
            basis[i] = 2 * n + i;
        }
    }

    // objective: minimize sum of artificials; reduced costs row
    QVec obj(cols + 1, Rat(0));
    for (int j = 2 * n + m; j < cols; ++j) obj[j] = 1;
    // price out basic artificials
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= 2 * n + m) {
            for (int j = 0; j <= cols; ++j) obj[j] -= t[i][j];
        }
    }

    while (true) {
        int enter = -1;
        for (int j = 0; j < cols; ++j) {
            if (obj[j] < 0) { enter = j; break; } // Bland: smallest index
        }
        if (enter < 0) break;
        int leave = -1;
        Rat best_ratio;
        for (int i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rat ratio = t[i][cols] / t[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) fail("InternalError", "phase-1 LP unbounded");
        // pivot
        const Rat piv = t[leave][enter];
        for (int j = 0; j <= cols; ++j) t[leave][j] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rat f = t[i][enter];
            for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
        }
        if (obj[enter] != 0) {
            const Rat f = obj[enter];
            for (int j = 0; j <= cols; ++j) obj[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    // feasible iff all artificials are zero, i.e. objective value is 0
    Rat value = -obj[cols];
    if (value != 0) return std::nullopt;

    QVec x(n, Rat(0));
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) x[basis[i]] += t[i][cols];
        else if (basis[i] < 2 * n) x[basis[i] - n] -= t[i][cols];
    }
    return x;
}

} // namespace toricmmp
