#include "toricmmp/geometry.hpp"

#include <algorithm>

#include "toricmmp/error.hpp"
#include "toricmmp/lp.hpp"

namespace toricmmp {

Cone::Cone(int rank_, std::vector<ZVec> rays_) : rank(rank_), rays(std::move(rays_)) {
    require(rank > 0, "RankMismatch", "cone rank must be positive");
    for (auto& r : rays) {
        require(static_cast<int>(r.size()) == rank, "RankMismatch", "ray rank differs from cone rank");
        require(!is_zero(r), "InvalidRay", "zero vector is not a ray");
        r = primitive(std::move(r));
    }
    std::vector<ZVec> uniq;
    for (const auto& r : rays)
        if (std::find(uniq.begin(), uniq.end(), r) == uniq.end()) uniq.push_back(r);
    rays = std::move(uniq);
}

int Cone::dim() const {
    if (rays.empty()) return 0;
    QMat m;
    for (const auto& r : rays) m.push_back(to_qvec(r));
    return rank_of(m);
}

bool Cone::is_full_dimensional() const { return dim() == rank; }

bool Cone::is_strongly_convex() const {
    if (rays.empty()) return true;
    // contains no line <=> some ell is strictly positive on every ray
    QMat rows;
    QVec rhs;
    for (const auto& r : rays) {
        QVec row = to_qvec(r);
        for (auto& x : row) x = -x;
        rows.push_back(row);
        rhs.push_back(Rat(-1)); // -<ell, r> <= -1
    }
    return lp_feasible_point(rows, rhs).has_value();
}

namespace {

std::vector<ZVec> dedupe(std::vector<ZVec> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

HConeRays extreme_rays(const std::vector<QVec>& halfspaces, int n) {
    HConeRays out;
    QMat m = halfspaces;
    if (m.empty()) m.push_back(QVec(n, Rat(0)));
    std::vector<QVec> lin = kernel_basis(m);
    for (const auto& l : lin) out.lineality.push_back(primitive_integer_direction(l));
    const int lin_dim = static_cast<int>(lin.size());
    const int pointed_dim = n - lin_dim;
    if (pointed_dim == 0) return out;

    const int k = static_cast<int>(halfspaces.size());
    const int want = pointed_dim - 1; // constraints active at an extreme ray
    std::vector<ZVec> found;
    auto consider = [&](const std::vector<int>& sel) {
        QMat sys;
        for (int i : sel) sys.push_back(halfspaces[i]);
        if (sys.empty()) sys.push_back(QVec(n, Rat(0)));
        std::vector<QVec> ker = kernel_basis(sys);
        if (static_cast<int>(ker.size()) != lin_dim + 1) return;
        for (const auto& cand : ker) {
            for (int sign = 0; sign < 2; ++sign) {
                QVec d = cand;
                if (sign) for (auto& x : d) x = -x;
                bool ok = true, nonzero_pairing = false;
                for (const auto& h : halfspaces) {
                    Rat p = dot(h, d);
                    if (p < 0) { ok = false; break; }
                    if (p > 0) nonzero_pairing = true;
                }
                if (!ok || !nonzero_pairing) continue;
                QMat act;
                for (const auto& h : halfspaces)
                    if (dot(h, d) == 0) act.push_back(h);
                if (act.empty()) act.push_back(QVec(n, Rat(0)));
                if (static_cast<int>(kernel_basis(act).size()) != lin_dim + 1) continue;
                // reduce modulo lineality so equal rays compare equal: project
                // onto the complement by subtracting the lineality components
                // computed against an orthogonal-ish elimination
                found.push_back(primitive_integer_direction(d));
            }
        }
    };
    if (want == 0) {
        consider({});
    } else {
        std::vector<int> sel(want);
        for (int i = 0; i < want; ++i) sel[i] = i;
        while (true) {
            consider(sel);
            int pos = want - 1;
            while (pos >= 0 && sel[pos] == k - want + pos) --pos;
            if (pos < 0) break;
            ++sel[pos];
            for (int i = pos + 1; i < want; ++i) sel[i] = sel[i - 1] + 1;
        }
    }
    out.extreme = dedupe(std::move(found));
    return out;
}

Cone dual_cone(const Cone& c) {
    require(c.is_strongly_convex() || c.is_full_dimensional(), "NotDualizable",
            "dual cone requires a strongly convex or full-dimensional cone");
    std::vector<QVec> halfspaces;
    for (const auto& r : c.rays) halfspaces.push_back(to_qvec(r));
    HConeRays h = extreme_rays(halfspaces, c.rank);
    std::vector<ZVec> gens = h.extreme;
    for (const auto& l : h.lineality) {
        gens.push_back(l);
        ZVec neg = l;
        for (auto& x : neg) x = -x;
        gens.push_back(neg);
    }
    if (gens.empty()) return Cone(c.rank, {});
    return Cone(c.rank, gens);
}

bool cone_contains(const Cone& c, const QVec& point) {
    if (is_zero(point)) return true;
    if (c.rays.empty()) return false;
    QMat span;
    for (const auto& r : c.rays) span.push_back(to_qvec(r));
    QMat with_pt = span;
    with_pt.push_back(point);
    if (rank_of(with_pt) != rank_of(span)) return false;
    Cone d = dual_cone(c);
    for (const auto& w : d.rays)
        if (dot(point, w) < 0) return false;
    return true;
}

bool cone_contains(const Cone& c, const ZVec& point) { return cone_contains(c, to_qvec(point)); }

std::optional<QVec> simplicial_coordinates(const Cone& c, const QVec& point) {
    QMat cols(c.rank, QVec(c.rays.size()));
    for (size_t j = 0; j < c.rays.size(); ++j)
        for (int i = 0; i < c.rank; ++i) cols[i][j] = Rat(c.rays[j][i]);
    auto x = solve(cols, point);
    if (!x) return std::nullopt;
    // solve() picks one solution; for simplicial (independent) rays it is the
    // unique one.
    return x;
}

std::set<ZVec> enumerate_lattice_points(const Cone& c, const QVec& ell, const Rat& bound) {
    require(static_cast<int>(ell.size()) == c.rank, "RankMismatch", "ell rank mismatch");
    for (const auto& r : c.rays)
        require(dot(ell, r) > 0, "UnboundedRegion", "ell must be strictly positive on the cone");
    std::set<ZVec> result;
    if (bound < 0) return result;
    result.insert(ZVec(c.rank, Int(0)));
    if (c.rays.empty()) return result;

    // box: v = sum lambda_i r_i, <ell,v> <= bound gives lambda_i <= bound/<ell,r_i>
    std::vector<Int> radius(c.rank, Int(0));
    for (int j = 0; j < c.rank; ++j) {
        Rat s = 0;
        for (const auto& r : c.rays) s += bound * Rat(abs(r[j])) / dot(ell, r);
        radius[j] = rat_ceil(s);
    }
    const Cone dual = dual_cone(c);
    const bool full = c.is_full_dimensional();

    ZVec counter(c.rank);
    for (int j = 0; j < c.rank; ++j) counter[j] = -radius[j];
    while (true) {
        if (!is_zero(counter) && dot(ell, counter) <= bound) {
            bool inside = true;
            for (const auto& w : dual.rays)
                if (dot(w, counter) < 0) { inside = false; break; }
            if (inside && (full || cone_contains(c, counter))) result.insert(counter);
        }
        int j = 0;
        while (j < c.rank) {
            ++counter[j];
            if (counter[j] <= radius[j]) break;
            counter[j] = -radius[j];
            ++j;
        }
        if (j == c.rank) break;
    }
    return result;
}

Rat simplex_volume(const std::vector<QVec>& verts) {
    const size_t d = verts.size() - 1;
    QMat m(d, QVec(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) m[i][j] = verts[i + 1][j] - verts[0][j];
    Rat v = det(m);
    if (v < 0) v = -v;
    Int fact = 1;
    for (size_t i = 2; i <= d; ++i) fact *= static_cast<long>(i);
    return v / Rat(fact);
}

namespace {

// Fan triangulation of a full-dimensional polytope in R^dim from its
// lexicographically smallest vertex, recursing over facets. Emits index
// simplices into `out`.
void triangulate(const std::vector<QVec>& pts, int dim, std::vector<std::vector<int>>& out) {
    std::vector<int> order(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a] < pts[b]; });
    const int apex = order[0];
    if (dim == 1) {
        out.push_back({order.front(), order.back()});
        return;
    }
    const size_t nv = pts.size();
    std::vector<std::pair<QVec, Rat>> seen;
    std::vector<int> sel(dim);
    for (int i = 0; i < dim; ++i) sel[i] = i;
    auto handle = [&](const std::vector<int>& s) {
        QMat m(dim - 1, QVec(dim));
        for (int i = 1; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m[i - 1][j] = pts[s[i]][j] - pts[s[0]][j];
        std::vector<QVec> ker = kernel_basis(m);
        if (ker.size() != 1) return;
        QVec normal = to_qvec(primitive_integer_direction(ker[0]));
        Rat off = dot(normal, pts[s[0]]);
        int side = 0;
        for (const auto& v : pts) {
            Rat p = dot(normal, v) - off;
            if (p == 0) continue;
            int sgn = p > 0 ? 1 : -1;
            if (side == 0) side = sgn;
            else if (side != sgn) return; // not supporting
        }
        if (side == 0) return;
        if (side > 0) {
            for (auto& x : normal) x = -x;
            off = -off;
        }
        for (const auto& f : seen)
            if (f.first == normal && f.second == off) return;
        seen.push_back({normal, off});
        if (dot(normal, pts[apex]) == off) return; // facet through the apex
        std::vector<int> fidx;
        for (size_t i = 0; i < nv; ++i)
            if (dot(normal, pts[i]) == off) fidx.push_back(static_cast<int>(i));
        if (fidx.size() < static_cast<size_t>(dim)) return;
        int drop = 0;
        while (normal[drop] == 0) ++drop;
        std::vector<QVec> proj;
        for (int i : fidx) {
            QVec p;
            for (int j = 0; j < dim; ++j)
                if (j != drop) p.push_back(pts[i][j]);
            proj.push_back(p);
        }
        std::vector<std::vector<int>> sub;
        triangulate(proj, dim - 1, sub);
        for (const auto& s2 : sub) {
            std::vector<int> simplex;
            for (int i : s2) simplex.push_back(fidx[i]);
            simplex.push_back(apex);
            out.push_back(simplex);
        }
    };
    while (true) {
        handle(sel);
        int pos = dim - 1;
        while (pos >= 0 && sel[pos] == static_cast<int>(nv) - dim + pos) --pos;
        if (pos < 0) break;
        ++sel[pos];
        for (int i = pos + 1; i < dim; ++i) sel[i] = sel[i - 1] + 1;
    }
}

// Saturated lattice basis of the direction space spanned by `dirs` (rational
// vectors in R^n). Obtained by intersecting the kernels of primitive integer
// normals of the orthogonal complement, one functional at a time.
std::vector<ZVec> span_lattice_basis(const QMat& dirs, int n) {
    // normals spanning the complement: {w : <dir_i, w> = 0}
    std::vector<QVec> normals = kernel_basis(dirs);
    // Work in shrinking coordinates: basis maps Z^k -> Z^n.
    std::vector<ZVec> basis(n, ZVec(n, Int(0)));
    for (int i = 0; i < n; ++i) basis[i][i] = 1;
    for (const auto& nq : normals) {
        ZVec w = primitive_integer_direction(nq);
        // express w against current basis: functional on Z^k
        ZVec f(basis.size());
        for (size_t i = 0; i < basis.size(); ++i) f[i] = dot(basis[i], w);
        f = primitive(std::move(f));
        if (is_zero(f)) continue;
        std::vector<ZVec> ker = functional_kernel_basis(f);
        std::vector<ZVec> next;
        for (const auto& kv : ker) {
            ZVec v(n, Int(0));
            for (size_t i = 0; i < basis.size(); ++i)
                for (int j = 0; j < n; ++j) v[j] += kv[i] * basis[i][j];
            next.push_back(v);
        }
        basis = std::move(next);
    }
    return basis;
}

} // namespace

std::vector<std::vector<int>> triangulate_configuration(const std::vector<QVec>& pts, int dim) {
    std::vector<std::vector<int>> out;
    triangulate(pts, dim, out);
    return out;
}

LatticePolytope::LatticePolytope(std::vector<QVec> verts) : vertices(std::move(verts)) {
    require(!vertices.empty(), "EmptyPolytope", "polytope needs at least one vertex");
    const size_t r = vertices[0].size();
    for (const auto& v : vertices)
        require(v.size() == r, "RankMismatch", "vertices of mixed rank");
}

Rat polytope_volume(const LatticePolytope& p, VolumeNormalization norm) {
    const int ambient = static_cast<int>(p.vertices[0].size());
    QMat dirs;
    for (size_t i = 1; i < p.vertices.size(); ++i) {
        QVec d(ambient);
        for (int j = 0; j < ambient; ++j) d[j] = p.vertices[i][j] - p.vertices[0][j];
        dirs.push_back(d);
    }
    const int d = dirs.empty() ? 0 : rank_of(dirs);
    if (d == 0) return 0;

    std::vector<QVec> pts;
    if (d == ambient) {
        pts = p.vertices;
    } else {
        // intrinsic coordinates through a genuine lattice basis of the span,
        // so lattice normalization is the induced-lattice one
        std::vector<ZVec> basis = span_lattice_basis(dirs, ambient);
        QMat bt(ambient, QVec(basis.size()));
        for (size_t j = 0; j < basis.size(); ++j)
            for (int i = 0; i < ambient; ++i) bt[i][j] = Rat(basis[j][i]);
        for (const auto& v : p.vertices) {
            QVec rel(ambient);
            for (int i = 0; i < ambient; ++i) rel[i] = v[i] - p.vertices[0][i];
            auto coords = solve(bt, rel);
            require(coords.has_value(), "InternalError", "vertex outside affine span");
            pts.push_back(*coords);
        }
    }
    std::vector<std::vector<int>> simplices;
    triangulate(pts, d, simplices);
    Rat vol = 0;
    for (const auto& s : simplices) {
        std::vector<QVec> verts;
        for (int i : s) verts.push_back(pts[i]);
        vol += simplex_volume(verts);
    }
    if (norm == VolumeNormalization::Lattice) {
        Int fact = 1;
        for (int i = 2; i <= d; ++i) fact *= i;
        vol *= Rat(fact);
    }
    return vol;
}

std::vector<QVec> polytope_vertices(const std::vector<QVec>& normals, const std::vector<Rat>& offsets) {
    const int n = normals.empty() ? 0 : static_cast<int>(normals[0].size());
    const int k = static_cast<int>(normals.size());
    std::vector<QVec> verts;
    if (k < n) return verts;
    std::vector<int> sel(n);
    for (int i = 0; i < n; ++i) sel[i] = i;
    auto handle = [&](const std::vector<int>& s) {
        QMat m;
        QVec b;
        for (int i : s) {
            m.push_back(normals[i]);
            b.push_back(offsets[i]);
        }
        if (rank_of(m) != n) return;
        auto x = solve(m, b);
        if (!x) return;
        for (int i = 0; i < k; ++i)
            if (dot(normals[i], *x) < offsets[i]) return;
        if (std::find(verts.begin(), verts.end(), *x) == verts.end()) verts.push_back(*x);
    };
    while (true) {
        handle(sel);
        int pos = n - 1;
        while (pos >= 0 && sel[pos] == k - n + pos) --pos;
        if (pos < 0) break;
        ++sel[pos];
        for (int i = pos + 1; i < n; ++i) sel[i] = sel[i - 1] + 1;
    }
    std::sort(verts.begin(), verts.end());
    return verts;
}

} // namespace toricmmp
