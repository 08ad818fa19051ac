#include "toricmmp/nvol.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "toricmmp/error.hpp"
#include "toricmmp/invariants.hpp"

namespace toricmmp {

namespace {

// A triangulation of the dual cone into simplicial pieces, with |det| of each
// piece, so vol(xi) = sum_T |det W_T| / prod_{w in T} <xi, w>.
struct DualTriangulation {
    std::vector<std::vector<ZVec>> pieces;
    std::vector<Int> dets;
};

DualTriangulation triangulate_dual(const Cone& dual) {
    DualTriangulation t;
    const int n = dual.rank;
    if (static_cast<int>(dual.rays.size()) == n) {
        t.pieces.push_back(dual.rays);
        QMat m(n, QVec(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = Rat(dual.rays[i][j]);
        Rat d = det(m);
        Int v = d.get_num();
        if (v < 0) v = -v;
        t.dets.push_back(v);
        return t;
    }
    // triangulate the cross-section polytope {vertices w / first coordinate
    // pairing} -- instead, cone over a triangulated vertex figure is awkward;
    // use the simple fan triangulation over the first ray via facets of the
    // dual cone expressed through the primal rays: every facet of sigma^vee is
    // {u : <u, v_i> = 0} for some primal ray v_i. Group dual rays by facet and
    // triangulate each facet recursively. At desk scale a direct approach is
    // enough: pick the first dual ray w0 and triangulate each facet not
    // containing w0 by the same rule.
    struct Rec {
        static void run(const std::vector<ZVec>& rays, const std::vector<QVec>& facet_normals,
                        int dim, std::vector<std::vector<ZVec>>& out) {
            if (static_cast<int>(rays.size()) == dim) {
                out.push_back(rays);
                return;
            }
            const ZVec& apex = rays.front();
            for (const auto& nrm : facet_normals) {
                if (dot(nrm, apex) != 0) {
                    // facet not containing the apex: collect its rays
                    std::vector<ZVec> fr;
                    for (const auto& r : rays)
                        if (dot(nrm, r) == 0) fr.push_back(r);
                    if (fr.size() < static_cast<size_t>(dim - 1)) continue;
                    // normals of the facet as a cone in its own right: the
                    // other facet normals restricted
                    std::vector<QVec> sub;
                    for (const auto& n2 : facet_normals)
                        if (&n2 != &nrm) sub.push_back(n2);
                    std::vector<std::vector<ZVec>> parts;
                    run(fr, sub, dim - 1, parts);
                    for (auto& piece : parts) {
                        piece.push_back(apex);
                        out.push_back(piece);
                    }
                }
            }
        }
    };
    // facet normals of the dual cone are the primal extreme rays; recover the
    // primal via the double dual
    Cone primal = dual_cone(dual);
    std::vector<QVec> normals;
    for (const auto& v : primal.rays) normals.push_back(to_qvec(v));
    std::vector<std::vector<ZVec>> pieces_raw;
    Rec::run(dual.rays, normals, n, pieces_raw);
    // deduplicate pieces (same set of rays)
    std::set<std::vector<ZVec>> seen;
    for (auto& piece : pieces_raw) {
        std::vector<ZVec> key = piece;
        std::sort(key.begin(), key.end());
        QMat m(n, QVec(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = Rat(key[i][j]);
        Rat d = det(m);
        if (d == 0) continue;
        if (!seen.insert(key).second) continue;
        Int v = d.get_num();
        if (v < 0) v = -v;
        t.pieces.push_back(key);
        t.dets.push_back(v);
    }
    return t;
}

} // namespace

ConeSingularity make_cone_singularity(const Cone& sigma, const std::vector<Rat>& coeffs) {
    require(sigma.is_full_dimensional(), "NotFullDimensional",
            "cone singularity needs a full-dimensional cone");
    require(sigma.is_strongly_convex(), "NotStronglyConvex",
            "cone singularity needs a strongly convex cone");
    require(coeffs.size() == sigma.rays.size(), "CoefficientOutOfRange",
            "one coefficient per ray");
    for (const auto& b : coeffs)
        require(b < 1, "CoefficientOutOfRange", "klt needs b < 1");
    QMat rows;
    QVec rhs;
    for (size_t i = 0; i < sigma.rays.size(); ++i) {
        rows.push_back(to_qvec(sigma.rays[i]));
        rhs.push_back(Rat(1) - coeffs[i]);
    }
    auto alpha = solve(rows, rhs);
    require(alpha.has_value(), "NotQCartier", "K+Delta is not R-Cartier on the cone");
    ConeSingularity s;
    s.sigma = sigma;
    s.coeffs = coeffs;
    s.alpha = *alpha;
    s.dual = dual_cone(sigma);
    return s;
}

ConeSingularity germ_at(const ToricPair& p, int max_cone_index) {
    const auto& mc = p.fan.max_cones[max_cone_index];
    std::vector<ZVec> rays;
    std::vector<Rat> coeffs;
    for (int i : mc) {
        rays.push_back(p.fan.rays[i]);
        coeffs.push_back(p.coeffs[i]);
    }
    return make_cone_singularity(Cone(p.fan.rank, rays), coeffs);
}

Rat valuation_volume(const ConeSingularity& s, const QVec& xi) {
    for (const auto& w : s.dual.rays)
        require(dot(xi, w) > 0, "BoundaryPoint",
                "valuation volume needs xi strictly inside the cone");
    // vertices of {u in sigma^vee : <xi, u> <= 1}: the apex and the truncated
    // dual rays
    std::vector<QVec> verts;
    verts.push_back(QVec(s.sigma.rank, Rat(0)));
    for (const auto& w : s.dual.rays) {
        Rat p = dot(xi, w);
        QVec v(s.sigma.rank);
        for (int k = 0; k < s.sigma.rank; ++k) v[k] = Rat(w[k]) / p;
        verts.push_back(v);
    }
    return polytope_volume(LatticePolytope(verts), VolumeNormalization::Lattice);
}

Rat normalized_volume(const ConeSingularity& s, const QVec& xi) {
    Rat a = s.log_discrepancy(xi);
    require(a > 0, "NotKlt", "log discrepancy must be positive inside the cone");
    return pow_rat(a, static_cast<unsigned long>(s.sigma.rank)) * valuation_volume(s, xi);
}

namespace {

struct Cell {
    std::vector<QVec> verts; // points on the A=1 slice
    Rat lower;
};

struct CellOrder {
    bool operator()(const std::pair<Rat, long>& a, const std::pair<Rat, long>& b) const {
        if (a.first != b.first) return a.first > b.first; // min-heap on lower bound
        return a.second > b.second;
    }
};

} // namespace

NvolResult minimize_nvol(const ConeSingularity& s, const Rat& rel_tol, int /*jobs*/) {
    const int n = s.sigma.rank;
    for (size_t i = 0; i < s.sigma.rays.size(); ++i)
        require(s.log_discrepancy(to_qvec(s.sigma.rays[i])) > 0, "NotKlt",
                "cone singularity is not klt");
    DualTriangulation tri = triangulate_dual(s.dual);

    auto vol_at = [&](const QVec& xi) {
        Rat v = 0;
        for (size_t t = 0; t < tri.pieces.size(); ++t) {
            Rat denom = 1;
            for (const auto& w : tri.pieces[t]) denom *= dot(xi, w);
            v += Rat(tri.dets[t]) / denom;
        }
        return v;
    };

    // slice vertices: rays scaled to A = 1
    std::vector<QVec> slice;
    for (const auto& r : s.sigma.rays) {
        Rat a = s.log_discrepancy(to_qvec(r));
        QVec v(n);
        for (int k = 0; k < n; ++k) v[k] = Rat(r[k]) / a;
        slice.push_back(v);
    }

    long evals = 0;
    Rat best_val;
    QVec best_xi;
    bool have_best = false;
    auto visit = [&](const QVec& xi) {
        // xi must be interior; vertices of the slice are on the boundary, so
        // only strictly-interior points are evaluated
        for (const auto& w : s.dual.rays)
            if (dot(xi, w) <= 0) return;
        Rat v = vol_at(xi);
        ++evals;
        if (!have_best || v < best_val) {
            best_val = v;
            best_xi = xi;
            have_best = true;
        }
    };

    auto centroid = [&](const std::vector<QVec>& verts) {
        QVec c(n, Rat(0));
        for (const auto& v : verts)
            for (int k = 0; k < n; ++k) c[k] += v[k];
        for (int k = 0; k < n; ++k) c[k] /= Rat(static_cast<long>(verts.size()));
        return c;
    };

    auto cell_lower = [&](const std::vector<QVec>& verts) {
        Rat lb = 0;
        for (size_t t = 0; t < tri.pieces.size(); ++t) {
            Rat denom = 1;
            for (const auto& w : tri.pieces[t]) {
                Rat mx = dot(verts[0], w);
                for (size_t j = 1; j < verts.size(); ++j) {
                    Rat p = dot(verts[j], w);
                    if (p > mx) mx = p;
                }
                denom *= mx;
            }
            lb += Rat(tri.dets[t]) / denom;
        }
        return lb;
    };

    // initial cells: fan triangulation of the slice polytope from vertex 0
    // (the slice of a strongly convex cone is a simplex when sigma is
    // simplicial; otherwise triangulate through index tuples)
    std::vector<Cell> cells;
    if (slice.size() == static_cast<size_t>(n)) {
        cells.push_back({slice, Rat(0)});
    } else {
        // triangulate the (n-1)-dimensional slice polytope
        LatticePolytope sp(slice);
        // fan triangulation by brute force: all n-subsets forming a simplex
        // that stays inside: use polytope machinery instead: subdivide via
        // centroid fan over facets is overkill at this scale; use all
        // (n)-subsets whose volume sums to the total
        // Practical approach: centroid fan: centroid + each facet simplex of
        // the boundary; for n <= 4 the boundary facets are edges/triangles of
        // the polytope; reuse the generic triangulation in geometry.cpp by
        // projecting to the slice hyperplane is involved -- for our inputs
        // (ODP etc.) the number of vertices is small, so split recursively:
        // cells = cone from vertex 0 over facets not containing it.
        // Here: fallback to the simple fan over consecutive vertex triples is
        // wrong in general; instead use the Delaunay-free device below.
        // Build via geometry::triangulate through an affine chart.
        QMat dirs;
        for (size_t i = 1; i < slice.size(); ++i) {
            QVec d(n);
            for (int k = 0; k < n; ++k) d[k] = slice[i][k] - slice[0][k];
            dirs.push_back(d);
        }
        // chart coordinates: pick n-1 coordinates with full rank
        std::vector<int> chart;
        for (int c = 0; c < n && static_cast<int>(chart.size()) < n - 1; ++c) {
            QMat test;
            for (const auto& row : dirs) {
                QVec t;
                for (int pc : chart) t.push_back(row[pc]);
                t.push_back(row[c]);
                test.push_back(t);
            }
            if (rank_of(test) > static_cast<int>(chart.size())) chart.push_back(c);
        }
        std::vector<QVec> proj;
        for (const auto& v : slice) {
            QVec q;
            for (int c : chart) q.push_back(v[c]);
            proj.push_back(q);
        }
        std::vector<std::vector<int>> simplices = triangulate_configuration(proj, n - 1);
        for (const auto& sx : simplices) {
            std::vector<QVec> verts;
            for (int i : sx) verts.push_back(slice[i]);
            cells.push_back({verts, Rat(0)});
        }
    }

    for (auto& c : cells) {
        c.lower = cell_lower(c.verts);
        visit(centroid(c.verts));
        for (const auto& v : c.verts) visit(v);
    }
    Rat grid_certificate = cells.front().lower;
    for (const auto& c : cells)
        if (c.lower < grid_certificate) grid_certificate = c.lower;

    // best-first refinement by longest-edge bisection
    std::priority_queue<std::pair<Rat, long>, std::vector<std::pair<Rat, long>>, CellOrder> queue;
    std::vector<Cell> pool = cells;
    for (long i = 0; i < static_cast<long>(pool.size()); ++i) queue.push({pool[i].lower, i});

    const long max_evals = 400000;
    Rat certified_lower = grid_certificate;
    while (!queue.empty() && evals < max_evals) {
        auto [lb, idx] = queue.top();
        // global certified lower bound = min over active cells
        certified_lower = lb;
        if (have_best && best_val > 0) {
            Rat gap = (best_val - lb) / best_val;
            if (gap <= rel_tol) break;
        }
        queue.pop();
        Cell cell = pool[idx];
        if (have_best && cell.lower >= best_val) continue; // pruned
        // longest edge
        size_t ea = 0, eb = 1;
        Rat longest = -1;
        for (size_t a = 0; a < cell.verts.size(); ++a) {
            for (size_t b = a + 1; b < cell.verts.size(); ++b) {
                Rat len = 0;
                for (int k = 0; k < n; ++k) {
                    Rat d = cell.verts[a][k] - cell.verts[b][k];
                    len += d * d;
                }
                if (len > longest) {
                    longest = len;
                    ea = a;
                    eb = b;
                }
            }
        }
        QVec mid(n);
        for (int k = 0; k < n; ++k) mid[k] = (cell.verts[ea][k] + cell.verts[eb][k]) / 2;
        visit(mid);
        for (int child = 0; child < 2; ++child) {
            Cell c2;
            c2.verts = cell.verts;
            c2.verts[child == 0 ? ea : eb] = mid;
            c2.lower = cell_lower(c2.verts);
            if (have_best && c2.lower >= best_val) continue;
            pool.push_back(c2);
            queue.push({c2.lower, static_cast<long>(pool.size()) - 1});
        }
    }
    if (queue.empty() && have_best) certified_lower = best_val;

    require(have_best, "InternalError", "no interior evaluation happened");
    NvolResult r;
    r.value = best_val;
    r.minimizer = best_xi;
    r.grid_certificate = grid_certificate;
    r.certified_lower = certified_lower;
    Rat gap = best_val > 0 ? (best_val - certified_lower) / best_val : Rat(0);
    r.certified = gap <= rel_tol;
    r.relative_gap = to_double(gap);
    r.evaluations = evals;
    return r;
}

RelativeCone relative_cone(const ToricPair& total, const std::map<int, Rat>& polarization,
                           const Int& r) {
    require(r > 0, "DomainError", "r must be a positive integer");
    require(total.mode == PairMode::Pair, "NotAPair", "relative cone needs a pair");
    const int n = total.fan.rank;

    // L = -r(K+Delta) exactly: a_i = r (1 - b_i), and r Delta integral
    std::vector<Int> lift_height(total.fan.rays.size());
    for (size_t i = 0; i < total.fan.rays.size(); ++i) {
        Rat expect = Rat(r) * (Rat(1) - total.coeffs[i]);
        auto it = polarization.find(static_cast<int>(i));
        Rat given = it == polarization.end() ? Rat(0) : it->second;
        require(given == expect, "NotAnticanonical",
                "polarization must equal -r(K+Delta) on every ray");
        require(expect.get_den() == 1, "NotIntegral", "r*Delta must be integral");
        lift_height[i] = expect.get_num();
    }
    require(is_ample(total, polarization), "NotLogFano",
            "-(K+Delta) must be ample (over the base)");

    // lifted generators (v_i, a_i) plus the grading direction (0,...,0,1)
    std::vector<ZVec> gens;
    for (size_t i = 0; i < total.fan.rays.size(); ++i) {
        ZVec g = total.fan.rays[i];
        g.push_back(lift_height[i]);
        gens.push_back(g);
    }
    ZVec e(n + 1, Int(0));
    e[n] = 1;
    gens.push_back(e);

    // extreme generators of the cone they span
    std::vector<int> extreme;
    for (size_t i = 0; i < gens.size(); ++i) {
        std::vector<ZVec> others;
        for (size_t j = 0; j < gens.size(); ++j)
            if (j != i) others.push_back(gens[j]);
        Cone rest(n + 1, others);
        if (!cone_contains(rest, gens[i])) extreme.push_back(static_cast<int>(i));
    }
    const bool e_extreme =
        std::find(extreme.begin(), extreme.end(), static_cast<int>(gens.size()) - 1) != extreme.end();
    for (size_t i = 0; i + 1 < gens.size(); ++i)
        require(std::find(extreme.begin(), extreme.end(), static_cast<int>(i)) != extreme.end(),
                "IdentityFailure", "a lifted boundary ray is not extreme in the cone");

    std::vector<ZVec> sigma_rays;
    std::vector<Rat> sigma_coeffs;
    for (int i : extreme) {
        sigma_rays.push_back(gens[i]);
        if (i == static_cast<int>(gens.size()) - 1)
            sigma_coeffs.push_back(Rat(1) - Rat(1) / Rat(r)); // (1 - 1/r) Gamma
        else
            sigma_coeffs.push_back(total.coeffs[i]);
    }
    RelativeCone out;
    out.cone = make_cone_singularity(Cone(n + 1, sigma_rays), sigma_coeffs);
    out.grading_ray = e;
    out.lambda = Rat(1) / Rat(r);
    out.a_of_e = dot(out.cone.alpha, to_qvec(e));
    require(out.a_of_e == out.lambda, "IdentityFailure", "A_{Y,D}(E) != 1/r");
    out.zero_section_is_divisor = e_extreme;

    // total-space identities: phi(-E) - phi(pi^*L) and phi(K~+E) - phi(pi^*K)
    // must be globally linear on the lifted fan (rays = gens, cones =
    // lift(sigma) + e). A PL function given by values on rays is linear iff
    // a single covector matches all values.
    auto is_linear = [&](const std::vector<Rat>& values) {
        QMat rows;
        QVec rhs;
        for (size_t i = 0; i < gens.size(); ++i) {
            rows.push_back(to_qvec(gens[i]));
            rhs.push_back(values[i]);
        }
        auto m = solve(rows, rhs);
        return m.has_value();
    };
    // phi_D(ray) = -mult_D(ray). E is the last generator.
    std::vector<Rat> diff1(gens.size()), diff2(gens.size());
    for (size_t i = 0; i + 1 < gens.size(); ++i) {
        auto it = polarization.find(static_cast<int>(i));
        Rat a_i = it == polarization.end() ? Rat(0) : it->second;
        // phi_{-E} = 0 on lifts; phi_{pi^*L}(v_i, h) = phi_L(v_i) = -a_i
        diff1[i] = Rat(0) - (-a_i);
        // phi_{K~+E}(lift) = +1 ; phi_{pi^*K}(v_i,h) = +1
        diff2[i] = Rat(1) - Rat(1);
    }
    // at E: phi_{-E}(e) = +1; phi_{pi^*L}(e) = phi_L(0) = 0
    diff1[gens.size() - 1] = Rat(1);
    // at E: phi_{K~+E}(e) = -(-1+1) = 0; phi_{pi^*K}(e) = 0
    diff2[gens.size() - 1] = Rat(0);
    out.identity_minus_e = is_linear(diff1);
    out.identity_canonical = is_linear(diff2);
    require(out.identity_minus_e, "IdentityFailure", "-E ~ pi^*L failed");
    require(out.identity_canonical, "IdentityFailure", "K+E ~ pi^*K failed");
    return out;
}

} // namespace toricmmp
