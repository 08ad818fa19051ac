#include "toricmmp/fan.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "toricmmp/error.hpp"
#include "toricmmp/lp.hpp"

namespace toricmmp {

Cone Fan::cone_of(const std::vector<int>& idxs) const {
    std::vector<ZVec> r;
    for (int i : idxs) r.push_back(rays[i]);
    return Cone(rank, r);
}

int Fan::ray_index(const ZVec& r) const {
    for (size_t i = 0; i < rays.size(); ++i)
        if (rays[i] == r) return static_cast<int>(i);
    return -1;
}

void ToricPair::require_projective() const {
    if (!is_projective()) fail("NotProjective", "operation needs a projective pair");
}

void ToricPair::require_complete() const {
    if (!fan.complete) fail("NotComplete", "operation needs a complete fan");
}

int ToricPair::locate(const QVec& v) const {
    for (size_t ci = 0; ci < fan.max_cones.size(); ++ci) {
        auto coords = simplicial_coordinates(fan.cone(static_cast<int>(ci)), v);
        if (!coords) continue;
        bool inside = true;
        for (const auto& l : *coords)
            if (l < 0) { inside = false; break; }
        if (inside) {
            // reject points outside the span for lower-dimensional cones
            QVec rec(v.size(), Rat(0));
            const auto& mc = fan.max_cones[ci];
            for (size_t j = 0; j < mc.size(); ++j)
                for (size_t k = 0; k < v.size(); ++k)
                    rec[k] += (*coords)[j] * Rat(fan.rays[mc[j]][k]);
            if (rec == v) return static_cast<int>(ci);
        }
    }
    return -1;
}

Rat ToricPair::log_discrepancy(const QVec& v) const {
    int ci = locate(v);
    require(ci >= 0, "OutsideSupport", "point is outside the fan support");
    return alpha.eval_in(ci, v);
}

LogDiscrepancyFunction log_discrepancy_function(const Fan& fan, const std::vector<Rat>& coeffs) {
    LogDiscrepancyFunction f;
    f.rank = fan.rank;
    for (const auto& mc : fan.max_cones) {
        QMat rows;
        QVec rhs;
        for (int i : mc) {
            rows.push_back(to_qvec(fan.rays[i]));
            rhs.push_back(Rat(1) - coeffs[i]);
        }
        auto alpha = solve(rows, rhs);
        require(alpha.has_value(), "NotQCartier",
                "K+Delta is not R-Cartier on a cone (no linear log-discrepancy form)");
        f.covectors.push_back(*alpha);
    }
    return f;
}

std::vector<Wall> interior_walls(const Fan& fan) {
    // facet (= all-but-one ray subset) -> list of (cone, opposite ray)
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> facets;
    for (size_t ci = 0; ci < fan.max_cones.size(); ++ci) {
        const auto& mc = fan.max_cones[ci];
        if (mc.empty()) continue;
        for (size_t drop = 0; drop < mc.size(); ++drop) {
            std::vector<int> facet;
            for (size_t j = 0; j < mc.size(); ++j)
                if (j != drop) facet.push_back(mc[j]);
            facets[facet].push_back({static_cast<int>(ci), mc[drop]});
        }
    }
    std::vector<Wall> walls;
    for (const auto& [facet, owners] : facets) {
        if (owners.size() != 2) continue;
        Wall w;
        w.rays = facet;
        w.cone_a = owners[0].first;
        w.opposite_a = owners[0].second;
        w.cone_b = owners[1].first;
        w.opposite_b = owners[1].second;
        walls.push_back(std::move(w));
    }
    return walls;
}

Int cone_multiplicity(const std::vector<ZVec>& rays) {
    if (rays.empty()) return 1;
    QMat dirs;
    for (const auto& r : rays) dirs.push_back(to_qvec(r));
    const int n = static_cast<int>(rays[0].size());
    const int d = rank_of(dirs);
    require(d == static_cast<int>(rays.size()), "NotSimplicial",
            "multiplicity of a non-simplicial cone");
    if (d == n) {
        QMat m(d, QVec(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m[i][j] = Rat(rays[i][j]);
        Rat dv = det(m);
        Int v = dv.get_num();
        if (v < 0) v = -v;
        return v;
    }
    // lower-dimensional: compute in lattice coordinates of the span
    // basis via iterated functional kernels (see geometry.cpp)
    // reuse polytope machinery: volume of the parallelepiped spanned equals
    // the multiplicity in induced-lattice coordinates
    std::vector<QVec> verts;
    QVec zero(n, Rat(0));
    verts.push_back(zero);
    // vertices of the parallelepiped are subsets sums; the lattice volume of
    // the simplex 0,v_1..v_d equals mult/d!, so use the simplex instead
    for (const auto& r : rays) verts.push_back(to_qvec(r));
    Rat lat = polytope_volume(LatticePolytope(verts), VolumeNormalization::Lattice);
    return lat.get_num(); // integral by construction
}

Int cone_multiplicity(const Fan& fan, const std::vector<int>& cone) {
    std::vector<ZVec> rays;
    for (int i : cone) rays.push_back(fan.rays[i]);
    return cone_multiplicity(rays);
}

namespace {

bool face_condition_holds(const Fan& fan, std::string* why) {
    std::vector<Cone> cones;
    std::vector<Cone> duals;
    for (size_t i = 0; i < fan.max_cones.size(); ++i) {
        cones.push_back(fan.cone(static_cast<int>(i)));
        duals.push_back(dual_cone(cones.back()));
    }
    for (size_t a = 0; a < cones.size(); ++a) {
        for (size_t b = a + 1; b < cones.size(); ++b) {
            std::vector<int> common;
            std::set_intersection(fan.max_cones[a].begin(), fan.max_cones[a].end(),
                                  fan.max_cones[b].begin(), fan.max_cones[b].end(),
                                  std::back_inserter(common));
            Cone common_cone = fan.cone_of(common);
            // intersection of the two cones as an H-cone
            std::vector<QVec> halfspaces;
            for (const auto& w : duals[a].rays) halfspaces.push_back(to_qvec(w));
            for (const auto& w : duals[b].rays) halfspaces.push_back(to_qvec(w));
            // constrain to span(cone a) and span(cone b)
            for (const Cone* c : {&cones[a], &cones[b]}) {
                QMat dirs;
                for (const auto& r : c->rays) dirs.push_back(to_qvec(r));
                for (const auto& nrm : kernel_basis(dirs)) {
                    halfspaces.push_back(nrm);
                    QVec neg = nrm;
                    for (auto& x : neg) x = -x;
                    halfspaces.push_back(neg);
                }
            }
            HConeRays hr = extreme_rays(halfspaces, fan.rank);
            if (!hr.lineality.empty()) {
                // intersection of two strongly convex cones is strongly convex;
                // lineality would mean invalid input slipped through
                if (why) *why = "cone intersection contains a line";
                return false;
            }
            for (const auto& r : hr.extreme) {
                if (common.empty() || !cone_contains(common_cone, r)) {
                    if (why) {
                        std::ostringstream os;
                        os << "cones " << a << " and " << b
                           << " intersect outside their common face";
                        *why = os.str();
                    }
                    return false;
                }
            }
        }
    }
    return true;
}

bool completeness_holds(const Fan& fan) {
    if (fan.max_cones.empty()) return false;
    for (const auto& mc : fan.max_cones)
        if (static_cast<int>(mc.size()) != fan.rank) return false;
    // every facet shared by exactly two max cones
    std::map<std::vector<int>, int> facet_count;
    for (const auto& mc : fan.max_cones) {
        for (size_t drop = 0; drop < mc.size(); ++drop) {
            std::vector<int> facet;
            for (size_t j = 0; j < mc.size(); ++j)
                if (j != drop) facet.push_back(mc[j]);
            ++facet_count[facet];
        }
    }
    for (const auto& [facet, count] : facet_count)
        if (count != 2) return false;
    return true;
}

std::optional<QVec> projectivity_witness(const Fan& fan) {
    std::vector<Wall> walls = interior_walls(fan);
    if (walls.empty()) {
        // single-cone germs: vacuously projective (affine)
        return QVec(fan.rays.size(), Rat(0));
    }
    QMat rows;
    QVec rhs;
    for (const auto& w : walls) {
        // relation among the involved rays, normalized positive on the two
        // opposite rays
        std::vector<int> involved = w.rays;
        involved.push_back(w.opposite_a);
        involved.push_back(w.opposite_b);
        QMat cols(fan.rank, QVec(involved.size()));
        for (size_t j = 0; j < involved.size(); ++j)
            for (int i = 0; i < fan.rank; ++i) cols[i][j] = Rat(fan.rays[involved[j]][i]);
        std::vector<QVec> ker = kernel_basis(cols);
        if (ker.size() != 1) return std::nullopt; // degenerate wall
        ZVec rel = primitive_integer_direction(ker[0]);
        const size_t ia = involved.size() - 2, ib = involved.size() - 1;
        if (rel[ia] < 0) for (auto& x : rel) x = -x;
        if (rel[ia] <= 0 || rel[ib] <= 0) return std::nullopt;
        QVec row(fan.rays.size(), Rat(0));
        for (size_t j = 0; j < involved.size(); ++j) row[involved[j]] += Rat(rel[j]);
        rows.push_back(row);
        rhs.push_back(Rat(-1)); // sum r_i phi_i <= -1: strict convexity
    }
    return lp_feasible_point(rows, rhs);
}

} // namespace

ToricPair build_pair(int rank, std::vector<ZVec> rays,
                     std::vector<std::vector<int>> max_cones,
                     const std::map<int, Rat>& coeffs, PairMode mode, FanScope scope) {
    require(rank >= 1, "NotAFan", "rank must be at least 1");
    Fan fan;
    fan.rank = rank;
    for (auto& r : rays) {
        require(static_cast<int>(r.size()) == rank, "NotAFan", "ray rank mismatch");
        require(!is_zero(r), "NotAFan", "zero ray");
        fan.rays.push_back(primitive(std::move(r)));
    }
    for (size_t i = 0; i < fan.rays.size(); ++i)
        for (size_t j = i + 1; j < fan.rays.size(); ++j)
            require(fan.rays[i] != fan.rays[j], "NotAFan", "duplicate or proportional rays");

    std::vector<bool> used(fan.rays.size(), false);
    for (auto mc : max_cones) {
        std::sort(mc.begin(), mc.end());
        require(std::adjacent_find(mc.begin(), mc.end()) == mc.end(), "NotAFan",
                "repeated ray index in a cone");
        for (int i : mc) {
            require(i >= 0 && i < static_cast<int>(fan.rays.size()), "NotAFan",
                    "cone refers to a missing ray");
            used[i] = true;
        }
        Cone c = fan.cone_of(mc);
        require(c.dim() == static_cast<int>(mc.size()), "NotSimplicial",
                "maximal cone is not simplicial");
        fan.max_cones.push_back(std::move(mc));
    }
    require(!fan.max_cones.empty(), "NotAFan", "fan needs at least one maximal cone");
    for (size_t i = 0; i < used.size(); ++i)
        require(used[i], "NotAFan", "ray " + std::to_string(i) + " not used by any cone");
    for (size_t a = 0; a < fan.max_cones.size(); ++a)
        for (size_t b = a + 1; b < fan.max_cones.size(); ++b)
            require(fan.max_cones[a] != fan.max_cones[b], "NotAFan", "duplicate maximal cone");

    std::string why;
    require(face_condition_holds(fan, &why), "NotAFan", why.empty() ? "face condition fails" : why);

    fan.complete = completeness_holds(fan);
    if (scope == FanScope::Complete)
        require(fan.complete, "NotComplete", "fan does not cover R^n");

    ToricPair p;
    p.fan = std::move(fan);
    p.mode = mode;
    p.coeffs.assign(p.fan.rays.size(), Rat(0));
    for (const auto& [idx, b] : coeffs) {
        require(idx >= 0 && idx < static_cast<int>(p.coeffs.size()), "CoefficientOutOfRange",
                "coefficient for missing ray " + std::to_string(idx));
        if (mode == PairMode::Pair)
            require(b >= 0 && b < 1, "CoefficientOutOfRange",
                    "pair mode needs 0 <= b < 1, got " + to_string(b));
        else
            require(b > -1 && b < 1, "CoefficientOutOfRange",
                    "subpair mode needs -1 < b < 1, got " + to_string(b));
        p.coeffs[idx] = b;
    }
    p.alpha = log_discrepancy_function(p.fan, p.coeffs);
    p.support_phi = projectivity_witness(p.fan);
    return p;
}

ToricPair stellar_subdivide(const ToricPair& p, const ZVec& v, const Rat& new_coeff) {
    require(primitive(v) == v, "NotPrimitive", "subdivision point must be primitive");
    require(p.fan.ray_index(v) < 0, "InvalidRay", "subdivision point is already a ray");
    Fan fan;
    fan.rank = p.fan.rank;
    fan.rays = p.fan.rays;
    fan.rays.push_back(v);
    const int new_idx = static_cast<int>(fan.rays.size()) - 1;
    bool touched = false;
    for (size_t ci = 0; ci < p.fan.max_cones.size(); ++ci) {
        const auto& mc = p.fan.max_cones[ci];
        auto coords = simplicial_coordinates(p.fan.cone(static_cast<int>(ci)), to_qvec(v));
        bool inside = coords.has_value();
        if (inside)
            for (const auto& l : *coords)
                if (l < 0) { inside = false; break; }
        if (inside) {
            // verify v is genuinely in the cone (span check)
            QVec rec(fan.rank, Rat(0));
            for (size_t j = 0; j < mc.size(); ++j)
                for (int k = 0; k < fan.rank; ++k) rec[k] += (*coords)[j] * Rat(p.fan.rays[mc[j]][k]);
            if (rec != to_qvec(v)) inside = false;
        }
        if (!inside) {
            fan.max_cones.push_back(mc);
            continue;
        }
        touched = true;
        for (size_t j = 0; j < mc.size(); ++j) {
            if ((*coords)[j] == 0) continue;
            std::vector<int> nc;
            for (size_t k = 0; k < mc.size(); ++k)
                if (k != j) nc.push_back(mc[k]);
            nc.push_back(new_idx);
            std::sort(nc.begin(), nc.end());
            fan.max_cones.push_back(std::move(nc));
        }
    }
    require(touched, "OutsideSupport", "subdivision point is outside the fan support");
    std::sort(fan.max_cones.begin(), fan.max_cones.end());
    fan.max_cones.erase(std::unique(fan.max_cones.begin(), fan.max_cones.end()), fan.max_cones.end());
    fan.complete = p.fan.complete;

    ToricPair out;
    out.fan = std::move(fan);
    out.mode = (new_coeff < 0 || p.mode == PairMode::Subpair) ? PairMode::Subpair : PairMode::Pair;
    out.coeffs = p.coeffs;
    out.coeffs.push_back(new_coeff);
    out.alpha = log_discrepancy_function(out.fan, out.coeffs);
    out.support_phi = projectivity_witness(out.fan);
    return out;
}

Fan star_fan(const Fan& fan, int ray_index) {
    const ZVec& v = fan.rays[ray_index];
    std::vector<ZVec> u = unimodular_completion(v);
    const int n = fan.rank;
    auto project = [&](const ZVec& x) {
        ZVec q(n - 1);
        for (int i = 1; i < n; ++i) q[i - 1] = dot(u[i], x);
        return q;
    };
    Fan star;
    star.rank = n - 1;
    std::map<ZVec, int> ray_idx;
    for (const auto& mc : fan.max_cones) {
        if (std::find(mc.begin(), mc.end(), ray_index) == mc.end()) continue;
        std::vector<int> cone;
        for (int i : mc) {
            if (i == ray_index) continue;
            ZVec q = primitive(project(fan.rays[i]));
            auto it = ray_idx.find(q);
            int idx;
            if (it == ray_idx.end()) {
                idx = static_cast<int>(star.rays.size());
                star.rays.push_back(q);
                ray_idx[q] = idx;
            } else {
                idx = it->second;
            }
            cone.push_back(idx);
        }
        std::sort(cone.begin(), cone.end());
        star.max_cones.push_back(std::move(cone));
    }
    std::sort(star.max_cones.begin(), star.max_cones.end());
    star.max_cones.erase(std::unique(star.max_cones.begin(), star.max_cones.end()),
                         star.max_cones.end());
    star.complete = completeness_holds(star);
    return star;
}

std::vector<std::vector<int>> all_cones(const Fan& fan) {
    std::set<std::vector<int>> cones;
    cones.insert({});
    for (const auto& mc : fan.max_cones) {
        const size_t k = mc.size();
        for (size_t mask = 1; mask < (1u << k); ++mask) {
            std::vector<int> sub;
            for (size_t j = 0; j < k; ++j)
                if (mask & (1u << j)) sub.push_back(mc[j]);
            cones.insert(sub);
        }
    }
    return {cones.begin(), cones.end()};
}

std::string canonical_form(const ToricPair& p) {
    const int n = p.fan.rank;
    std::string best;
    // signed permutations of the coordinates
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        for (int signs = 0; signs < (1 << n); ++signs) {
            std::vector<std::pair<ZVec, Rat>> rays;
            for (size_t i = 0; i < p.fan.rays.size(); ++i) {
                ZVec r(n);
                for (int j = 0; j < n; ++j) {
                    r[j] = p.fan.rays[i][perm[j]];
                    if (signs & (1 << j)) r[j] = -r[j];
                }
                rays.push_back({r, p.coeffs[i]});
            }
            std::vector<int> order(rays.size());
            for (size_t i = 0; i < rays.size(); ++i) order[i] = static_cast<int>(i);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return rays[a] < rays[b]; });
            std::vector<int> pos(rays.size());
            for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
            std::vector<std::vector<int>> cones;
            for (const auto& mc : p.fan.max_cones) {
                std::vector<int> c;
                for (int i : mc) c.push_back(pos[i]);
                std::sort(c.begin(), c.end());
                cones.push_back(std::move(c));
            }
            std::sort(cones.begin(), cones.end());
            std::ostringstream os;
            for (int i : order) {
                for (const auto& x : rays[i].first) os << x.get_str() << ',';
                os << '|' << to_string(rays[i].second) << ';';
            }
            os << '#';
            for (const auto& c : cones) {
                for (int i : c) os << i << ',';
                os << ';';
            }
            std::string s = os.str();
            if (best.empty() || s < best) best = std::move(s);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace toricmmp
