#include "toricmmp/invariants.hpp"

#include <algorithm>
#include <set>

#include "toricmmp/error.hpp"

namespace toricmmp {

namespace {

// All primitive lattice points v of the support with A(v) <= bound, indexed
// with the minimal cone containing them. Excludes the origin; includes rays.
struct LowPoint {
    ZVec v;
    Rat a;                  // A(v)
    std::vector<int> sigma; // ray indices of the minimal containing cone
};

std::vector<int> minimal_cone(const ToricPair& p, int cone_index, const QVec& coords) {
    std::vector<int> sigma;
    const auto& mc = p.fan.max_cones[cone_index];
    for (size_t j = 0; j < mc.size(); ++j)
        if (coords[j] > 0) sigma.push_back(mc[j]);
    return sigma;
}

std::vector<LowPoint> enumerate_low_points(const ToricPair& p, const Rat& bound) {
    std::map<ZVec, LowPoint> found;
    for (size_t ci = 0; ci < p.fan.max_cones.size(); ++ci) {
        Cone c = p.fan.cone(static_cast<int>(ci));
        const QVec& ell = p.alpha.covectors[ci];
        for (const auto& r : c.rays)
            require(dot(ell, r) > 0, "NotKlt", "log discrepancy not positive on a ray");
        for (const auto& v : enumerate_lattice_points(c, ell, bound)) {
            if (is_zero(v)) continue;
            if (primitive(v) != v) continue;
            if (found.count(v)) continue;
            auto coords = simplicial_coordinates(c, to_qvec(v));
            LowPoint lp;
            lp.v = v;
            lp.a = dot(ell, v);
            lp.sigma = minimal_cone(p, static_cast<int>(ci), *coords);
            found[v] = std::move(lp);
        }
    }
    std::vector<LowPoint> out;
    for (auto& [v, lp] : found) out.push_back(std::move(lp));
    return out;
}

bool contains_all(const std::vector<int>& super, const std::vector<int>& sub) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

} // namespace

std::vector<ZVec> low_discrepancy_points(const ToricPair& p, const Rat& bound, bool strict) {
    std::vector<ZVec> pts;
    for (const auto& lp : enumerate_low_points(p, bound)) {
        if (strict && lp.a == bound) continue;
        if (p.fan.ray_index(lp.v) >= 0) continue; // not exceptional
        pts.push_back(lp.v);
    }
    return pts;
}

Rat mld(const ToricPair& p, const std::vector<int>& cone) {
    require(p.mode == PairMode::Pair, "NotAPair", "mld needs pair mode");
    std::vector<int> sigma = cone;
    std::sort(sigma.begin(), sigma.end());
    // check sigma is a cone of the fan
    bool is_face = false;
    for (const auto& mc : p.fan.max_cones)
        if (contains_all(mc, sigma)) { is_face = true; break; }
    require(is_face, "NotACone", "the given rays do not span a cone of the fan");
    require(!sigma.empty(), "NotACone", "mld center must be a nonzero cone");

    // upper bound: the point sum(v_i over sigma) has A = sum A(v_i) and its
    // minimal cone is sigma itself
    Rat bound = 0;
    for (int i : sigma) bound += Rat(1) - p.coeffs[i];
    Rat best = bound;
    for (const auto& lp : enumerate_low_points(p, bound)) {
        if (!contains_all(lp.sigma, sigma)) continue; // center not inside V(sigma)
        if (lp.a < best) best = lp.a;
    }
    return best;
}

namespace {

Rat divisor_pairing(const ToricPair& p, const std::map<int, Rat>& divisor, int cone_index,
                    const QVec& coords) {
    // v(D) = sum over rays of the cone of lambda_i * mult_i
    Rat s = 0;
    const auto& mc = p.fan.max_cones[cone_index];
    for (size_t j = 0; j < mc.size(); ++j) {
        auto it = divisor.find(mc[j]);
        if (it != divisor.end()) s += coords[j] * it->second;
    }
    return s;
}

} // namespace

ExtRat lct(const ToricPair& p, const std::map<int, Rat>& divisor,
           const std::optional<std::vector<int>>& at) {
    for (const auto& [idx, m] : divisor) {
        require(idx >= 0 && idx < static_cast<int>(p.fan.rays.size()), "CoefficientOutOfRange",
                "divisor multiplicity on a missing ray");
        require(m >= 0, "NegativeDivisor", "lct needs an effective divisor");
    }
    // candidates: rays of the region of interest; on each maximal cone both
    // A and v(D) are linear, so the minimum of A/v(D) is attained at a ray.
    std::vector<int> region;
    if (at) {
        region = *at;
        std::sort(region.begin(), region.end());
        bool is_face = false;
        for (const auto& mc : p.fan.max_cones)
            if (contains_all(mc, region)) { is_face = true; break; }
        require(is_face, "NotACone", "lct center is not a cone of the fan");
    }
    ExtRat best = ExtRat::inf();
    for (size_t i = 0; i < p.fan.rays.size(); ++i) {
        if (at) {
            // only valuations with center inside V(at): rays of that cone
            if (std::find(region.begin(), region.end(), static_cast<int>(i)) == region.end())
                continue;
        }
        auto it = divisor.find(static_cast<int>(i));
        const Rat mult = it == divisor.end() ? Rat(0) : it->second;
        if (mult == 0) continue;
        Rat ratio = (Rat(1) - p.coeffs[i]) / mult;
        if (ExtRat::of(ratio) < best) best = ExtRat::of(ratio);
    }
    return best;
}

std::vector<QVec> moment_polytope(const ToricPair& p, const std::map<int, Rat>& divisor) {
    std::vector<QVec> normals;
    std::vector<Rat> offsets;
    for (size_t i = 0; i < p.fan.rays.size(); ++i) {
        normals.push_back(to_qvec(p.fan.rays[i]));
        auto it = divisor.find(static_cast<int>(i));
        offsets.push_back(it == divisor.end() ? Rat(0) : -it->second);
    }
    return polytope_vertices(normals, offsets);
}

namespace {

// wall bend of the PL function phi (values on rays): sum r_i phi_i with the
// relation normalized positive on the two opposite rays; negative bend means
// strictly convex across the wall.
Rat wall_bend(const Fan& fan, const Wall& w, const std::vector<Rat>& phi) {
    std::vector<int> involved = w.rays;
    involved.push_back(w.opposite_a);
    involved.push_back(w.opposite_b);
    QMat cols(fan.rank, QVec(involved.size()));
    for (size_t j = 0; j < involved.size(); ++j)
        for (int i = 0; i < fan.rank; ++i) cols[i][j] = Rat(fan.rays[involved[j]][i]);
    std::vector<QVec> ker = kernel_basis(cols);
    require(ker.size() == 1, "InternalError", "degenerate wall relation");
    ZVec rel = primitive_integer_direction(ker[0]);
    const size_t ia = involved.size() - 2;
    if (rel[ia] < 0) for (auto& x : rel) x = -x;
    Rat bend = 0;
    for (size_t j = 0; j < involved.size(); ++j) bend += Rat(rel[j]) * phi[involved[j]];
    return bend;
}

std::vector<Rat> phi_of_divisor(const ToricPair& p, const std::map<int, Rat>& divisor) {
    std::vector<Rat> phi(p.fan.rays.size(), Rat(0));
    for (const auto& [i, a] : divisor) phi[i] = -a;
    return phi;
}

} // namespace

bool is_nef(const ToricPair& p, const std::map<int, Rat>& divisor) {
    std::vector<Rat> phi = phi_of_divisor(p, divisor);
    for (const auto& w : interior_walls(p.fan))
        if (wall_bend(p.fan, w, phi) > 0) return false;
    return true;
}

bool is_ample(const ToricPair& p, const std::map<int, Rat>& divisor) {
    std::vector<Rat> phi = phi_of_divisor(p, divisor);
    for (const auto& w : interior_walls(p.fan))
        if (wall_bend(p.fan, w, phi) >= 0) return false;
    return true;
}

ExtRat alpha_invariant(const ToricPair& p, const std::map<int, Rat>& polarization) {
    p.require_projective();
    p.require_complete();
    require(is_nef(p, polarization), "NotNef", "alpha invariant needs a nef polarization");
    std::vector<QVec> P = moment_polytope(p, polarization);
    require(!P.empty(), "NotNef", "empty moment polytope");

    ExtRat best = ExtRat::inf();
    for (size_t ci = 0; ci < p.fan.max_cones.size(); ++ci) {
        Cone sigma = p.fan.cone(static_cast<int>(ci));
        // vertex of P attached to this cone: <u, v_i> = -a_i for rays of sigma
        QMat rows;
        QVec rhs;
        for (int i : p.fan.max_cones[ci]) {
            rows.push_back(to_qvec(p.fan.rays[i]));
            auto it = polarization.find(i);
            rhs.push_back(it == polarization.end() ? Rat(0) : -it->second);
        }
        auto u_sigma = solve(rows, rhs);
        require(u_sigma.has_value(), "NotNef", "no supporting vertex for a maximal cone");
        // regions where a fixed vertex u' maximizes <v, u'> over P
        for (const auto& u_prime : P) {
            std::vector<QVec> halfspaces;
            // v in sigma
            Cone dual = dual_cone(sigma);
            for (const auto& w : dual.rays) halfspaces.push_back(to_qvec(w));
            // <v, u' - u''> >= 0 for all vertices u''
            for (const auto& u2 : P) {
                if (u2 == u_prime) continue;
                QVec h(p.fan.rank);
                for (int k = 0; k < p.fan.rank; ++k) h[k] = u_prime[k] - u2[k];
                halfspaces.push_back(h);
            }
            HConeRays hr = extreme_rays(halfspaces, p.fan.rank);
            for (const auto& v : hr.extreme) {
                Rat denom = 0;
                for (int k = 0; k < p.fan.rank; ++k)
                    denom += (u_prime[k] - (*u_sigma)[k]) * Rat(v[k]);
                if (denom <= 0) continue; // no torus-invariant member vanishes here
                Rat a = p.alpha.eval_in(static_cast<int>(ci), to_qvec(v));
                ExtRat cand = ExtRat::of(a / denom);
                if (cand < best) best = cand;
            }
        }
    }
    return best;
}

namespace {

Int pl_cartier_index(const ToricPair& p, const std::map<int, Rat>& divisor) {
    // smallest k with k * m_sigma integral for every maximal cone
    Int k = 1;
    for (size_t ci = 0; ci < p.fan.max_cones.size(); ++ci) {
        QMat rows;
        QVec rhs;
        for (int i : p.fan.max_cones[ci]) {
            rows.push_back(to_qvec(p.fan.rays[i]));
            auto it = divisor.find(i);
            rhs.push_back(it == divisor.end() ? Rat(0) : -it->second);
        }
        auto m = solve(rows, rhs);
        require(m.has_value(), "NotQCartier", "divisor is not Q-Cartier on a cone");
        for (const auto& c : *m) k = lcm(k, c.get_den());
    }
    return k;
}

} // namespace

Int cartier_index(const ToricPair& p, const std::map<int, Rat>& divisor) {
    return pl_cartier_index(p, divisor);
}

TopologicalInvariants topological_invariants(const ToricPair& p) {
    p.require_complete();
    const int n = p.fan.rank;
    TopologicalInvariants t;
    t.picard = Int(static_cast<long>(p.fan.rays.size())) - n;

    // Betti numbers of a complete simplicial toric variety from the f-vector:
    // sum_sigma (t-1)^{n-dim sigma} = sum_k b_{2k} t^k.
    std::vector<Int> dim_count(n + 1, Int(0));
    for (const auto& c : all_cones(p.fan)) ++dim_count[c.size()];
    t.betti.assign(n + 1, Int(0));
    for (int j = 0; j <= n; ++j) {
        // (t-1)^{n-j} contributes binom(n-j, k) (-1)^{n-j-k} to t^k
        for (int k = 0; k <= n - j; ++k) {
            Int binom;
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n - j),
                         static_cast<unsigned long>(k));
            Int term = dim_count[j] * binom;
            if ((n - j - k) % 2 != 0) term = -term;
            t.betti[k] += term;
        }
    }
    t.h_alg_2n_minus_4 = n >= 2 ? t.betti[n - 2] : Int(0);

    for (size_t i = 0; i < p.fan.rays.size(); ++i) {
        Fan star = star_fan(p.fan, static_cast<int>(i));
        t.picard_boundary.push_back(Int(static_cast<long>(star.rays.size())) - (n - 1));
    }

    std::map<int, Rat> canonical;
    for (size_t i = 0; i < p.fan.rays.size(); ++i) canonical[static_cast<int>(i)] = Rat(-1);
    t.gorenstein_index = pl_cartier_index(p, canonical);
    for (size_t i = 0; i < p.fan.rays.size(); ++i) {
        std::map<int, Rat> d;
        d[static_cast<int>(i)] = Rat(1);
        t.cartier_index.push_back(pl_cartier_index(p, d));
    }

    t.rho_pair = t.picard + t.h_alg_2n_minus_4;
    for (size_t i = 0; i < p.fan.rays.size(); ++i)
        if (p.coeffs[i] != 0) t.rho_pair += t.picard_boundary[i];
    return t;
}

Rat divisor_volume(const ToricPair& p, const std::map<int, Rat>& divisor) {
    std::vector<QVec> verts = moment_polytope(p, divisor);
    if (verts.empty()) return 0;
    LatticePolytope poly(verts);
    // volume counts only when full-dimensional (big class)
    return polytope_volume(poly, VolumeNormalization::Lattice);
}

Rat degree_against(const ToricPair& p, const std::map<int, Rat>& divisor,
                   const std::map<int, Rat>& ample) {
    p.require_projective();
    require(is_ample(p, ample), "NotAmple", "degree pairing needs an ample polarization");
    const int n = p.fan.rank;
    std::vector<QVec> P = moment_polytope(p, ample);
    require(!P.empty(), "NotAmple", "empty polytope for an ample divisor");
    Rat total = 0;
    for (const auto& [ray_idx, mult] : divisor) {
        if (mult == 0) continue;
        // facet of P dual to the ray: <u, v_i> = -a_i
        auto it = ample.find(ray_idx);
        const Rat a_i = it == ample.end() ? Rat(0) : it->second;
        std::vector<QVec> fverts;
        for (const auto& u : P)
            if (dot(u, p.fan.rays[ray_idx]) == -a_i) fverts.push_back(u);
        if (fverts.size() < static_cast<size_t>(n)) continue; // not a facet
        Rat fvol = polytope_volume(LatticePolytope(fverts), VolumeNormalization::Lattice);
        total += mult * fvol;
    }
    return total;
}

NumericalInvariants numerical_invariants(const ToricPair& p, const std::map<int, Rat>& ample) {
    p.require_projective();
    require(is_ample(p, ample), "NotAmple", "numerical invariants need an ample polarization");
    NumericalInvariants r;
    std::map<int, Rat> delta, k_plus_delta;
    r.max_coeff = 0;
    for (size_t i = 0; i < p.fan.rays.size(); ++i) {
        if (p.coeffs[i] != 0) delta[static_cast<int>(i)] = p.coeffs[i];
        k_plus_delta[static_cast<int>(i)] = p.coeffs[i] - 1;
        if (p.coeffs[i] > r.max_coeff) r.max_coeff = p.coeffs[i];
    }
    r.vol_delta = divisor_volume(p, delta);
    r.vol_k_plus_delta = divisor_volume(p, k_plus_delta);
    r.delta_dot_h = degree_against(p, delta, ample);
    return r;
}

Terminalization terminalize(const ToricPair& p) {
    require(p.mode == PairMode::Pair, "NotAPair", "terminalize needs pair mode");
    Terminalization t{p, {}};
    while (true) {
        std::vector<ZVec> candidates = low_discrepancy_points(t.pair, Rat(1));
        if (candidates.empty()) break;
        // deterministic pick: smallest A, then lexicographically smallest
        ZVec best = candidates[0];
        Rat best_a = t.pair.log_discrepancy(best);
        for (const auto& v : candidates) {
            Rat a = t.pair.log_discrepancy(v);
            if (a < best_a || (a == best_a && v < best)) {
                best = v;
                best_a = a;
            }
        }
        t.pair = stellar_subdivide(t.pair, best, Rat(1) - best_a);
        t.inserted.push_back({best, best_a});
    }
    return t;
}

} // namespace toricmmp
