#pragma once

#include <set>
#include <vector>

#include "toricmmp/linalg.hpp"

namespace toricmmp {

// A rational polyhedral cone given by generators ("rays"). Rays are primitive
// integer vectors; for non-pointed cones the generator list may contain
// opposite pairs. All values are immutable after construction.
struct Cone {
    int rank = 0;
    std::vector<ZVec> rays;

    Cone() = default;
    Cone(int rank_, std::vector<ZVec> rays_);

    bool is_full_dimensional() const;
    bool is_strongly_convex() const;
    int dim() const;
};

struct LatticePolytope {
    std::vector<QVec> vertices; // irredundant

    explicit LatticePolytope(std::vector<QVec> verts);
};

enum class VolumeNormalization { Euclidean, Lattice };

// {m : <m, v> >= 0 for all v in c}; generators primitive. Involutive on
// cones satisfying the precondition (strongly convex or full-dimensional).
Cone dual_cone(const Cone& c);

// Exactly {v in c cap Z^rank : <ell, v> <= bound}. Requires <ell, v> > 0 on
// c minus the origin, so the region is bounded.
std::set<ZVec> enumerate_lattice_points(const Cone& c, const QVec& ell, const Rat& bound);

// Exact volume. For a polytope of dimension d < rank, the volume is measured
// in coordinates of the induced lattice on its affine span, so the lattice
// normalization (x d!) is intrinsic.
Rat polytope_volume(const LatticePolytope& p, VolumeNormalization norm);

// --- support machinery shared by the higher modules ---

// Extreme rays of {x : a_i . x >= 0}; generators of the lineality space are
// returned separately.
struct HConeRays {
    std::vector<ZVec> extreme;  // primitive
    std::vector<ZVec> lineality; // lattice basis of {x : a_i . x = 0}
};
HConeRays extreme_rays(const std::vector<QVec>& halfspaces, int n);

// Vertices of {x : a_i . x >= b_i}; empty result means empty or unbounded in
// a direction that kills all vertices (callers check boundedness separately).
std::vector<QVec> polytope_vertices(const std::vector<QVec>& normals, const std::vector<Rat>& offsets);

bool cone_contains(const Cone& c, const QVec& point);   // via the dual description
bool cone_contains(const Cone& c, const ZVec& point);

// Barycentric coordinates w.r.t. the rays of a simplicial cone; nullopt when
// the point is outside the linear span.
std::optional<QVec> simplicial_coordinates(const Cone& c, const QVec& point);

Rat simplex_volume(const std::vector<QVec>& verts); // euclidean, dim = verts-1

// Index triangulation of a full-dimensional polytope (given by its vertex
// set) in R^dim: fan from the lexicographically smallest vertex over facets.
std::vector<std::vector<int>> triangulate_configuration(const std::vector<QVec>& pts, int dim);

} // namespace toricmmp
