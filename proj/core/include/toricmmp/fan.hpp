#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricmmp/geometry.hpp"

namespace toricmmp {

struct Fan {
    int rank = 0;
    std::vector<ZVec> rays;                   // primitive, pairwise distinct
    std::vector<std::vector<int>> max_cones;  // sorted index sets
    bool complete = false;                    // computed during validation

    Cone cone(int idx) const { return cone_of(max_cones[idx]); }
    Cone cone_of(const std::vector<int>& idxs) const;
    int ray_index(const ZVec& r) const;       // -1 if absent
};

enum class PairMode { Pair, Subpair };

// The piecewise-linear function realizing log discrepancies of toric
// valuations: one covector per maximal cone, pairing rays to 1 - b_i.
struct LogDiscrepancyFunction {
    int rank = 0;
    std::vector<QVec> covectors; // indexed like fan.max_cones

    // A(v) for v in the cone with the given index.
    Rat eval_in(int cone_index, const QVec& v) const { return dot(covectors[cone_index], v); }
};

struct ToricPair {
    Fan fan;
    std::vector<Rat> coeffs;   // per ray; b_i
    PairMode mode = PairMode::Pair;
    std::optional<QVec> support_phi; // strictly convex support function values, iff projective
    LogDiscrepancyFunction alpha;

    bool is_projective() const { return support_phi.has_value(); }
    void require_projective() const;
    void require_complete() const;

    // max cone containing v (first match), or -1 when v is outside the support
    int locate(const QVec& v) const;
    int locate(const ZVec& v) const { return locate(to_qvec(v)); }

    Rat log_discrepancy(const QVec& v) const; // A(v); errors outside support
    Rat log_discrepancy(const ZVec& v) const { return log_discrepancy(to_qvec(v)); }
};

struct Wall {
    std::vector<int> rays;  // sorted ray indices spanning the wall
    int cone_a = -1, cone_b = -1;
    int opposite_a = -1, opposite_b = -1; // the ray of each cone not in the wall
};

// Validation strictness: the public builder requires completeness; germ and
// relative fixtures (affine cones, bundle total spaces) opt out.
enum class FanScope { Complete, Quasiprojective };

ToricPair build_pair(int rank, std::vector<ZVec> rays,
                     std::vector<std::vector<int>> max_cones,
                     const std::map<int, Rat>& coeffs, PairMode mode,
                     FanScope scope = FanScope::Complete);

LogDiscrepancyFunction log_discrepancy_function(const Fan& fan, const std::vector<Rat>& coeffs);

std::vector<Wall> interior_walls(const Fan& fan);

// Lattice multiplicity (index) of the sublattice generated by the rays inside
// the lattice of their span; 1 means smooth.
Int cone_multiplicity(const Fan& fan, const std::vector<int>& cone);
Int cone_multiplicity(const std::vector<ZVec>& rays);

// Stellar subdivision at a primitive lattice point in the support. The new
// ray is appended; `new_coeff` becomes its boundary coefficient.
ToricPair stellar_subdivide(const ToricPair& p, const ZVec& v, const Rat& new_coeff);

// Star fan of a ray: the fan of the orbit closure V(v_i) in N / Z v_i.
Fan star_fan(const Fan& fan, int ray_index);

// Lexicographically minimal serialization over the signed-permutation
// subgroup of GL(n, Z); used to deduplicate enumerated runs.
std::string canonical_form(const ToricPair& p);

// All cones of the fan (as sorted ray index sets), including the zero cone.
std::vector<std::vector<int>> all_cones(const Fan& fan);

} // namespace toricmmp
