#pragma once

#include <map>
#include <optional>

#include "toricmmp/fan.hpp"

namespace toricmmp {

// A klt toric singularity germ: a full-dimensional strongly convex cone with
// torus-invariant boundary coefficients on its extreme rays.
struct ConeSingularity {
    Cone sigma;               // extreme rays only
    std::vector<Rat> coeffs;  // b_i per ray of sigma
    QVec alpha;               // linear form with <alpha, v_i> = 1 - b_i
    Cone dual;                // sigma^vee, cached

    Rat log_discrepancy(const QVec& xi) const { return dot(alpha, xi); }
};

ConeSingularity make_cone_singularity(const Cone& sigma, const std::vector<Rat>& coeffs);

// Germ of a complete pair at the torus-fixed point of a maximal cone.
ConeSingularity germ_at(const ToricPair& p, int max_cone_index);

// n! times the euclidean volume of {u in sigma^vee : <xi, u> <= 1}.
Rat valuation_volume(const ConeSingularity& s, const QVec& xi);

// A(xi)^n * vol(xi).
Rat normalized_volume(const ConeSingularity& s, const QVec& xi);

struct NvolResult {
    Rat value;            // exact objective at the reported minimizer
    QVec minimizer;       // on the slice {A(xi) = 1}
    Rat grid_certificate; // global lower bound from the coarsest pass
    Rat certified_lower;  // best certified global lower bound at termination
    bool certified;       // relative gap <= rel_tol reached
    double relative_gap;
    long evaluations;
};

// Deterministic branch-and-bound over the A=1 slice: per-cell product bounds
// give true lower bounds, refinement shrinks the gap to rel_tol.
NvolResult minimize_nvol(const ConeSingularity& s, const Rat& rel_tol, int jobs = 1);

struct RelativeCone {
    ConeSingularity cone;     // (Y, D) as a cone singularity
    ZVec grading_ray;         // xi_E in the lifted lattice N x Z
    Rat a_of_e;               // A_{Y,D}(E)
    Rat lambda;               // 1/r; a_of_e == lambda is asserted
    bool zero_section_is_divisor; // grading ray extreme (the base is birational to Y's quotient)
    bool identity_minus_e;    // -E ~ pi^* L on the total space
    bool identity_canonical;  // K + E ~ pi^* K_X on the total space
};

// Relative orbifold cone over the section ring of L = -r(K+Delta). `total`
// must be (relatively) ample-projective; Z is a point when the fan is
// complete, otherwise the affine base is the support cone.
RelativeCone relative_cone(const ToricPair& total, const std::map<int, Rat>& polarization,
                           const Int& r);

} // namespace toricmmp
