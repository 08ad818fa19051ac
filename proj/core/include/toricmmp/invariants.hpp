#pragma once

#include <map>
#include <optional>

#include "toricmmp/fan.hpp"

namespace toricmmp {

// An exact rational extended with +infinity (used by lct and alpha).
struct ExtRat {
    Rat value;
    bool infinite = false;

    static ExtRat inf() { return {Rat(0), true}; }
    static ExtRat of(Rat v) { return {std::move(v), false}; }
    bool operator<(const ExtRat& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
};

// Minimal log discrepancy over valuations whose center is contained in the
// orbit closure of `cone` (given as ray indices into the fan; the full
// maximal cone gives the mld at the torus-fixed point).
Rat mld(const ToricPair& p, const std::vector<int>& cone);

// Log canonical threshold of the torus-invariant effective divisor D (ray
// index -> multiplicity). `at` restricts to valuations centered in the orbit
// closure of that cone; nullopt means the global threshold.
ExtRat lct(const ToricPair& p, const std::map<int, Rat>& divisor,
           const std::optional<std::vector<int>>& at = std::nullopt);

// Alpha invariant of the complete linear series of a nef torus-invariant
// divisor L (ray index -> coefficient), restricted to torus-invariant members.
ExtRat alpha_invariant(const ToricPair& p, const std::map<int, Rat>& polarization);

struct TopologicalInvariants {
    Int picard;                         // rho(X) = #rays - n
    std::vector<Int> picard_boundary;   // rho(V(v_i)) per ray (boundary or not)
    Int h_alg_2n_minus_4;               // even Betti number b_{2n-4}
    Int gorenstein_index;               // Cartier index of K_X
    std::vector<Int> cartier_index;     // per invariant prime divisor D_i
    Int rho_pair;                       // rho(X,Delta) = rho(X)+rho(B~)+h^alg
    std::vector<Int> betti;             // b_0, b_2, ..., b_2n (h-vector)
};
TopologicalInvariants topological_invariants(const ToricPair& p);

// Cartier index of an arbitrary invariant Weil divisor (ray -> multiplicity).
Int cartier_index(const ToricPair& p, const std::map<int, Rat>& divisor);

struct NumericalInvariants {
    Rat vol_delta;        // vol of the boundary class (lattice-normalized)
    Rat vol_k_plus_delta; // vol of K+Delta
    Rat delta_dot_h;      // (Delta . H^{n-1})
    Rat max_coeff;        // max Coeff(Delta)
};
NumericalInvariants numerical_invariants(const ToricPair& p, const std::map<int, Rat>& ample);

// Degree pairing (D . H^{n-1}) for arbitrary torus-invariant D and ample H.
Rat degree_against(const ToricPair& p, const std::map<int, Rat>& divisor,
                   const std::map<int, Rat>& ample);

// Volume of a torus-invariant R-divisor class (lattice normalization; 0 when
// the class is not big).
Rat divisor_volume(const ToricPair& p, const std::map<int, Rat>& divisor);

// Moment polytope {u : <u, v_i> >= -a_i} of a divisor.
std::vector<QVec> moment_polytope(const ToricPair& p, const std::map<int, Rat>& divisor);

bool is_nef(const ToricPair& p, const std::map<int, Rat>& divisor);
bool is_ample(const ToricPair& p, const std::map<int, Rat>& divisor);

struct Terminalization {
    ToricPair pair;
    std::vector<std::pair<ZVec, Rat>> inserted; // ray and its A-value, in order
};
// Crepant extraction of every exceptional lattice point with A <= 1, by
// iterated stellar subdivision; the result is terminal.
Terminalization terminalize(const ToricPair& p);

// Exceptional primitive lattice points with A(v) <= bound (not rays), unique.
std::vector<ZVec> low_discrepancy_points(const ToricPair& p, const Rat& bound,
                                         bool strict = false);

} // namespace toricmmp
