#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "toricmmp/fan.hpp"

namespace toricmmp {

enum class WallKind { Fibering, Divisorial, Flipping };

struct WallData {
    Wall wall;
    std::vector<int> involved; // wall rays then opposite_a, opposite_b
    ZVec relation;             // primitive; positive on the two opposite rays
    Rat degree;                // (K+Delta) . wall curve
    WallKind kind;
    bool flop = false;         // degree == 0
};

// Every interior wall with its curve class, (K+Delta)-degree and
// contraction-type classification.
std::vector<WallData> mori_walls(const ToricPair& p);

struct MmpStep {
    enum class Kind { Divisorial, Flip, MoriFiberSpace };
    Kind kind;
    WallData contracted;
    std::vector<int> removed_rays;     // fan ray indices removed (Divisorial)
    std::optional<ToricPair> after;    // absent for MoriFiberSpace
};

// Executes the contraction of the wall's curve class. Errors: ZeroDegree,
// PositiveDegree, NotContractible (re-fanning fails validation).
MmpStep mmp_step(const ToricPair& p, const WallData& w);

enum class Strategy { First, Random, Index };

struct MmpRun {
    enum class Outcome { MinimalModel, MoriFiberSpace };
    ToricPair initial;
    std::vector<MmpStep> steps;
    Outcome outcome = Outcome::MinimalModel;
    bool budget_exceeded = false;
    std::string strategy;
    std::uint64_t seed = 0;

    const ToricPair& final_pair() const;
    // pairs visited: initial, then after every birational step
    std::vector<const ToricPair*> pairs() const;
};

MmpRun mmp_run(const ToricPair& p, Strategy strategy, std::uint64_t seed, int index, long budget);

struct EnumerationResult {
    std::vector<MmpRun> runs;
    bool budget_exceeded = false;
    long steps_executed = 0;
};

// Depth-first enumeration of all maximal MMP sequences, branching over every
// contractible negative class; runs deduplicated by canonical form.
EnumerationResult enumerate_runs(const ToricPair& p, long budget,
                                 const std::string& checkpoint_dir = "");

} // namespace toricmmp
