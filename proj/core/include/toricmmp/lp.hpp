#pragma once

#include <optional>

#include "toricmmp/linalg.hpp"

namespace toricmmp {

// Exact rational feasibility: find x with a_i . x <= b_i for every row.
// Returns a feasible point or nullopt. Phase-1 simplex with Bland's rule.
std::optional<QVec> lp_feasible_point(const QMat& rows, const QVec& rhs);

} // namespace toricmmp
