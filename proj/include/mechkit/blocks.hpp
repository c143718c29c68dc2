#pragma once

#include <utility>
#include <vector>

#include "mechkit/core.hpp"

namespace mechkit {

using Cell = std::pair<ObjectId, ObjectId>;  // (agent-0 object, agent-1 object)

// R_1, R_2, the reduced infeasible set and its B-connected blocks for a
// two-agent constraint.
struct BlockDecomposition {
    int objects = 0;
    std::vector<ObjectId> r1, r2;
    std::vector<Cell> cstar;               // sorted by (x, y)
    std::vector<std::vector<Cell>> blocks; // ordered by minimal cell index, cells sorted
};

BlockDecomposition decompose(const Constraint& c);

// Row/column object permutations placing R objects first and grouping each
// block's rows/columns contiguously where possible (best effort).
std::pair<std::vector<ObjectId>, std::vector<ObjectId>>
block_diagonal_order(const BlockDecomposition& d);

// 2^p: number of strategy-proof and Pareto efficient mechanisms.
std::uint64_t count_sp_pe(const BlockDecomposition& d);

}  // namespace mechkit
