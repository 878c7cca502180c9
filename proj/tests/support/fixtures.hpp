#pragma once

#include <utility>
#include <vector>

#include "sbmgof/graph.hpp"
#include "sbmgof/stats.hpp"

namespace sbmgof::testfix {

// Shared 6-node worked example used across suites: 7 edges, three blocks
// {1,2} | {3,4,5} | {6} (1-based).  Small enough that every fiber statement
// about it can be checked by full enumeration, yet it exercises a singleton
// block, an empty block pair and all three statistic types.
//
// Known values (frozen from independent hand/brute-force computation):
//   block-pair edge counts (11,12,13,22,23,33) = (0,4,0,1,2,0)
//   block degree sums                          = (4,8,2)
//   degree sequence                            = (2,2,3,2,3,2)
inline Graph demo6_graph() {
    return Graph::from_edges(6, {{1, 4}, {2, 5}, {0, 4}, {0, 2}, {1, 3}, {2, 3}, {4, 5}});
}

inline BlockAssignment demo6_blocks() { return BlockAssignment(3, {0, 0, 1, 1, 1, 2}); }

// demo6 after swapping one block-(1,2) edge for another: drop {1,5}, add {2,3}
// (1-based).  Shares all block-pair edge counts with demo6_graph.
inline Graph demo6_after_pair_swap() {
    return Graph::from_edges(6, {{1, 4}, {2, 5}, {1, 2}, {0, 2}, {1, 3}, {2, 3}, {4, 5}});
}

// demo6 after the degree-preserving 6-walk move: drop {2,4},{3,4},{5,6},
// add {2,3},{4,5},{4,6} (1-based).  Shares the full beta-model statistic
// (block-pair counts AND degree sequence) with demo6_graph.
inline Graph demo6_after_walk_move() {
    return Graph::from_edges(6, {{1, 4}, {2, 5}, {0, 4}, {0, 2}, {1, 2}, {3, 4}, {3, 5}});
}

// Balanced two-block fixture on 6 nodes whose ER statistic is strictly inside
// the model polytope (1 edge within each block, 3 of 9 across), so MLE-gated
// flows accept it and its fiber (size 756) is cheap to enumerate.
inline Graph interior6_graph() {
    return Graph::from_edges(6, {{0, 1}, {3, 4}, {0, 3}, {1, 4}, {2, 5}});
}

inline BlockAssignment interior6_blocks() { return BlockAssignment(2, {0, 0, 0, 1, 1, 1}); }

// 6-cycle 1-5-4-3-2-6-1 on balanced blocks {1,2,3} | {4,5,6}: its full
// heterogeneous-model statistic (1,4,1 | 2,2,2,2,2,2) is strictly interior
// (verified with an exact LP oracle over all 2^15 graphs), so the
// degree-corrected fit exists; its fiber has exactly 45 elements.
inline Graph beta6_graph() {
    return Graph::from_edges(6, {{0, 4}, {0, 5}, {1, 2}, {1, 5}, {2, 3}, {3, 4}});
}

inline BlockAssignment beta6_blocks() { return BlockAssignment(2, {0, 0, 0, 1, 1, 1}); }

} // namespace sbmgof::testfix
