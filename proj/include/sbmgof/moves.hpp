#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <sbmgof/graph.hpp>
#include <sbmgof/rng.hpp>
#include <sbmgof/stats.hpp>

namespace sbmgof {

// A fiber move: flip the remove-dyads off and the add-dyads on.  Dyads are
// stored normalized (u < v), sorted, and the two sets are disjoint.
struct Move {
    std::vector<std::pair<int, int>> add;
    std::vector<std::pair<int, int>> remove;

    // Sorts both sides and normalizes each dyad to (min,max); throws
    // DataError on loops or duplicate dyads.
    void normalize();
    Move reversed() const { return Move{remove, add}; }

    bool operator==(const Move& o) const { return add == o.add && remove == o.remove; }
    bool operator!=(const Move& o) const { return !(*this == o); }
};

// Proposal generators.  Each draws one candidate move at random and returns
// nullopt when the candidate is invalid (degenerate fiber directions are
// expected; the chain treats nullopt as a held step).  All three distributions
// are symmetric: the probability of proposing m from g equals that of
// proposing m.reversed() from apply_move(g, m).

// Swap one present dyad for one absent dyad inside a uniformly chosen
// block-pair class (classes with no dyads are never chosen; the choice does
// not depend on g, which the symmetry argument requires).
std::optional<Move> propose_er(const Graph& g, const BlockAssignment& z, Rng& rng);

// Fair coin between a linear swap (as in propose_er) and an alternating
// 4-cycle on four i.i.d.-drawn nodes (any such cycle preserves all degrees,
// hence the per-block degree sums).
std::optional<Move> propose_add(const Graph& g, const BlockAssignment& z, Rng& rng);

// Fair coin between an alternating 4-cycle and an alternating closed 6-walk
// (distinct dyads; nodes may repeat), each additionally required to preserve
// the multiset of block-pair labels so that block edge counts survive along
// with the degrees.
std::optional<Move> propose_beta(const Graph& g, const BlockAssignment& z, Rng& rng);

// Returns the graph with the move applied; throws DataError when any
// add-dyad is already present or any remove-dyad absent.
Graph apply_move(const Graph& g, const Move& move);

// True iff the move is well formed, applicable to g, and preserves the
// model's sufficient statistic (recomputed before and after).
bool validate_move(const Move& move, const Graph& g, const BlockAssignment& z, Model model);

// JSON audit form {"add":[[u,v],...],"remove":[[u,v],...]} with 1-based nodes,
// matching the edge-list conventions.
std::string move_to_json(const Move& move);
Move move_from_json(const std::string& text);

}  // namespace sbmgof
