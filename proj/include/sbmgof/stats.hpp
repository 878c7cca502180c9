#pragma once

#include <vector>

#include "sbmgof/graph.hpp"

namespace sbmgof {

enum class Model { ErSbm, AddSbm, BetaSbm };

const char* model_name(Model m);
Model model_from_name(const std::string& name); // "er" | "additive" | "beta"

// Sufficient statistic of a (graph, blocks) pair under one of the models.
// Coordinate orders are fixed so statistics compare with operator==:
//   ErSbm:   block-pair edge counts, upper-triangular row-major
//            (1,1),(1,2),...,(1,k),(2,2),...,(k,k)
//   AddSbm:  block degree sums x_1..x_k (x_i = sum of deg(v) over v in block i)
//   BetaSbm: ErSbm coordinates followed by the degree sequence d_1..d_n
struct SufficientStatistics {
    Model model;
    std::vector<long> values;

    bool operator==(const SufficientStatistics&) const = default;
};

SufficientStatistics t_er(const Graph& g, const BlockAssignment& z);
SufficientStatistics t_add(const Graph& g, const BlockAssignment& z);
SufficientStatistics t_beta(const Graph& g, const BlockAssignment& z);
SufficientStatistics sufficient_statistic(Model m, const Graph& g, const BlockAssignment& z);

// m[u][i] = number of neighbours of node u inside block i (n x k).
std::vector<std::vector<long>> degrees_into_blocks(const Graph& g, const BlockAssignment& z);

// Full k x k matrix of block-pair edge counts; entry (i,j), i != j, counts
// edges between blocks i and j, entry (i,i) counts edges within block i.
std::vector<std::vector<long>> block_pair_counts(const Graph& g, const BlockAssignment& z);

// Total number of dyads in block-pair class (i,j): n_i*n_j off-diagonal,
// C(n_i,2) on the diagonal.
long block_pair_dyads(const BlockAssignment& z, int i, int j);

void check_same_nodes(const Graph& g, const BlockAssignment& z);

} // namespace sbmgof
