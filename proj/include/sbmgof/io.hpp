#pragma once

#include <iosfwd>
#include <string>

#include "sbmgof/graph.hpp"

namespace sbmgof {

// Edge-list text format: one "u v" pair per line with 1-based node labels,
// '#' starts a comment, blank lines are skipped.  An optional "n=<int>" line
// pins the node count (required when trailing nodes are isolated); otherwise
// n is the largest label seen.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);

// Block file: either one 1-based block label per line (same comment rules),
// or a JSON array like [1,2,2,1].  k is the largest label unless `k` > 0.
BlockAssignment read_blocks(std::istream& in, int k = 0);
BlockAssignment read_blocks_file(const std::string& path, int k = 0);
void write_blocks(const BlockAssignment& z, std::ostream& out);

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);
std::string blocks_to_json(const BlockAssignment& z);

} // namespace sbmgof
