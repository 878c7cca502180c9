#include "sbmgof/graph.hpp"

#include <algorithm>
#include <string>

namespace sbmgof {

Graph::Graph(int n) : n_(n) {
    if (n < 0) throw DataError("graph size must be non-negative");
    bits_.assign(static_cast<std::size_t>((num_dyads() + 63) / 64), 0);
    degree_.assign(static_cast<std::size_t>(n), 0);
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
        if (g.has_edge(u, v))
            throw DataError("duplicate edge " + std::to_string(u + 1) + " " +
                            std::to_string(v + 1));
        g.set_edge(u, v, true);
    }
    return g;
}

void Graph::check_pair(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw DataError("node index out of range: " + std::to_string(u + 1) + " " +
                        std::to_string(v + 1) + " (n=" + std::to_string(n_) + ")");
    if (u == v) throw DataError("self-loop at node " + std::to_string(u + 1));
}

long Graph::dyad_index(int n, int u, int v) {
    if (u > v) std::swap(u, v);
    // offset of row u = u*n - u(u+3)/2 - ... derived from summing row lengths
    return static_cast<long>(u) * (2 * n - u - 1) / 2 + (v - u - 1);
}

std::pair<int, int> Graph::dyad_nodes(int n, long d) {
    int u = 0;
    long row = n - 1; // dyads in row u
    while (d >= row) {
        d -= row;
        --row;
        ++u;
    }
    return {u, u + 1 + static_cast<int>(d)};
}

void Graph::set_edge(int u, int v, bool present) {
    check_pair(u, v);
    long d = dyad_index(n_, u, v);
    bool cur = test(d);
    if (cur == present) return;
    bits_[d >> 6] ^= (1ULL << (d & 63));
    int delta = present ? 1 : -1;
    degree_[u] += delta;
    degree_[v] += delta;
    edge_count_ += delta;
}

void Graph::set_dyad(long d, bool present) {
    auto [u, v] = dyad_nodes(n_, d);
    set_edge(u, v, present);
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
}

Graph Graph::from_dyad_mask(int n, std::uint64_t mask) {
    Graph g(n);
    if (g.num_dyads() > 64) throw DataError("dyad mask only supported for C(n,2) <= 64");
    for (long d = 0; d < g.num_dyads(); ++d)
        if ((mask >> d) & 1u) g.set_dyad(d, true);
    return g;
}

std::uint64_t Graph::dyad_mask() const {
    if (num_dyads() > 64) throw DataError("dyad mask only supported for C(n,2) <= 64");
    return bits_.empty() ? 0 : bits_[0];
}

BlockAssignment::BlockAssignment(int k, std::vector<int> labels) : k_(k), z_(std::move(labels)) {
    if (k <= 0) throw DataError("number of blocks must be positive");
    members_.assign(static_cast<std::size_t>(k), {});
    for (int v = 0; v < n(); ++v) {
        int b = z_[static_cast<std::size_t>(v)];
        if (b < 0 || b >= k)
            throw DataError("block label " + std::to_string(b + 1) + " of node " +
                            std::to_string(v + 1) + " outside 1.." + std::to_string(k));
        members_[static_cast<std::size_t>(b)].push_back(v);
    }
}

bool BlockAssignment::has_empty_block() const {
    for (const auto& m : members_)
        if (m.empty()) return true;
    return false;
}

int BlockAssignment::num_singleton_blocks() const {
    int c = 0;
    for (const auto& m : members_)
        if (m.size() == 1) ++c;
    return c;
}

BlockAssignment BlockAssignment::canonical() const {
    std::vector<int> remap(static_cast<std::size_t>(k_), -1);
    std::vector<int> out(z_.size());
    int next = 0;
    for (std::size_t v = 0; v < z_.size(); ++v) {
        int b = z_[v];
        if (remap[static_cast<std::size_t>(b)] < 0) remap[static_cast<std::size_t>(b)] = next++;
        out[v] = remap[static_cast<std::size_t>(b)];
    }
    return BlockAssignment(k_, std::move(out));
}

long block_pair_index(int k, int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<long>(i) * (2 * k - i + 1) / 2 + (j - i);
}

std::pair<int, int> block_pair_of_index(int k, long idx) {
    int i = 0;
    long row = k; // pairs in row i, diagonal included
    while (idx >= row) {
        idx -= row;
        --row;
        ++i;
    }
    return {i, i + static_cast<int>(idx)};
}

} // namespace sbmgof
