#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sbmgof/errors.hpp"

namespace sbmgof {

// Simple undirected graph on nodes 0..n-1, no loops, no multi-edges.
// Adjacency is a packed bitset over the C(n,2) dyads in row-major
// upper-triangular order: (0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1).
// Dyad flips and edge queries are O(1); a degree array is kept in sync so
// samplers can reject empty/saturated neighborhoods without scans.
//
// Node labels in text formats (edge lists, block files, JSON) are 1-based;
// the in-memory API is 0-based throughout.
class Graph {
  public:
    explicit Graph(int n);
    // edges are 0-based pairs; duplicates and loops are DataErrors.
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    long num_dyads() const { return static_cast<long>(n_) * (n_ - 1) / 2; }
    long num_edges() const { return edge_count_; }
    int degree(int v) const { return degree_[v]; }

    bool has_edge(int u, int v) const {
        check_pair(u, v);
        return test(dyad_index(n_, u, v));
    }
    void set_edge(int u, int v, bool present);
    void flip_edge(int u, int v) { set_edge(u, v, !has_edge(u, v)); }

    // Unchecked fast path for samplers that already hold a valid dyad index.
    bool dyad_value(long d) const { return test(d); }
    void set_dyad(long d, bool present);

    // Row-major upper-triangular dyad index of an unordered pair u != v.
    static long dyad_index(int n, int u, int v);
    // Inverse of dyad_index.
    static std::pair<int, int> dyad_nodes(int n, long d);

    std::vector<std::pair<int, int>> edges() const; // sorted, 0-based
    const std::vector<std::uint64_t>& words() const { return bits_; }

    // Rebuilds the bitset from a packed dyad mask (low bit = dyad 0).
    // Only valid when num_dyads() <= 64; used by the fiber enumerator.
    static Graph from_dyad_mask(int n, std::uint64_t mask);
    std::uint64_t dyad_mask() const;

    bool operator==(const Graph& o) const { return n_ == o.n_ && bits_ == o.bits_; }
    bool operator!=(const Graph& o) const { return !(*this == o); }

  private:
    bool test(long d) const { return (bits_[d >> 6] >> (d & 63)) & 1u; }
    void check_pair(int u, int v) const;

    int n_;
    long edge_count_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degree_;
};

// Partition of nodes 0..n-1 into k blocks labelled 0..k-1.  Empty blocks are
// allowed here (estimators can produce them) but model fits reject them.
class BlockAssignment {
  public:
    BlockAssignment(int k, std::vector<int> labels);

    int k() const { return k_; }
    int n() const { return static_cast<int>(z_.size()); }
    int block_of(int v) const { return z_[v]; }
    int size(int b) const { return static_cast<int>(members_[b].size()); }
    const std::vector<int>& members(int b) const { return members_[b]; }
    const std::vector<int>& labels() const { return z_; }

    bool has_empty_block() const;
    // Number of blocks of size one (these make block-diagonal estimates
    // undefined and block the ER-model MLE).
    int num_singleton_blocks() const;

    // Relabels blocks in order of first occurrence, so label permutations of
    // the same partition compare equal.  k is preserved; unused labels shift
    // to the tail.
    BlockAssignment canonical() const;

    bool operator==(const BlockAssignment& o) const { return k_ == o.k_ && z_ == o.z_; }
    bool operator!=(const BlockAssignment& o) const { return !(*this == o); }

  private:
    int k_;
    std::vector<int> z_;
    std::vector<std::vector<int>> members_;
};

// Number of unordered block pairs including diagonal: k(k+1)/2.
inline int num_block_pairs(int k) { return k * (k + 1) / 2; }

// Row-major upper-triangular-with-diagonal index of block pair (i <= j):
// (0,0),(0,1),...,(0,k-1),(1,1),...,(k-1,k-1).
long block_pair_index(int k, int i, int j);
std::pair<int, int> block_pair_of_index(int k, long idx);

} // namespace sbmgof
