#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "sbmgof/graph.hpp"
#include "sbmgof/io.hpp"
#include "sbmgof/stats.hpp"
#include "support/fixtures.hpp"

using namespace sbmgof;

TEST_SUITE_BEGIN("graph");

TEST_CASE("dyad indexing is a bijection on the upper triangle") {
    for (int n : {2, 3, 6, 17}) {
        long d = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v, ++d) {
                CHECK(Graph::dyad_index(n, u, v) == d);
                CHECK(Graph::dyad_index(n, v, u) == d); // order-insensitive
                CHECK(Graph::dyad_nodes(n, d) == std::pair<int, int>{u, v});
            }
        CHECK(d == static_cast<long>(n) * (n - 1) / 2);
    }
}

TEST_CASE("edge set/flip maintains degrees and edge count") {
    std::mt19937_64 rng(7);
    Graph g(9);
    std::set<std::pair<int, int>> ref;
    std::uniform_int_distribution<int> node(0, 8);
    for (int step = 0; step < 2000; ++step) {
        int u = node(rng), v = node(rng);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        bool present = ref.count({u, v}) > 0;
        g.set_edge(u, v, !present);
        if (present)
            ref.erase({u, v});
        else
            ref.insert({u, v});
    }
    CHECK(g.num_edges() == static_cast<long>(ref.size()));
    long degree_sum = 0;
    for (int v = 0; v < 9; ++v) degree_sum += g.degree(v);
    CHECK(degree_sum == 2 * g.num_edges()); // each edge counted twice
    for (auto [u, v] : ref) CHECK(g.has_edge(u, v));
}

TEST_CASE("self loops and duplicate edges are rejected") {
    Graph g(4);
    CHECK_THROWS_AS(g.set_edge(2, 2, true), DataError);
    CHECK_THROWS_AS(g.set_edge(0, 4, true), DataError);
    CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), DataError);
}

TEST_CASE("dyad mask round trip on small graphs") {
    Graph g = testfix::demo6_graph();
    Graph back = Graph::from_dyad_mask(6, g.dyad_mask());
    CHECK(back == g);
    CHECK(back.num_edges() == 7);
}

TEST_CASE("block assignment validates labels and exposes membership") {
    BlockAssignment z(3, {0, 0, 1, 1, 1, 2});
    CHECK(z.n() == 6);
    CHECK(z.size(0) == 2);
    CHECK(z.size(1) == 3);
    CHECK(z.size(2) == 1);
    CHECK(z.num_singleton_blocks() == 1);
    CHECK_FALSE(z.has_empty_block());
    CHECK(BlockAssignment(4, {0, 0, 3, 3}).has_empty_block());
    CHECK_THROWS_AS(BlockAssignment(2, {0, 2}), DataError);
    CHECK_THROWS_AS(BlockAssignment(0, {}), DataError);
}

TEST_CASE("canonical relabelling identifies label permutations") {
    BlockAssignment a(2, {0, 1, 1, 0});
    BlockAssignment b(2, {1, 0, 0, 1});
    CHECK(a != b);
    CHECK(a.canonical() == b.canonical());
    // first-occurrence order: node 0's block becomes 0
    CHECK(b.canonical().block_of(0) == 0);
    // unused labels shift to the tail but k is preserved
    BlockAssignment c(3, {2, 2, 0, 0});
    CHECK(c.canonical() == BlockAssignment(3, {0, 0, 1, 1}));
}

TEST_CASE("block pair indexing round trips") {
    for (int k : {1, 2, 3, 5}) {
        long idx = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j, ++idx) {
                CHECK(block_pair_index(k, i, j) == idx);
                CHECK(block_pair_index(k, j, i) == idx);
                CHECK(block_pair_of_index(k, idx) == std::pair<int, int>{i, j});
            }
        CHECK(idx == num_block_pairs(k));
    }
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("stats");

TEST_CASE("worked example: all three statistics match frozen values") {
    Graph g = testfix::demo6_graph();
    BlockAssignment z = testfix::demo6_blocks();

    CHECK(t_er(g, z).values == std::vector<long>{0, 4, 0, 1, 2, 0});
    CHECK(t_add(g, z).values == std::vector<long>{4, 8, 2});
    CHECK(t_beta(g, z).values == std::vector<long>{0, 4, 0, 1, 2, 0, 2, 2, 3, 2, 3, 2});
}

TEST_CASE("worked example: per-node block degree counts") {
    Graph g = testfix::demo6_graph();
    BlockAssignment z = testfix::demo6_blocks();
    auto m = degrees_into_blocks(g, z);
    CHECK(m[0] == std::vector<long>{0, 2, 0}); // node 1 touches blocks 2 twice
    CHECK(m[5] == std::vector<long>{0, 2, 0}); // node 6 touches only block 2
    for (int u = 0; u < 6; ++u) {
        long total = 0;
        for (long c : m[u]) total += c;
        CHECK(total == g.degree(u));
    }
}

TEST_CASE("complete graph statistics") {
    int n = 5;
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.set_edge(u, v, true);
    BlockAssignment z(2, {0, 0, 0, 1, 1});
    CHECK(t_er(g, z).values == std::vector<long>{3, 6, 1});
    CHECK(t_add(g, z).values == std::vector<long>{12, 8});
    auto m = degrees_into_blocks(g, z);
    for (int u = 0; u < n; ++u)
        CHECK(m[u][static_cast<std::size_t>(z.block_of(u))] ==
              z.size(z.block_of(u)) - 1);
}

TEST_CASE("empty graph statistics are all zero") {
    Graph g(4);
    BlockAssignment z(2, {0, 1, 0, 1});
    for (long v : t_beta(g, z).values) CHECK(v == 0);
}

TEST_CASE("additive statistic is a linear image of block-pair counts") {
    // x_i = 2*t_ii + sum_{j != i} t_ij holds for every graph
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 8;
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (coin(rng)) g.set_edge(u, v, true);
        BlockAssignment z(3, {0, 1, 2, 0, 1, 2, 0, 1});
        auto counts = block_pair_counts(g, z);
        auto x = t_add(g, z);
        for (int i = 0; i < 3; ++i) {
            long expect = 2 * counts[i][i];
            for (int j = 0; j < 3; ++j)
                if (j != i) expect += counts[i][j];
            CHECK(x.values[static_cast<std::size_t>(i)] == expect);
        }
        // beta statistic = ER statistic followed by the degree sequence
        auto tb = t_beta(g, z);
        auto te = t_er(g, z);
        CHECK(std::equal(te.values.begin(), te.values.end(), tb.values.begin()));
        for (int v = 0; v < n; ++v)
            CHECK(tb.values[te.values.size() + static_cast<std::size_t>(v)] == g.degree(v));
    }
}

TEST_CASE("statistics are invariant to relabelling within blocks") {
    Graph g = testfix::demo6_graph();
    BlockAssignment z = testfix::demo6_blocks();
    // swap nodes 3 and 5 (1-based 4 and 6? no: both inside block 2): relabel
    // nodes 2<->4 (0-based), both in block 1
    std::vector<int> perm{0, 1, 4, 3, 2, 5};
    Graph h(6);
    for (auto [u, v] : g.edges()) h.set_edge(perm[u], perm[v], true);
    CHECK(t_er(h, z).values == t_er(g, z).values);
    CHECK(t_add(h, z).values == t_add(g, z).values);
    // degree part of t_beta permutes with the nodes; block sums stay put
    CHECK(t_add(h, z).values == std::vector<long>{4, 8, 2});
}

TEST_CASE("dimension mismatches raise data errors") {
    Graph g(5);
    BlockAssignment z(2, {0, 1, 0, 1});
    CHECK_THROWS_AS(t_er(g, z), DataError);
    CHECK_THROWS_AS(degrees_into_blocks(g, z), DataError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("io");

TEST_CASE("edge list parsing: comments, n= header, 1-based labels") {
    std::istringstream in(
        "# demo file\n"
        "n=6\n"
        "\n"
        "1 4   # inline comment\n"
        "2 5\n"
        "5 6\n");
    Graph g = read_edge_list(in);
    CHECK(g.n() == 6);
    CHECK(g.num_edges() == 3);
    CHECK(g.has_edge(0, 3));
    CHECK(g.has_edge(4, 5));
}

TEST_CASE("edge list without header infers n from labels") {
    std::istringstream in("1 2\n2 7\n");
    Graph g = read_edge_list(in);
    CHECK(g.n() == 7);
}

TEST_CASE("edge list errors: bad tokens, 0-based labels, label > n") {
    std::istringstream bad1("1 2 3\n");
    CHECK_THROWS_AS(read_edge_list(bad1), DataError);
    std::istringstream bad2("0 1\n");
    CHECK_THROWS_AS(read_edge_list(bad2), DataError);
    std::istringstream bad3("n=3\n1 4\n");
    CHECK_THROWS_AS(read_edge_list(bad3), DataError);
    std::istringstream bad4("1 1\n");
    CHECK_THROWS_AS(read_edge_list(bad4), DataError);
}

TEST_CASE("edge list round trip preserves the graph") {
    Graph g = testfix::demo6_graph();
    std::ostringstream out;
    write_edge_list(g, out);
    std::istringstream in(out.str());
    CHECK(read_edge_list(in) == g);
}

TEST_CASE("block file: line format and JSON array format agree") {
    std::istringstream lines("1\n1\n2\n2\n2\n3\n");
    std::istringstream json("[1,1,2,2,2,3]");
    BlockAssignment a = read_blocks(lines);
    BlockAssignment b = read_blocks(json);
    CHECK(a == b);
    CHECK(a.k() == 3);
    CHECK(a == testfix::demo6_blocks());
}

TEST_CASE("block file: explicit k allows trailing empty blocks") {
    std::istringstream in("1\n1\n2\n");
    BlockAssignment z = read_blocks(in, 4);
    CHECK(z.k() == 4);
    CHECK(z.has_empty_block());
    std::istringstream bad("1\n5\n");
    CHECK_THROWS_AS(read_blocks(bad, 3), DataError);
}

TEST_CASE("graph JSON round trip") {
    Graph g = testfix::demo6_graph();
    CHECK(graph_from_json(graph_to_json(g)) == g);
    CHECK_THROWS_AS(graph_from_json("{\"edges\": []}"), DataError);
}

TEST_SUITE_END();
