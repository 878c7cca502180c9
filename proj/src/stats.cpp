#include "sbmgof/stats.hpp"

#include <string>

namespace sbmgof {

const char* model_name(Model m) {
    switch (m) {
        case Model::ErSbm: return "er";
        case Model::AddSbm: return "additive";
        case Model::BetaSbm: return "beta";
    }
    return "?";
}

Model model_from_name(const std::string& name) {
    if (name == "er") return Model::ErSbm;
    if (name == "additive" || name == "add") return Model::AddSbm;
    if (name == "beta") return Model::BetaSbm;
    throw DataError("unknown model '" + name + "' (expected er|additive|beta)");
}

void check_same_nodes(const Graph& g, const BlockAssignment& z) {
    if (g.n() != z.n())
        throw DataError("graph has " + std::to_string(g.n()) + " nodes but block assignment has " +
                        std::to_string(z.n()));
}

std::vector<std::vector<long>> block_pair_counts(const Graph& g, const BlockAssignment& z) {
    check_same_nodes(g, z);
    std::vector<std::vector<long>> t(static_cast<std::size_t>(z.k()),
                                     std::vector<long>(static_cast<std::size_t>(z.k()), 0));
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (g.has_edge(u, v)) {
                int i = z.block_of(u), j = z.block_of(v);
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += 1;
                if (i != j) t[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] += 1;
            }
    return t;
}

long block_pair_dyads(const BlockAssignment& z, int i, int j) {
    if (i == j) return static_cast<long>(z.size(i)) * (z.size(i) - 1) / 2;
    return static_cast<long>(z.size(i)) * z.size(j);
}

SufficientStatistics t_er(const Graph& g, const BlockAssignment& z) {
    auto counts = block_pair_counts(g, z);
    SufficientStatistics t{Model::ErSbm, {}};
    t.values.reserve(static_cast<std::size_t>(num_block_pairs(z.k())));
    for (int i = 0; i < z.k(); ++i)
        for (int j = i; j < z.k(); ++j)
            t.values.push_back(counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return t;
}

SufficientStatistics t_add(const Graph& g, const BlockAssignment& z) {
    check_same_nodes(g, z);
    SufficientStatistics t{Model::AddSbm,
                           std::vector<long>(static_cast<std::size_t>(z.k()), 0)};
    for (int v = 0; v < g.n(); ++v)
        t.values[static_cast<std::size_t>(z.block_of(v))] += g.degree(v);
    return t;
}

SufficientStatistics t_beta(const Graph& g, const BlockAssignment& z) {
    SufficientStatistics t = t_er(g, z);
    t.model = Model::BetaSbm;
    t.values.reserve(t.values.size() + static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) t.values.push_back(g.degree(v));
    return t;
}

SufficientStatistics sufficient_statistic(Model m, const Graph& g, const BlockAssignment& z) {
    switch (m) {
        case Model::ErSbm: return t_er(g, z);
        case Model::AddSbm: return t_add(g, z);
        case Model::BetaSbm: return t_beta(g, z);
    }
    throw DataError("unknown model tag");
}

std::vector<std::vector<long>> degrees_into_blocks(const Graph& g, const BlockAssignment& z) {
    check_same_nodes(g, z);
    std::vector<std::vector<long>> m(static_cast<std::size_t>(g.n()),
                                     std::vector<long>(static_cast<std::size_t>(z.k()), 0));
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (g.has_edge(u, v)) {
                m[static_cast<std::size_t>(u)][static_cast<std::size_t>(z.block_of(v))] += 1;
                m[static_cast<std::size_t>(v)][static_cast<std::size_t>(z.block_of(u))] += 1;
            }
    return m;
}

} // namespace sbmgof
