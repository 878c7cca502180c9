#include <sbmgof/sampler.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <sbmgof/errors.hpp>
#include <sbmgof/moves.hpp>

namespace sbmgof {

namespace {

constexpr long kRecheckInterval = 10000;

struct Resolved {
    long burn_in;
    long thin;
    long num_graphs;
};

Resolved resolve(const ChainSettings& s, long num_dyads) {
    Resolved r;
    r.burn_in = s.burn_in >= 0 ? s.burn_in : 10 * num_dyads;
    r.thin = s.thin >= 0 ? s.thin : std::max(num_dyads, 1L);
    r.num_graphs = s.num_graphs;
    if (r.num_graphs < 1) throw DataError("chain needs num_graphs >= 1");
    if (r.thin < 1) throw DataError("chain needs thin >= 1");
    return r;
}

std::optional<Move> propose(Model model, const Graph& g, const BlockAssignment& z, Rng& rng) {
    switch (model) {
        case Model::ErSbm: return propose_er(g, z, rng);
        case Model::AddSbm: return propose_add(g, z, rng);
        case Model::BetaSbm: return propose_beta(g, z, rng);
    }
    throw Error("unknown model");
}

// Incremental sufficient-statistic update for an applied move; layout matches
// the fixed coordinate orders documented with SufficientStatistics.
void update_statistic(std::vector<long>& t, Model model, const BlockAssignment& z,
                      const Move& move) {
    const int k = z.k();
    auto apply_side = [&](const std::vector<std::pair<int, int>>& side, long delta) {
        for (const auto& [u, v] : side) {
            const int a = std::min(z.block_of(u), z.block_of(v));
            const int b = std::max(z.block_of(u), z.block_of(v));
            switch (model) {
                case Model::ErSbm:
                    t[static_cast<std::size_t>(block_pair_index(k, a, b))] += delta;
                    break;
                case Model::AddSbm:
                    t[static_cast<std::size_t>(z.block_of(u))] += delta;
                    t[static_cast<std::size_t>(z.block_of(v))] += delta;
                    break;
                case Model::BetaSbm: {
                    const auto pairs = static_cast<std::size_t>(num_block_pairs(k));
                    t[static_cast<std::size_t>(block_pair_index(k, a, b))] += delta;
                    t[pairs + static_cast<std::size_t>(u)] += delta;
                    t[pairs + static_cast<std::size_t>(v)] += delta;
                    break;
                }
            }
        }
    };
    apply_side(move.remove, -1);
    apply_side(move.add, +1);
}

FiberSample run_chain(const Graph& g_obs, const BlockAssignment& z, Model model,
                      const ChainSettings& settings, Rng& rng, const GofEvaluator* gof) {
    check_same_nodes(g_obs, z);
    const Resolved r = resolve(settings, g_obs.num_dyads());

    Graph state = g_obs;
    SufficientStatistics t = sufficient_statistic(model, state, z);
    FiberSample sample;
    if (gof == nullptr) {
        sample.graphs.reserve(static_cast<std::size_t>(r.num_graphs));
    } else {
        sample.gof_values.reserve(static_cast<std::size_t>(r.num_graphs));
    }

    auto step = [&]() {
        ++sample.steps;
        auto m = propose(model, state, z, rng);
        if (m) {
            for (const auto& [u, v] : m->remove) state.set_edge(u, v, false);
            for (const auto& [u, v] : m->add) state.set_edge(u, v, true);
            update_statistic(t.values, model, z, *m);
            ++sample.accepted;
            if (settings.audit != nullptr) *settings.audit << move_to_json(*m) << '\n';
        }
        if (sample.steps % kRecheckInterval == 0 &&
            sufficient_statistic(model, state, z) != t) {
            throw std::logic_error("fiber chain drifted off its statistic");
        }
    };

    for (long i = 0; i < r.burn_in; ++i) step();
    for (long s = 0; s < r.num_graphs; ++s) {
        for (long j = 0; j < r.thin; ++j) step();
        if (gof == nullptr) {
            sample.graphs.push_back(state);
        } else {
            double value;
            try {
                value = (*gof)(state);
            } catch (const NumericalError&) {
                value = std::numeric_limits<double>::infinity();
                ++sample.gof_infinite;
            }
            sample.gof_values.push_back(value);
        }
    }
    if (sufficient_statistic(model, state, z) != t) {
        throw std::logic_error("fiber chain drifted off its statistic");
    }
    return sample;
}

}  // namespace

FiberSample walk(const Graph& g_obs, const BlockAssignment& z, Model model,
                 const ChainSettings& settings, Rng& rng) {
    return run_chain(g_obs, z, model, settings, rng, nullptr);
}

FiberSample walk_gof(const Graph& g_obs, const BlockAssignment& z, Model model,
                     const ChainSettings& settings, Rng& rng, const GofEvaluator& gof) {
    if (!gof) throw DataError("value-stream walk needs an evaluator");
    return run_chain(g_obs, z, model, settings, rng, &gof);
}

std::vector<Graph> enumerate_fiber(const Graph& g_obs, const BlockAssignment& z, Model model) {
    check_same_nodes(g_obs, z);
    if (g_obs.num_dyads() > 28) {
        throw DataError("fiber enumeration is limited to C(n,2) <= 28 dyads");
    }
    const auto target = sufficient_statistic(model, g_obs, z);
    std::vector<Graph> fiber;
    const std::uint64_t count = 1ULL << g_obs.num_dyads();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Graph h = Graph::from_dyad_mask(g_obs.n(), mask);
        if (sufficient_statistic(model, h, z) == target) fiber.push_back(h);
    }
    return fiber;
}

}  // namespace sbmgof
