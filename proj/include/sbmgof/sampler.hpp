#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <sbmgof/graph.hpp>
#include <sbmgof/rng.hpp>
#include <sbmgof/stats.hpp>

namespace sbmgof {

// Settings for one fiber chain.  The walk is a Metropolis–Hastings random
// walk whose target is the uniform distribution on the fiber (conditioning an
// exponential family on its sufficient statistic leaves a uniform law over
// the 0/1 tables), so symmetric proposals are always accepted and failed
// proposals hold the current state (lazy chain, which keeps the kernel
// aperiodic).
struct ChainSettings {
    long burn_in = -1;     // negative: use 10 * C(n,2)
    long thin = -1;        // negative: use max(C(n,2), 1)
    long num_graphs = 1000;
    std::uint64_t seed = 1;          // consumed by callers that create the generator
    std::ostream* audit = nullptr;   // when set, one JSON line per applied move
};

struct FiberSample {
    std::vector<Graph> graphs;       // retained states (empty in value-stream mode)
    std::vector<double> gof_values;  // filled in value-stream mode
    long gof_infinite = 0;  // sampled states whose statistic had no finite value
    long steps = 0;         // proposals attempted, held steps included
    long accepted = 0;      // proposals applied
    double acceptance_rate() const {
        return steps > 0 ? static_cast<double>(accepted) / static_cast<double>(steps) : 0.0;
    }
};

using GofEvaluator = std::function<double(const Graph&)>;

// Runs burn_in steps, then emits the state every thin steps, num_graphs
// times, collecting the emitted graphs.  Every emitted graph has the same
// sufficient statistic as g_obs; the incrementally maintained statistic is
// recomputed from scratch every 10^4 steps and on exit, and any drift is a
// logic error.  A stuck chain (all proposals held) is reported through the
// acceptance rate, not as an error.
FiberSample walk(const Graph& g_obs, const BlockAssignment& z, Model model,
                 const ChainSettings& settings, Rng& rng);

// Same chain, but evaluates gof on each emitted state and keeps only the
// values.  A NumericalError from the evaluator (zero expected count with a
// positive observation on a fiber that moved mass into an empty class) is
// recorded as +infinity and counted in gof_infinite.
FiberSample walk_gof(const Graph& g_obs, const BlockAssignment& z, Model model,
                     const ChainSettings& settings, Rng& rng, const GofEvaluator& gof);

// Exhaustive fiber enumeration for small graphs (test oracle and CLI
// `fiber-enum`); requires C(n,2) <= 28.  Deterministic order (by dyad mask).
std::vector<Graph> enumerate_fiber(const Graph& g_obs, const BlockAssignment& z, Model model);

}  // namespace sbmgof
