#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbmgof/estimators.hpp"
#include "sbmgof/exact_test.hpp"
#include "sbmgof/graph.hpp"
#include "sbmgof/models.hpp"
#include "sbmgof/rng.hpp"

namespace sbmgof {

enum class Regime { Dense, Sparse };

const char* regime_name(Regime r);
Regime parse_regime(const std::string& name);

// Named two-block generation presets.  For the homogeneous and additive
// models the preset is a symmetric matrix of dyad probabilities; for the
// degree-corrected model it is a matrix of logit-scale block offsets, with
// the node effects drawn Unif(-n, n) afresh for every replicate.
Matrix preset_q(Model model, Regime regime);
Matrix preset_alpha(Regime regime);

struct SimulationConfig {
    Model model = Model::ErSbm;
    int n = 27;
    int k = 2;
    Regime regime = Regime::Dense;
    // Overrides for the named presets; q holds dyad probabilities (ErSbm /
    // AddSbm data), alpha holds logit block offsets (BetaSbm data).
    std::optional<Matrix> q;
    std::optional<Matrix> alpha;
    std::optional<std::pair<double, double>> beta_bounds; // default (-n, n)
    std::uint64_t seed = 1;
    int replicates = 50;

    void validate() const; // throws DataError
};

std::string config_to_json(const SimulationConfig& c);
SimulationConfig config_from_json(const std::string& text);

// Each node's label i.i.d. uniform on the k blocks.  When k > n some blocks
// are necessarily empty; *warning (if given) receives a note since most
// downstream fits reject empty blocks.
BlockAssignment simulate_assignment(int n, int k, Rng& rng,
                                    std::string* warning = nullptr);

// Each dyad independently present with probability edge_prob(params, z, u, v),
// visited in dyad-index order so a fixed rng state fixes the graph.
Graph simulate_graph(const BlockAssignment& z, const ModelParams& params, Rng& rng);

// One generated dataset.  params records what actually generated the graph
// (for BetaSbm data this includes the per-replicate node effects).
struct Replicate {
    BlockAssignment z;
    ModelParams params;
    Graph g;
};

// Deterministic replicate stream: replicate i draws everything from
// child_seed(c.seed, i), so replicates are reproducible individually and
// independent of execution order (parallel-safe fan-out).
Replicate simulate_replicate(const SimulationConfig& c, int replicate_index);

struct ReplicateOutcome {
    int index = 0;
    double p_value = 0.0;  // NaN when failed
    bool rejected = false;
    double density = 0.0;  // realized edge fraction of the generated graph
    bool failed = false;
    std::string error;     // diagnostic when failed
};

struct ExperimentSettings {
    Model null_model = Model::ErSbm;   // the model under test
    EstimatorKind estimator = EstimatorKind::Posterior;
    GibbsSettings gibbs;               // used when estimator == Posterior
    SpectralSettings spectral;         // used when estimator == Point
    TestSettings test;                 // .seed is ignored (derived per replicate)
    double level = 0.05;
};

struct ExperimentResult {
    SimulationConfig config;
    Model null_model = Model::ErSbm;
    double level = 0.05;
    std::vector<ReplicateOutcome> replicates;
    int failures = 0;
    double rejection_rate = 0.0; // rejected / completed; NaN if all failed
    double mean_density = 0.0;   // over all generated graphs
};

// For each replicate: simulate under c, estimate the block distribution at
// the generating k, and run the latent-assignment test against
// s.null_model.  Per-replicate errors are recorded and counted, never
// fatal.  Seed fan-out per replicate i: child(child(c.seed, i), 0) drives
// generation, (..., 1) the posterior sampler, (..., 2) the fiber chains.
// Replicates run sequentially; the per-replicate seeding keeps results
// identical if a parallel scheduler runs them out of order.
ExperimentResult run_experiment(const SimulationConfig& c, const ExperimentSettings& s);

std::string experiment_to_json(const ExperimentResult& r);
// Columns: replicate,p_value,rejected,density,failed
std::string experiment_to_csv(const ExperimentResult& r);

// 20-bin (by default) ASCII histogram of the finite values, one bin per
// line; returns a note instead when there is nothing to bin.
std::string ascii_histogram(const std::vector<double>& values, int bins = 20);

} // namespace sbmgof
