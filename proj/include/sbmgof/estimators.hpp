#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbmgof/graph.hpp"
#include "sbmgof/rng.hpp"

namespace sbmgof {

enum class EstimatorKind { Point, Posterior };

// Distribution over block assignments feeding the latent-block test: either a
// single point estimate (weight 1) or empirical posterior frequencies.
// Assignments are stored canonically (labels renumbered by first occurrence),
// so label permutations of the same partition merge into one atom.  Entries
// are ordered by descending weight, ties broken by label vector, which makes
// downstream processing order deterministic.
struct AssignmentDistribution {
    std::vector<BlockAssignment> assignments;
    std::vector<double> weights; // positive, sum to 1 within 1e-12
    EstimatorKind provenance = EstimatorKind::Point;

    void validate() const;
};

// JSON array [{"z": [1-based labels...], "weight": w}, ...].
std::string distribution_to_json(const AssignmentDistribution& d);

struct SpectralSettings {
    double tau = 0.25; // strength of the average-degree ridge on the adjacency
    int restarts = 20; // k-means restarts, best within-cluster cost wins
    // The estimator is a deterministic function of the graph: k-means draws
    // its starts from this fixed internal seed, not from a caller RNG.
    std::uint64_t seed = 0x5eed5eedULL;
};

// Point estimate via regularized spectral clustering: add tau*dbar/n to every
// adjacency entry, take the degree-normalized matrix D^{-1/2} A D^{-1/2}, the
// top-k eigenvectors, unit-normalize the rows and cluster them with k-means.
// Errors: k < 1 or k > n; an edgeless graph with k > 1 carries no signal.
AssignmentDistribution spectral_estimate(const Graph& g, int k,
                                         const SpectralSettings& s = {});

struct GibbsSettings {
    long draws = 2000;   // post burn-in sweeps collected
    long burn_in = 500;  // discarded initial sweeps
    // Atoms with weight <= truncate are discarded and the rest renormalized;
    // negative means the default 1/draws (drops single-occurrence draws).  If
    // everything would be discarded the modal atom is kept.  0 keeps all.
    double truncate = -1.0;
};

// Posterior over assignments under the one-probability-per-block-pair model
// with uniform priors: edge probabilities are integrated out against
// Beta(1,1) and block proportions against symmetric Dirichlet(1), leaving a
// collapsed single-site Gibbs chain over z alone.  One draw per sweep.
AssignmentDistribution gibbs_posterior(const Graph& g, int k,
                                       const GibbsSettings& s, Rng& rng);

} // namespace sbmgof
