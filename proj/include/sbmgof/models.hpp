#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sbmgof/graph.hpp"
#include "sbmgof/stats.hpp"

namespace sbmgof {

using Matrix = std::vector<std::vector<double>>;

// ER-style block model: p(u,v) = Q[z(u)][z(v)], Q symmetric with entries in
// [0,1].  When produced by mle_er on a graph with a size-one block, the
// corresponding diagonal entry is undefined (no within-block dyads exist);
// it is stored as NaN and prob() throws if that entry is requested.
struct ErParams {
    Matrix q;

    int k() const { return static_cast<int>(q.size()); }
    bool defined(int i, int j) const;
    double prob(int i, int j) const;
};

// Additive block model: logit p(u,v) = alpha[z(u)] + alpha[z(v)].
struct AddParams {
    std::vector<double> alpha;

    int k() const { return static_cast<int>(alpha.size()); }
    double prob(int i, int j) const;
};

// Node-heterogeneous block model: logit p(u,v) = alpha[z(u)][z(v)] + beta[u]
// + beta[v].  Fitted instances are gauge-fixed: beta has mean zero within
// every block (which implies the global sum-zero constraint), with the block
// means absorbed into alpha.  Block-pair classes that contain no dyads (a
// size-one block's diagonal) carry no information — the likelihood is flat in
// those alpha entries — so they are reported as 0.0.
struct BetaParams {
    Matrix alpha;           // symmetric k x k, logit scale
    std::vector<double> beta; // length n

    int k() const { return static_cast<int>(alpha.size()); }
    int n() const { return static_cast<int>(beta.size()); }
    double prob(int i, int j, int u, int v) const;
};

using ModelParams = std::variant<ErParams, AddParams, BetaParams>;

double edge_prob(const ModelParams& params, const BlockAssignment& z, int u, int v);

// Closed-form block-pair estimates: q_ij = m_ij/(n_i n_j) off the diagonal,
// q_ii = 2 m_ii / (n_i (n_i - 1)).  Size-one blocks leave q_ii undefined
// (NaN); empty blocks are data errors.
ErParams mle_er(const Graph& g, const BlockAssignment& z);

// The additive model's plug-in estimator: q_ij = m_ij / C(n,2) for every
// block pair, where m_ij counts edges between (or within, when i=j) the
// blocks.  This is the estimator the block-corrected chi-square statistic is
// defined with; it deliberately normalizes by the total dyad count, not the
// per-pair dyad count, and so is not the additive likelihood maximizer.
Matrix mle_add(const Graph& g, const BlockAssignment& z);

// Damped-Newton fit of the concave Bernoulli log-likelihood.  At convergence
// the fitted sufficient statistics reproduce the observed ones within tol
// (exponential-family moment matching).  Throws MleNonexistenceError when the
// gauge-fixed parameters diverge past |value| > 30 or the moment residual
// stalls: both signal a statistic on the model-polytope boundary.
BetaParams mle_beta(const Graph& g, const BlockAssignment& z, double tol = 1e-8,
                    int max_iter = 200);

// Bernoulli log-likelihood sum over dyads with the 0*log(0)=0 convention.
// A fitted probability of exactly 0 or 1 that conflicts with the observed
// dyad yields -infinity.
double loglik(const Graph& g, const BlockAssignment& z, const ModelParams& params);

// Fitted dyad probabilities flattened in dyad-index order; the form the
// Pearson statistic consumes.
std::vector<double> dyad_probs(const ModelParams& params, const BlockAssignment& z);

// Expected sufficient statistic (same coordinate order as the observed one)
// under fitted dyad probabilities; used for moment-residual reporting.
std::vector<double> expected_statistic(Model model, const std::vector<double>& probs,
                                       const BlockAssignment& z);

std::string params_to_json(const ModelParams& params);
ModelParams params_from_json(Model model, const std::string& text);

double logistic(double x);

} // namespace sbmgof
