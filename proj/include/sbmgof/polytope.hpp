#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sbmgof/graph.hpp"
#include "sbmgof/stats.hpp"

namespace sbmgof {

// Membership of a sufficient statistic in the model polytope (the convex hull
// of the statistics of all graphs on the given block sizes).  The MLE of the
// natural parameters exists, i.e. is finite, exactly when the observed
// statistic lies in the interior of this polytope, so "interior" is the
// existence certificate used to gate the exact tests.
//
// Both polytopes have exact halfspace descriptions with integer data, checked
// here in exact integer arithmetic:
//   ErSbm:  a box: 0 <= t_ij <= n_i*n_j (i < j)  and  0 <= t_ii <= C(n_i, 2).
//   AddSbm: for every ordered pair (T, S) of disjoint block sets with
//           T union S nonempty,
//             sum_{i in T} x_i - sum_{i in S} x_i
//               <= 2*C(sum_{i in T} n_i, 2) + (sum_{i in T} n_i) * n_rest
//           where n_rest counts nodes in blocks outside T and S.  Taking
//           T = {} recovers the lower bounds -x_i <= 0.
// The degree-parameter model's polytope has no such closed form here; its MLE
// existence is detected behaviorally by mle_beta diverging.

enum class Verdict { Interior, Boundary, Outside };

const char* verdict_name(Verdict v);

// One halfspace of the polytope description, evaluated at the queried point.
// Box constraints (ErSbm) set block_i/block_j (0-based, i <= j) and leave
// T/S empty; block-sum constraints (AddSbm) use T/S (0-based block indices)
// and are always upper bounds.  `violated` distinguishes a constraint the
// point breaks from one it merely touches.
struct ActiveConstraint {
    std::vector<int> T;
    std::vector<int> S;
    int block_i = -1;
    int block_j = -1;
    bool upper = true;
    long lhs = 0;
    long rhs = 0;
    bool violated = false;
};

struct MembershipVerdict {
    Verdict verdict = Verdict::Interior;
    std::vector<ActiveConstraint> constraints; // tight or violated halfspaces
    // AddSbm only: block degree sums of a graph always have an even total, so
    // an odd-sum point cannot be a realizable statistic even when it sits
    // inside the polytope.  Reported as a flag, separate from the verdict.
    bool lattice_parity_ok = true;
};

// JSON object with fields "verdict", "lattice_parity_ok" and "constraints"
// (block indices 1-based, matching the file formats).
std::string verdict_to_json(const MembershipVerdict& v);

// t.model must match; block_sizes must be nonnegative with as many entries as
// the statistic expects.  AddSbm enumerates 3^k - 1 halfspaces and rejects
// k > 12.
MembershipVerdict er_membership(const SufficientStatistics& t,
                                const std::vector<int>& block_sizes);
MembershipVerdict add_membership(const SufficientStatistics& t,
                                 const std::vector<int>& block_sizes);

// Convenience wrapper: computes the statistic of (g, z) and classifies it.
// Only ErSbm and AddSbm have polytope checks; BetaSbm raises DataError.
std::pair<bool, MembershipVerdict> mle_exists(Model m, const Graph& g,
                                              const BlockAssignment& z);

} // namespace sbmgof
