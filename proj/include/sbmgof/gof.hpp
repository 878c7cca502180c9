#pragma once

#include <string>
#include <vector>

#include <sbmgof/graph.hpp>
#include <sbmgof/models.hpp>

namespace sbmgof {

enum class GofStatistic { ChiSqBC, ChiSqPearson };

std::string gof_name(GofStatistic s);
GofStatistic gof_from_name(const std::string& name);

struct GofValue {
    double value = 0.0;
    GofStatistic tag = GofStatistic::ChiSqBC;
};

// Block-corrected chi-square: sum over nodes u and blocks i of
// (m_ui - n_i * qhat[z(u)][i])^2 / (n_i * qhat[z(u)][i]), where m_ui is the
// number of neighbors of u in block i.  The own-block expected count uses the
// full block size n_i (a known small-block bias accepted by design).
// Cells with expected count 0 and observed count 0 contribute 0; expected 0
// with a positive observed count throws NumericalError (cannot happen when
// qhat is the MLE fitted to a graph on the same fiber).  NaN entries in qhat
// mark block pairs without dyads (size-one-block diagonals) and follow the
// expected-0 convention; other entries must lie in [0,1].
GofValue chi2_bc(const Graph& g, const BlockAssignment& z, const Matrix& qhat);

// Pearson chi-square over dyads: sum over u<v of (p_uv - g_uv)^2 / p_uv with
// p_uv the fitted edge probability (flat upper-triangular order, as produced
// by dyad_probs).  Zero fitted probability is handled as in chi2_bc; NaN is
// rejected here because every entry corresponds to an actual dyad.
GofValue chi2_pearson(const Graph& g, const BlockAssignment& z,
                      const std::vector<double>& fitted);

}  // namespace sbmgof
