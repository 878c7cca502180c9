#include <sbmgof/gof.hpp>

#include <cmath>

#include <sbmgof/errors.hpp>
#include <sbmgof/stats.hpp>

namespace sbmgof {

std::string gof_name(GofStatistic s) {
    switch (s) {
        case GofStatistic::ChiSqBC: return "chi2-bc";
        case GofStatistic::ChiSqPearson: return "chi2-pearson";
    }
    throw Error("unknown goodness-of-fit statistic tag");
}

GofStatistic gof_from_name(const std::string& name) {
    if (name == "chi2-bc") return GofStatistic::ChiSqBC;
    if (name == "chi2-pearson") return GofStatistic::ChiSqPearson;
    throw DataError("unknown goodness-of-fit statistic '" + name +
                    "' (expected chi2-bc or chi2-pearson)");
}

namespace {

// Shared cell rule: expected 0 (or undefined, from a class with no dyads)
// with observed 0 contributes 0; expected 0 with observed > 0 has no finite
// value and is reported as a numerical error.
double cell_term(double observed, double expected, const char* what) {
    if (expected == 0.0 || std::isnan(expected)) {
        if (observed > 0.0) {
            throw NumericalError(std::string(what) +
                                 ": zero expected count with positive observed count");
        }
        return 0.0;
    }
    const double diff = observed - expected;
    return diff * diff / expected;
}

void check_probability(double p, bool allow_nan, const char* what) {
    if (std::isnan(p)) {
        if (allow_nan) return;
        throw DataError(std::string(what) + ": fitted probability is NaN");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError(std::string(what) + ": fitted probabilities must lie in [0,1]");
    }
}

}  // namespace

GofValue chi2_bc(const Graph& g, const BlockAssignment& z, const Matrix& qhat) {
    check_same_nodes(g, z);
    const int k = z.k();
    if (static_cast<int>(qhat.size()) != k) {
        throw DataError("chi2_bc: probability matrix must be k x k");
    }
    for (const auto& row : qhat) {
        if (static_cast<int>(row.size()) != k) {
            throw DataError("chi2_bc: probability matrix must be k x k");
        }
        for (double p : row) check_probability(p, true, "chi2_bc");
    }

    const auto m = degrees_into_blocks(g, z);
    double total = 0.0;
    for (int u = 0; u < g.n(); ++u) {
        const int zu = z.block_of(u);
        for (int i = 0; i < k; ++i) {
            const double expected = static_cast<double>(z.size(i)) * qhat[zu][i];
            total += cell_term(static_cast<double>(m[u][i]), expected, "chi2_bc");
        }
    }
    return {total, GofStatistic::ChiSqBC};
}

GofValue chi2_pearson(const Graph& g, const BlockAssignment& z,
                      const std::vector<double>& fitted) {
    check_same_nodes(g, z);
    if (static_cast<long>(fitted.size()) != g.num_dyads()) {
        throw DataError("chi2_pearson: need one fitted probability per dyad");
    }
    double total = 0.0;
    for (long d = 0; d < g.num_dyads(); ++d) {
        check_probability(fitted[d], false, "chi2_pearson");
        const double observed = g.dyad_value(d) ? 1.0 : 0.0;
        total += cell_term(observed, fitted[d], "chi2_pearson");
    }
    return {total, GofStatistic::ChiSqPearson};
}

}  // namespace sbmgof
