#include "sbmgof/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sbmgof/errors.hpp"

namespace sbmgof {

void AssignmentDistribution::validate() const {
    if (assignments.empty()) throw DataError("assignment distribution is empty");
    if (assignments.size() != weights.size())
        throw DataError("assignment/weight count mismatch");
    double total = 0;
    for (double w : weights) {
        if (!(w > 0)) throw DataError("assignment weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw DataError("assignment weights sum to " + std::to_string(total));
}

std::string distribution_to_json(const AssignmentDistribution& d) {
    d.validate();
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < d.assignments.size(); ++i) {
        nlohmann::json e;
        std::vector<int> z1;
        z1.reserve(d.assignments[i].n());
        for (int lab : d.assignments[i].labels()) z1.push_back(lab + 1);
        e["z"] = z1;
        e["weight"] = d.weights[i];
        out.push_back(std::move(e));
    }
    return out.dump();
}

namespace {

// Plain Lloyd iterations from random starts; returns labels of the restart
// with the lowest within-cluster squared distance.
std::vector<int> kmeans(const Eigen::MatrixXd& X, int k, int restarts, Rng& rng) {
    const int n = static_cast<int>(X.rows());
    std::vector<int> best_labels(n, 0);
    double best_cost = std::numeric_limits<double>::infinity();

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (int r = 0; r < restarts; ++r) {
        std::shuffle(order.begin(), order.end(), rng);
        Eigen::MatrixXd centers(k, X.cols());
        for (int c = 0; c < k; ++c) centers.row(c) = X.row(order[c]);

        std::vector<int> labels(n, -1);
        for (int iter = 0; iter < 100; ++iter) {
            bool changed = false;
            for (int u = 0; u < n; ++u) {
                int arg = 0;
                double dist = (X.row(u) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    double d = (X.row(u) - centers.row(c)).squaredNorm();
                    if (d < dist) {
                        dist = d;
                        arg = c;
                    }
                }
                if (labels[u] != arg) {
                    labels[u] = arg;
                    changed = true;
                }
            }
            if (!changed) break;
            for (int c = 0; c < k; ++c) {
                Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(X.cols());
                int count = 0;
                for (int u = 0; u < n; ++u)
                    if (labels[u] == c) {
                        mean += X.row(u);
                        ++count;
                    }
                if (count > 0)
                    centers.row(c) = mean / count;
                else // re-seed an emptied cluster on a random point
                    centers.row(c) = X.row(std::uniform_int_distribution<int>(0, n - 1)(rng));
            }
        }

        double cost = 0;
        for (int u = 0; u < n; ++u) cost += (X.row(u) - centers.row(labels[u])).squaredNorm();
        if (cost < best_cost) {
            best_cost = cost;
            best_labels = labels;
        }
    }
    return best_labels;
}

AssignmentDistribution single_atom(BlockAssignment z, EstimatorKind kind) {
    AssignmentDistribution d;
    d.assignments.push_back(z.canonical());
    d.weights.push_back(1.0);
    d.provenance = kind;
    d.validate();
    return d;
}

} // namespace

AssignmentDistribution spectral_estimate(const Graph& g, int k, const SpectralSettings& s) {
    const int n = g.n();
    if (k < 1) throw DataError("k must be at least 1");
    if (k > n) throw DataError("k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    if (!(s.tau >= 0)) throw DataError("regularizer must be nonnegative");
    if (s.restarts < 1) throw DataError("need at least one k-means restart");
    if (k == 1) return single_atom(BlockAssignment(1, std::vector<int>(n, 0)), EstimatorKind::Point);
    if (g.num_edges() == 0)
        throw DataError("edgeless graph carries no block signal for k > 1");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.edges()) A(u, v) = A(v, u) = 1.0;
    const double dbar = 2.0 * g.num_edges() / n;
    A.array() += s.tau * dbar / n;

    Eigen::VectorXd d = A.rowwise().sum();
    Eigen::VectorXd dinv = d.array().rsqrt();
    Eigen::MatrixXd L = dinv.asDiagonal() * A * dinv.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
    if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    // eigenvalues ascend: the top-k eigenvectors are the last k columns
    Eigen::MatrixXd X = eig.eigenvectors().rightCols(k);
    for (int u = 0; u < n; ++u) {
        double norm = X.row(u).norm();
        if (norm > 0) X.row(u) /= norm;
    }

    Rng rng = make_rng(s.seed);
    return single_atom(BlockAssignment(k, kmeans(X, k, s.restarts, rng)), EstimatorKind::Point);
}

namespace {

// Collapsed per-site conditional: with node u held out, the posterior odds of
// placing it in block c multiply the Dirichlet term (n_c + 1) by, for every
// block b, the change in the integrated Beta marginal of class (c,b) when the
// class gains delta_b dyads of which e_b = edges(u, block b) are present:
//   beta(m + e + 1, M - m + delta - e + 1) / beta(m + 1, M - m + 1)
double log_block_weight(int c, int k, const std::vector<long>& sizes,
                        const std::vector<std::vector<long>>& m,
                        const std::vector<long>& e_into) {
    double lw = std::log(static_cast<double>(sizes[c] + 1));
    for (int b = 0; b < k; ++b) {
        const long m0 = m[c][b];
        const long M0 = b == c ? sizes[c] * (sizes[c] - 1) / 2 : sizes[c] * sizes[b];
        const long delta = sizes[b]; // new dyads in class (c,b) once u joins c
        const long e = e_into[b];
        lw += std::lgamma(double(m0 + e + 1)) - std::lgamma(double(m0 + 1));
        lw += std::lgamma(double(M0 - m0 + delta - e + 1)) - std::lgamma(double(M0 - m0 + 1));
        lw -= std::lgamma(double(M0 + delta + 2)) - std::lgamma(double(M0 + 2));
    }
    return lw;
}

} // namespace

AssignmentDistribution gibbs_posterior(const Graph& g, int k, const GibbsSettings& s, Rng& rng) {
    const int n = g.n();
    if (k < 1) throw DataError("k must be at least 1");
    if (s.draws < 1) throw DataError("need at least one draw");
    if (s.burn_in < 0) throw DataError("burn-in must be nonnegative");

    std::vector<int> z(n);
    std::uniform_int_distribution<int> unif_block(0, k - 1);
    for (int u = 0; u < n; ++u) z[u] = unif_block(rng);

    std::vector<long> sizes(k, 0);
    std::vector<std::vector<long>> m(k, std::vector<long>(k, 0)); // symmetric edge counts
    for (int u = 0; u < n; ++u) ++sizes[z[u]];
    for (const auto& [u, v] : g.edges()) {
        ++m[z[u]][z[v]];
        if (z[u] != z[v]) ++m[z[v]][z[u]];
    }

    std::vector<double> logw(k);
    std::vector<long> e_into(k);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::map<std::vector<int>, long> counts;

    for (long sweep = 0; sweep < s.burn_in + s.draws; ++sweep) {
        for (int u = 0; u < n; ++u) {
            std::fill(e_into.begin(), e_into.end(), 0L);
            for (int v = 0; v < n; ++v)
                if (v != u && g.has_edge(u, v)) ++e_into[z[v]];

            // detach u from its current block
            const int old = z[u];
            --sizes[old];
            for (int b = 0; b < k; ++b) {
                m[old][b] -= e_into[b];
                if (b != old) m[b][old] -= e_into[b];
            }

            double top = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                logw[c] = log_block_weight(c, k, sizes, m, e_into);
                top = std::max(top, logw[c]);
            }
            double total = 0;
            for (int c = 0; c < k; ++c) {
                logw[c] = std::exp(logw[c] - top);
                total += logw[c];
            }
            double r = unit(rng) * total;
            int pick = k - 1;
            for (int c = 0; c < k; ++c) {
                r -= logw[c];
                if (r <= 0) {
                    pick = c;
                    break;
                }
            }

            z[u] = pick;
            ++sizes[pick];
            for (int b = 0; b < k; ++b) {
                m[pick][b] += e_into[b];
                if (b != pick) m[b][pick] += e_into[b];
            }
        }
        if (sweep >= s.burn_in) ++counts[BlockAssignment(k, z).canonical().labels()];
    }

    const double threshold = s.truncate < 0 ? 1.0 / s.draws : s.truncate;
    std::vector<std::pair<std::vector<int>, long>> kept;
    for (const auto& [labels, c] : counts)
        if (static_cast<double>(c) / s.draws > threshold) kept.push_back({labels, c});
    if (kept.empty()) { // everything truncated: fall back to the modal draw
        auto modal = std::max_element(counts.begin(), counts.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
        kept.push_back(*modal);
    }

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    long total = 0;
    for (const auto& [labels, c] : kept) total += c;

    AssignmentDistribution out;
    out.provenance = EstimatorKind::Posterior;
    for (const auto& [labels, c] : kept) {
        out.assignments.push_back(BlockAssignment(k, labels));
        out.weights.push_back(static_cast<double>(c) / total);
    }
    out.validate();
    return out;
}

} // namespace sbmgof
