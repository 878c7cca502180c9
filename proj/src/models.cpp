#include "sbmgof/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <json.hpp>

namespace sbmgof {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

void check_symmetric_01(const Matrix& q, bool allow_nan_diagonal) {
    int k = static_cast<int>(q.size());
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(q[i].size()) != k) throw DataError("parameter matrix is not square");
        for (int j = 0; j < k; ++j) {
            double v = q[i][j];
            if (std::isnan(v) && allow_nan_diagonal && i == j) continue;
            if (std::isnan(v) || v < 0.0 || v > 1.0)
                throw DataError("probability entry outside [0,1]");
            if (std::abs(q[i][j] - q[j][i]) > 1e-12)
                throw DataError("parameter matrix is not symmetric");
        }
    }
}

} // namespace

bool ErParams::defined(int i, int j) const { return !std::isnan(q[i][j]); }

double ErParams::prob(int i, int j) const {
    double v = q[i][j];
    if (std::isnan(v))
        throw MleNonexistenceError("block probability (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) +
                                   ") is undefined (size-one block has no within-block dyads)");
    return v;
}

double AddParams::prob(int i, int j) const { return logistic(alpha[i] + alpha[j]); }

double BetaParams::prob(int i, int j, int u, int v) const {
    return logistic(alpha[i][j] + beta[u] + beta[v]);
}

double edge_prob(const ModelParams& params, const BlockAssignment& z, int u, int v) {
    if (u == v) throw DataError("edge probability of a self-pair is undefined");
    if (u < 0 || v < 0 || u >= z.n() || v >= z.n()) throw DataError("node index out of range");
    int i = z.block_of(u), j = z.block_of(v);
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ErParams>)
                return p.prob(i, j);
            else if constexpr (std::is_same_v<T, AddParams>)
                return p.prob(i, j);
            else
                return p.prob(i, j, u, v);
        },
        params);
}

ErParams mle_er(const Graph& g, const BlockAssignment& z) {
    check_same_nodes(g, z);
    for (int b = 0; b < z.k(); ++b)
        if (z.size(b) == 0)
            throw DataError("block " + std::to_string(b + 1) + " is empty");
    auto counts = block_pair_counts(g, z);
    Matrix q(static_cast<std::size_t>(z.k()),
             std::vector<double>(static_cast<std::size_t>(z.k()), 0.0));
    for (int i = 0; i < z.k(); ++i)
        for (int j = i; j < z.k(); ++j) {
            long dyads = block_pair_dyads(z, i, j);
            double v = dyads == 0 ? std::numeric_limits<double>::quiet_NaN()
                                  : static_cast<double>(counts[i][j]) / static_cast<double>(dyads);
            q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    return ErParams{std::move(q)};
}

Matrix mle_add(const Graph& g, const BlockAssignment& z) {
    check_same_nodes(g, z);
    if (g.n() < 2) throw DataError("additive estimator needs at least two nodes");
    auto counts = block_pair_counts(g, z);
    double total_dyads = static_cast<double>(g.num_dyads());
    Matrix q(static_cast<std::size_t>(z.k()),
             std::vector<double>(static_cast<std::size_t>(z.k()), 0.0));
    for (int i = 0; i < z.k(); ++i)
        for (int j = 0; j < z.k(); ++j)
            q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<double>(counts[i][j]) / total_dyads;
    return q;
}

namespace {

// Subtracts per-block beta means and absorbs them into alpha, leaving every
// dyad log-odds unchanged.  Returns the largest |parameter| over coordinates
// that actually carry data (classes with at least one dyad, all betas).
double regauge(BetaParams& p, const BlockAssignment& z) {
    int k = p.k();
    std::vector<double> mean(static_cast<std::size_t>(k), 0.0);
    for (int b = 0; b < k; ++b) {
        if (z.size(b) == 0) continue;
        double s = 0.0;
        for (int u : z.members(b)) s += p.beta[static_cast<std::size_t>(u)];
        mean[static_cast<std::size_t>(b)] = s / z.size(b);
    }
    for (int u = 0; u < p.n(); ++u)
        p.beta[static_cast<std::size_t>(u)] -= mean[static_cast<std::size_t>(z.block_of(u))];
    double largest = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            if (block_pair_dyads(z, i, j) == 0) continue; // dataless class stays at 0
            double v = p.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                       mean[static_cast<std::size_t>(i)] + mean[static_cast<std::size_t>(j)];
            p.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            p.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
            largest = std::max(largest, std::abs(v));
        }
    for (double b : p.beta) largest = std::max(largest, std::abs(b));
    return largest;
}

} // namespace

BetaParams mle_beta(const Graph& g, const BlockAssignment& z, double tol, int max_iter) {
    check_same_nodes(g, z);
    for (int b = 0; b < z.k(); ++b)
        if (z.size(b) == 0)
            throw DataError("block " + std::to_string(b + 1) + " is empty");
    const int n = g.n();
    const int k = z.k();
    const int nc = num_block_pairs(k);
    const int dim = nc + n;
    if (n < 2)
        throw MleNonexistenceError("no dyads to fit");

    // observed sufficient statistic: class edge counts then degrees
    auto t_obs = t_beta(g, z).values;

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    auto class_of = [&](int u, int v) {
        return static_cast<int>(block_pair_index(k, z.block_of(u), z.block_of(v)));
    };
    auto eta = [&](int u, int v) {
        return theta[class_of(u, v)] + theta[nc + u] + theta[nc + v];
    };
    auto loglik_at = [&]() {
        double ll = 0.0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                double e = eta(u, v);
                // log(1+exp(e)) computed stably
                double soft = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
                ll += (g.has_edge(u, v) ? e : 0.0) - soft;
            }
        return ll;
    };

    Eigen::VectorXd grad(dim);
    Eigen::MatrixXd hess(dim, dim);
    // gradient = observed - expected statistic; its max-norm is exactly the
    // moment residual, so convergence and moment matching are one check
    auto fill_grad_hess = [&](bool with_hessian) {
        if (with_hessian) hess.setZero();
        for (int i = 0; i < dim; ++i)
            grad[i] = static_cast<double>(t_obs[static_cast<std::size_t>(i)]);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                int c = class_of(u, v);
                double p = logistic(eta(u, v));
                grad[c] -= p;
                grad[nc + u] -= p;
                grad[nc + v] -= p;
                if (with_hessian) {
                    double w = p * (1.0 - p);
                    int idx[3] = {c, nc + u, nc + v};
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) hess(idx[a], idx[b]) += w;
                }
            }
        return grad.lpNorm<Eigen::Infinity>();
    };

    double ll = loglik_at();
    double residual = std::numeric_limits<double>::infinity();

    // The internal convergence target sits near machine precision regardless
    // of the caller's tol.  Boundary statistics make the residual decay like
    // num_dyads * exp(-|alpha|), which crosses a loose tol while the
    // parameters are still finite-looking; only a near-roundoff target lets
    // the divergence cap / stall detection fire first.  Interior fits reach
    // it easily (Newton is quadratic and the gradient sums carry only
    // ~num_dyads * 1e-16 of float noise).
    const double num_dyads = static_cast<double>(g.num_dyads());
    const double floor_resid = std::max(1e-13, 1e-15 * num_dyads);
    const double target = std::max(std::min(tol, 1e-12), floor_resid);
    if (tol < floor_resid)
        throw NumericalError("requested tol " + std::to_string(tol) +
                             " is below achievable float precision for this size");

    for (int iter = 0; iter < max_iter; ++iter) {
        residual = fill_grad_hess(true);
        if (residual < target) break;

        double ridge = 1e-9 * std::max(1.0, hess.trace() / dim);
        hess.diagonal().array() += ridge;
        Eigen::VectorXd step = hess.ldlt().solve(grad);
        if (!step.allFinite()) throw NumericalError("singular Newton system in beta-model fit");

        // step halving keeps the concave objective monotone
        double t = 1.0;
        bool improved = false;
        for (int h = 0; h < 60; ++h) {
            Eigen::VectorXd trial = theta + t * step;
            std::swap(theta, trial);
            double ll_trial = loglik_at();
            if (ll_trial >= ll - 1e-12 * std::abs(ll)) {
                ll = ll_trial;
                improved = true;
                break;
            }
            std::swap(theta, trial);
            t *= 0.5;
        }
        if (!improved) break; // stalled: residual check below decides

        // divergence check on gauge-fixed parameters
        BetaParams snapshot;
        snapshot.alpha.assign(static_cast<std::size_t>(k),
                              std::vector<double>(static_cast<std::size_t>(k), 0.0));
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                double v = theta[block_pair_index(k, i, j)];
                snapshot.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                snapshot.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
            }
        snapshot.beta.assign(theta.data() + nc, theta.data() + nc + n);
        double largest = regauge(snapshot, z);
        if (largest > 30.0)
            throw MleNonexistenceError(
                "beta-model fit diverged (|parameter| > 30): statistic lies on the "
                "model-polytope boundary");
    }

    // the loop may exit after a final improving step without re-measuring
    if (!(residual < target)) residual = fill_grad_hess(false);
    if (!(residual < target))
        throw MleNonexistenceError("beta-model moment residual stalled at " +
                                   std::to_string(residual) +
                                   ": statistic lies on the model-polytope boundary");

    BetaParams out;
    out.alpha.assign(static_cast<std::size_t>(k),
                     std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            double v = theta[block_pair_index(k, i, j)];
            out.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            out.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    out.beta.assign(theta.data() + nc, theta.data() + nc + n);
    regauge(out, z);
    return out;
}

double loglik(const Graph& g, const BlockAssignment& z, const ModelParams& params) {
    check_same_nodes(g, z);
    double ll = 0.0;
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v) {
            double p = edge_prob(params, z, u, v);
            bool e = g.has_edge(u, v);
            if (e) {
                if (p == 0.0) return -std::numeric_limits<double>::infinity();
                if (p < 1.0)
                    ll += std::log(p);
                // p == 1: contributes log 1 = 0
            } else {
                if (p == 1.0) return -std::numeric_limits<double>::infinity();
                if (p > 0.0)
                    ll += std::log1p(-p);
            }
        }
    return ll;
}

std::vector<double> dyad_probs(const ModelParams& params, const BlockAssignment& z) {
    int n = z.n();
    std::vector<double> probs(static_cast<std::size_t>(static_cast<long>(n) * (n - 1) / 2));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            probs[static_cast<std::size_t>(Graph::dyad_index(n, u, v))] =
                edge_prob(params, z, u, v);
    return probs;
}

std::vector<double> expected_statistic(Model model, const std::vector<double>& probs,
                                       const BlockAssignment& z) {
    int n = z.n();
    int k = z.k();
    std::vector<double> er(static_cast<std::size_t>(num_block_pairs(k)), 0.0);
    std::vector<double> deg(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double p = probs[static_cast<std::size_t>(Graph::dyad_index(n, u, v))];
            er[static_cast<std::size_t>(block_pair_index(k, z.block_of(u), z.block_of(v)))] += p;
            deg[static_cast<std::size_t>(u)] += p;
            deg[static_cast<std::size_t>(v)] += p;
        }
    switch (model) {
        case Model::ErSbm: return er;
        case Model::AddSbm: {
            std::vector<double> x(static_cast<std::size_t>(k), 0.0);
            for (int u = 0; u < n; ++u)
                x[static_cast<std::size_t>(z.block_of(u))] += deg[static_cast<std::size_t>(u)];
            return x;
        }
        case Model::BetaSbm: {
            er.insert(er.end(), deg.begin(), deg.end());
            return er;
        }
    }
    throw DataError("unknown model tag");
}

std::string params_to_json(const ModelParams& params) {
    nlohmann::json j;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ErParams>) {
                j["model"] = "er";
                j["q"] = p.q;
            } else if constexpr (std::is_same_v<T, AddParams>) {
                j["model"] = "additive";
                j["alpha"] = p.alpha;
            } else {
                j["model"] = "beta";
                j["alpha"] = p.alpha;
                j["beta"] = p.beta;
            }
        },
        params);
    return j.dump();
}

ModelParams params_from_json(Model model, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad parameter JSON: ") + e.what());
    }
    try {
        switch (model) {
            case Model::ErSbm: {
                ErParams p{j.at("q").get<Matrix>()};
                check_symmetric_01(p.q, true);
                return p;
            }
            case Model::AddSbm: return AddParams{j.at("alpha").get<std::vector<double>>()};
            case Model::BetaSbm: {
                BetaParams p;
                p.alpha = j.at("alpha").get<Matrix>();
                p.beta = j.at("beta").get<std::vector<double>>();
                return p;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad parameter JSON: ") + e.what());
    }
    throw DataError("unknown model tag");
}

} // namespace sbmgof
