#include "sbmgof/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sbmgof/errors.hpp"

namespace sbmgof {

using nlohmann::json;

const char* regime_name(Regime r) {
    return r == Regime::Dense ? "dense" : "sparse";
}

Regime parse_regime(const std::string& name) {
    if (name == "dense") return Regime::Dense;
    if (name == "sparse") return Regime::Sparse;
    throw DataError("unknown regime '" + name + "' (expected dense|sparse)");
}

Matrix preset_q(Model model, Regime regime) {
    switch (model) {
        case Model::ErSbm:
            return regime == Regime::Dense ? Matrix{{0.6, 0.1}, {0.1, 0.6}}
                                           : Matrix{{0.20, 0.01}, {0.01, 0.20}};
        case Model::AddSbm:
            return regime == Regime::Dense ? Matrix{{0.77, 0.67}, {0.67, 0.55}}
                                           : Matrix{{0.02, 0.12}, {0.12, 0.50}};
        case Model::BetaSbm:
            throw DataError("the degree-corrected preset is a logit matrix; use preset_alpha");
    }
    throw DataError("unknown model tag");
}

Matrix preset_alpha(Regime regime) {
    return regime == Regime::Dense ? Matrix{{0.6, 0.1}, {0.1, 0.3}}
                                   : Matrix{{-2.0, -0.01}, {-0.01, -1.0}};
}

namespace {

void check_square_symmetric(const Matrix& m, int k, const char* what) {
    if (static_cast<int>(m.size()) != k)
        throw DataError(std::string(what) + " must be " + std::to_string(k) + "x" +
                        std::to_string(k));
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != k)
            throw DataError(std::string(what) + " must be square");
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (m[i][j] != m[j][i]) throw DataError(std::string(what) + " must be symmetric");
}

Matrix effective_q(const SimulationConfig& c) {
    return c.q ? *c.q : preset_q(c.model, c.regime);
}

Matrix effective_alpha(const SimulationConfig& c) {
    return c.alpha ? *c.alpha : preset_alpha(c.regime);
}

std::pair<double, double> effective_beta_bounds(const SimulationConfig& c) {
    return c.beta_bounds ? *c.beta_bounds
                         : std::pair<double, double>{-static_cast<double>(c.n),
                                                     static_cast<double>(c.n)};
}

} // namespace

void SimulationConfig::validate() const {
    if (n < 1) throw DataError("n must be positive");
    if (k < 1) throw DataError("k must be positive");
    if (replicates < 1) throw DataError("replicates must be positive");
    if (model == Model::BetaSbm) {
        const Matrix a = effective_alpha(*this);
        check_square_symmetric(a, k, "alpha");
        for (const auto& row : a)
            for (double v : row)
                if (!std::isfinite(v)) throw DataError("alpha entries must be finite");
        auto [lo, hi] = effective_beta_bounds(*this);
        if (!(lo <= hi)) throw DataError("beta bounds must satisfy low <= high");
    } else {
        const Matrix qm = effective_q(*this);
        check_square_symmetric(qm, k, "q");
        for (const auto& row : qm)
            for (double v : row)
                if (!(v >= 0.0 && v <= 1.0))
                    throw DataError("q entries must be probabilities in [0,1]");
    }
}

std::string config_to_json(const SimulationConfig& c) {
    json j;
    j["model"] = model_name(c.model);
    j["n"] = c.n;
    j["k"] = c.k;
    j["regime"] = regime_name(c.regime);
    j["seed"] = c.seed;
    j["replicates"] = c.replicates;
    if (c.q) j["q"] = *c.q;
    if (c.alpha) j["alpha"] = *c.alpha;
    if (c.beta_bounds) j["beta_bounds"] = {c.beta_bounds->first, c.beta_bounds->second};
    return j.dump(2);
}

SimulationConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("bad config JSON: ") + e.what());
    }
    SimulationConfig c;
    try {
        if (j.contains("model")) c.model = model_from_name(j["model"].get<std::string>());
        if (j.contains("n")) c.n = j["n"].get<int>();
        if (j.contains("k")) c.k = j["k"].get<int>();
        if (j.contains("regime")) c.regime = parse_regime(j["regime"].get<std::string>());
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("replicates")) c.replicates = j["replicates"].get<int>();
        if (j.contains("q")) c.q = j["q"].get<Matrix>();
        if (j.contains("alpha")) c.alpha = j["alpha"].get<Matrix>();
        if (j.contains("beta_bounds")) {
            auto b = j["beta_bounds"].get<std::vector<double>>();
            if (b.size() != 2) throw DataError("beta_bounds must be [low, high]");
            c.beta_bounds = {b[0], b[1]};
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("bad config JSON: ") + e.what());
    }
    c.validate();
    return c;
}

BlockAssignment simulate_assignment(int n, int k, Rng& rng, std::string* warning) {
    if (n < 1) throw DataError("n must be positive");
    if (k < 1) throw DataError("k must be positive");
    if (k > n && warning)
        *warning = "k=" + std::to_string(k) + " exceeds n=" + std::to_string(n) +
                   "; some blocks must be empty and most fits will reject the assignment";
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> labels(n);
    for (int u = 0; u < n; ++u) labels[u] = pick(rng);
    return BlockAssignment(k, labels);
}

Graph simulate_graph(const BlockAssignment& z, const ModelParams& params, Rng& rng) {
    const int n = z.n();
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double p = edge_prob(params, z, u, v);
            if (!(p >= 0.0 && p <= 1.0))
                throw DataError("edge probability for dyad {" + std::to_string(u + 1) + "," +
                                std::to_string(v + 1) + "} is not in [0,1]");
            if (std::bernoulli_distribution(p)(rng)) edges.push_back({u, v});
        }
    }
    return Graph::from_edges(n, edges);
}

Replicate simulate_replicate(const SimulationConfig& c, int replicate_index) {
    c.validate();
    if (replicate_index < 0) throw DataError("replicate index must be nonnegative");
    Rng rng = make_rng(child_seed(child_seed(c.seed, replicate_index), 0));

    BlockAssignment z = simulate_assignment(c.n, c.k, rng);
    ModelParams params = ErParams{};
    if (c.model == Model::BetaSbm) {
        auto [lo, hi] = effective_beta_bounds(c);
        std::uniform_real_distribution<double> u(lo, hi);
        std::vector<double> beta(c.n);
        for (double& b : beta) b = u(rng);
        params = BetaParams{effective_alpha(c), std::move(beta)};
    } else {
        // both probability-matrix models generate the same way: one Bernoulli
        // parameter per block pair
        params = ErParams{effective_q(c)};
    }
    Graph g = simulate_graph(z, params, rng);
    return Replicate{std::move(z), std::move(params), std::move(g)};
}

ExperimentResult run_experiment(const SimulationConfig& c, const ExperimentSettings& s) {
    c.validate();
    if (!(s.level > 0.0 && s.level < 1.0)) throw DataError("level must lie in (0,1)");

    ExperimentResult out;
    out.config = c;
    out.null_model = s.null_model;
    out.level = s.level;

    double density_sum = 0.0;
    int completed = 0;
    int rejections = 0;
    for (int i = 0; i < c.replicates; ++i) {
        Replicate rep = simulate_replicate(c, i);
        const std::uint64_t rep_seed = child_seed(c.seed, i);

        ReplicateOutcome o;
        o.index = i;
        o.density = rep.g.num_dyads() > 0
                        ? static_cast<double>(rep.g.num_edges()) / rep.g.num_dyads()
                        : 0.0;
        density_sum += o.density;
        try {
            AssignmentDistribution pi = [&] {
                if (s.estimator == EstimatorKind::Posterior) {
                    Rng grng = make_rng(child_seed(rep_seed, 1));
                    return gibbs_posterior(rep.g, c.k, s.gibbs, grng);
                }
                return spectral_estimate(rep.g, c.k, s.spectral);
            }();
            TestSettings ts = s.test;
            ts.seed = child_seed(rep_seed, 2);
            TestReport report = test_latent(rep.g, s.null_model, pi, ts);
            o.p_value = report.p_value;
            o.rejected = report.p_value < s.level;
            ++completed;
            if (o.rejected) ++rejections;
        } catch (const Error& e) {
            o.failed = true;
            o.error = e.what();
            o.p_value = std::numeric_limits<double>::quiet_NaN();
            ++out.failures;
        }
        out.replicates.push_back(std::move(o));
    }
    out.rejection_rate = completed > 0
                             ? static_cast<double>(rejections) / completed
                             : std::numeric_limits<double>::quiet_NaN();
    out.mean_density = density_sum / c.replicates;
    return out;
}

std::string experiment_to_json(const ExperimentResult& r) {
    json j;
    j["config"] = json::parse(config_to_json(r.config));
    j["null_model"] = model_name(r.null_model);
    j["level"] = r.level;
    j["rejection_rate"] = std::isnan(r.rejection_rate) ? json() : json(r.rejection_rate);
    j["failures"] = r.failures;
    j["mean_density"] = r.mean_density;
    j["replicates"] = json::array();
    for (const auto& o : r.replicates) {
        json row;
        row["index"] = o.index;
        row["p_value"] = std::isnan(o.p_value) ? json() : json(o.p_value);
        row["rejected"] = o.rejected;
        row["density"] = o.density;
        row["failed"] = o.failed;
        if (o.failed) row["error"] = o.error;
        j["replicates"].push_back(std::move(row));
    }
    return j.dump(2);
}

std::string experiment_to_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "replicate,p_value,rejected,density,failed\n";
    for (const auto& o : r.replicates) {
        os << o.index << ',';
        if (!std::isnan(o.p_value)) os << o.p_value;
        os << ',' << (o.rejected ? 1 : 0) << ',' << o.density << ','
           << (o.failed ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string ascii_histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw DataError("bins must be positive");
    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    const std::size_t dropped = values.size() - finite.size();

    std::ostringstream os;
    if (finite.empty()) {
        os << "no finite values to bin";
        if (dropped > 0) os << " (" << dropped << " non-finite omitted)";
        os << '\n';
        return os.str();
    }
    const auto [lo_it, hi_it] = std::minmax_element(finite.begin(), finite.end());
    const double lo = *lo_it, hi = *hi_it;
    os << std::setprecision(6);
    if (lo == hi) {
        os << "all " << finite.size() << " finite values equal " << lo << '\n';
    } else {
        std::vector<long> counts(bins, 0);
        for (double v : finite) {
            int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
            idx = std::clamp(idx, 0, bins - 1);
            ++counts[idx];
        }
        const long peak = *std::max_element(counts.begin(), counts.end());
        const double width = (hi - lo) / bins;
        for (int b = 0; b < bins; ++b) {
            const double a = lo + b * width;
            const double z = (b + 1 == bins) ? hi : a + width;
            const int bar = counts[b] == 0
                                ? 0
                                : std::max(1, static_cast<int>(std::lround(
                                                  40.0 * counts[b] / peak)));
            os << '[' << std::setw(12) << a << ", " << std::setw(12) << z
               << (b + 1 == bins ? "] " : ") ") << std::string(bar, '#')
               << (bar > 0 ? " " : "") << counts[b] << '\n';
        }
    }
    if (dropped > 0) os << dropped << " non-finite value(s) omitted\n";
    return os.str();
}

} // namespace sbmgof
