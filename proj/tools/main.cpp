#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sbmgof/errors.hpp"
#include "sbmgof/estimators.hpp"
#include "sbmgof/exact_test.hpp"
#include "sbmgof/gof.hpp"
#include "sbmgof/io.hpp"
#include "sbmgof/models.hpp"
#include "sbmgof/polytope.hpp"
#include "sbmgof/rng.hpp"
#include "sbmgof/sampler.hpp"
#include "sbmgof/stats.hpp"
#include "sbmgof/synth.hpp"

using namespace sbmgof;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string model = "er";
    std::string gof;
    long num_graphs = 1000;
    long burn_in = -1;
    long thin = -1;
    std::string format = "json";
    std::string out;
    bool text_hist = false;
};

struct EstimatorOpts {
    std::string method = "gibbs";
    long draws = 2000;
    long est_burn_in = 500;
    double truncate = -1.0;
    double tau = 0.25;
    int restarts = 20;
};

void add_estimator_flags(CLI::App* sub, EstimatorOpts& e) {
    sub->add_option("--method", e.method, "block estimator")
        ->check(CLI::IsMember({"gibbs", "spectral"}));
    sub->add_option("--draws", e.draws, "posterior draws collected (gibbs)");
    sub->add_option("--estimator-burn-in", e.est_burn_in, "discarded initial sweeps (gibbs)");
    sub->add_option("--truncate", e.truncate,
                    "drop atoms with weight <= this (negative: 1/draws)");
    sub->add_option("--tau", e.tau, "adjacency regularization strength (spectral)");
    sub->add_option("--restarts", e.restarts, "k-means restarts (spectral)");
}

AssignmentDistribution estimate(const Graph& g, int k, const EstimatorOpts& e,
                                std::uint64_t seed) {
    if (e.method == "spectral") {
        SpectralSettings s;
        s.tau = e.tau;
        s.restarts = e.restarts;
        return spectral_estimate(g, k, s);
    }
    GibbsSettings s;
    s.draws = e.draws;
    s.burn_in = e.est_burn_in;
    s.truncate = e.truncate;
    Rng rng = make_rng(seed);
    return gibbs_posterior(g, k, s, rng);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const CommonOpts& o, std::string payload) {
    if (!payload.empty() && payload.back() != '\n') payload += '\n';
    if (o.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw DataError("cannot open output file: " + o.out);
    f << payload;
}

// quick-look histograms go to stdout when the payload is routed to a file,
// otherwise to stderr so the payload stays machine-readable
std::ostream& hist_stream(const CommonOpts& o) {
    return o.out.empty() ? std::cerr : std::cout;
}

TestSettings make_test_settings(const CommonOpts& o, bool smooth, bool no_refit) {
    TestSettings s;
    s.num_graphs = o.num_graphs;
    s.burn_in = o.burn_in;
    s.thin = o.thin;
    s.seed = o.seed;
    if (!o.gof.empty()) s.gof = gof_from_name(o.gof);
    s.add_one_smoothing = smooth;
    s.refit_per_fiber = !no_refit;
    return s;
}

json edges_json(const Graph& g) {
    json a = json::array();
    for (auto [u, v] : g.edges()) a.push_back({u + 1, v + 1});
    return a;
}

json labels_json(const BlockAssignment& z) {
    json a = json::array();
    for (int lab : z.labels()) a.push_back(lab + 1);
    return a;
}

void report_warning(const TestReport& r) {
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';
}

void maybe_hist(const CommonOpts& o, const TestReport& r) {
    if (!o.text_hist || r.fibers.empty()) return;
    const auto& f = r.fibers.front();
    hist_stream(o) << "GoF samples, fiber 0 (weight " << f.weight << ", observed "
                   << f.observed_gof << "):\n"
                   << ascii_histogram(f.gof_samples);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"finite-sample goodness-of-fit tests for block models via fiber sampling"};
    app.require_subcommand(1);

    CommonOpts o;
    app.add_option("--seed", o.seed, "master RNG seed");
    app.add_option("--model", o.model, "model tag")
        ->check(CLI::IsMember({"er", "additive", "add", "beta"}));
    app.add_option("--gof", o.gof, "statistic override (default: per-model)")
        ->check(CLI::IsMember({"chi2-bc", "chi2-pearson"}));
    app.add_option("--num-graphs", o.num_graphs, "fiber draws per chain");
    app.add_option("--burn-in", o.burn_in, "chain burn-in steps (negative: auto)");
    app.add_option("--thin", o.thin, "steps between retained draws (negative: auto)");
    app.add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", o.out, "write the payload to this file instead of stdout");
    app.add_flag("--text-hist", o.text_hist, "print a 20-bin ASCII histogram");

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "generate synthetic graphs");
    sim->fallthrough();
    int sim_n = 27, sim_k = 2, sim_reps = 1;
    std::string sim_regime = "dense", sim_config;
    sim->add_option("--n", sim_n, "node count");
    sim->add_option("--k", sim_k, "block count");
    sim->add_option("--regime", sim_regime, "named parameter preset")
        ->check(CLI::IsMember({"dense", "sparse"}));
    sim->add_option("--replicates", sim_reps, "number of graphs to generate");
    sim->add_option("--config", sim_config, "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    sim->callback([&] {
        SimulationConfig c;
        if (!sim_config.empty()) c = config_from_json(read_file(sim_config));
        if (sim->count("--n")) c.n = sim_n;
        if (sim->count("--k")) c.k = sim_k;
        if (sim->count("--regime")) c.regime = parse_regime(sim_regime);
        if (sim->count("--replicates") || sim_config.empty()) c.replicates = sim_reps;
        if (app.count("--model") || sim_config.empty()) c.model = model_from_name(o.model);
        if (app.count("--seed") || sim_config.empty()) c.seed = o.seed;
        c.validate();
        if (c.k > c.n) std::cerr << "warning: k exceeds n; some blocks must be empty\n";

        if (o.format == "csv") {
            // edge-list text; a single replicate keeps the file well-defined
            if (c.replicates != 1)
                throw DataError("csv simulate output supports a single replicate");
            Replicate rep = simulate_replicate(c, 0);
            std::ostringstream ss;
            ss << "# blocks (1-based):";
            for (int lab : rep.z.labels()) ss << ' ' << lab + 1;
            ss << '\n';
            write_edge_list(rep.g, ss);
            emit(o, ss.str());
            return;
        }
        json out;
        out["config"] = json::parse(config_to_json(c));
        out["replicates"] = json::array();
        for (int i = 0; i < c.replicates; ++i) {
            Replicate rep = simulate_replicate(c, i);
            json row;
            row["index"] = i;
            row["n"] = rep.g.n();
            row["z"] = labels_json(rep.z);
            row["edges"] = edges_json(rep.g);
            row["density"] = rep.g.num_dyads() > 0
                                 ? static_cast<double>(rep.g.num_edges()) / rep.g.num_dyads()
                                 : 0.0;
            row["params"] = json::parse(params_to_json(rep.params));
            out["replicates"].push_back(std::move(row));
        }
        emit(o, out.dump(2));
    });

    // ---- estimate-blocks ---------------------------------------------------
    auto* est = app.add_subcommand("estimate-blocks", "estimate the block assignment");
    est->fallthrough();
    std::string est_graph;
    int est_k = 2;
    EstimatorOpts est_opts;
    est->add_option("--graph", est_graph, "edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    est->add_option("--k", est_k, "block count")->required();
    add_estimator_flags(est, est_opts);
    est->callback([&] {
        Graph g = read_edge_list_file(est_graph);
        auto pi = estimate(g, est_k, est_opts, o.seed);
        if (o.format == "csv") {
            std::ostringstream ss;
            ss << "atom,weight,labels\n";
            ss << std::setprecision(17);
            for (std::size_t i = 0; i < pi.assignments.size(); ++i) {
                ss << i << ',' << pi.weights[i] << ',';
                const auto& labs = pi.assignments[i].labels();
                for (std::size_t u = 0; u < labs.size(); ++u)
                    ss << (u ? " " : "") << labs[u] + 1;
                ss << '\n';
            }
            emit(o, ss.str());
            return;
        }
        emit(o, distribution_to_json(pi));
    });

    // ---- test-known --------------------------------------------------------
    auto* tk = app.add_subcommand("test-known", "exact test with a known assignment");
    tk->fallthrough();
    std::string tk_graph, tk_blocks;
    bool tk_smooth = false;
    tk->add_option("--graph", tk_graph, "edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    tk->add_option("--blocks", tk_blocks, "block-label file")
        ->required()
        ->check(CLI::ExistingFile);
    tk->add_flag("--smooth", tk_smooth, "use the (count+1)/(N+1) p-value");
    tk->callback([&] {
        Graph g = read_edge_list_file(tk_graph);
        BlockAssignment z = read_blocks_file(tk_blocks);
        auto r = test_known(g, z, model_from_name(o.model),
                            make_test_settings(o, tk_smooth, false));
        report_warning(r);
        maybe_hist(o, r);
        emit(o, o.format == "csv" ? report_to_csv(r) : report_to_json(r));
    });

    // ---- test-latent -------------------------------------------------------
    auto* tl = app.add_subcommand("test-latent", "exact test with an estimated assignment");
    tl->fallthrough();
    std::string tl_graph;
    int tl_k = 2;
    bool tl_smooth = false, tl_no_refit = false;
    EstimatorOpts tl_opts;
    tl->add_option("--graph", tl_graph, "edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    tl->add_option("--k", tl_k, "block count")->required();
    tl->add_flag("--smooth", tl_smooth, "use the (count+1)/(N+1) p-value");
    tl->add_flag("--no-refit", tl_no_refit, "fit once on the leading assignment");
    add_estimator_flags(tl, tl_opts);
    tl->callback([&] {
        Graph g = read_edge_list_file(tl_graph);
        auto pi = estimate(g, tl_k, tl_opts, child_seed(o.seed, 1));
        auto r = test_latent(g, model_from_name(o.model), pi,
                             make_test_settings(o, tl_smooth, tl_no_refit));
        report_warning(r);
        maybe_hist(o, r);
        emit(o, o.format == "csv" ? report_to_csv(r) : report_to_json(r));
    });

    // ---- sample-fiber ------------------------------------------------------
    auto* sf = app.add_subcommand("sample-fiber", "draw graphs from the observed fiber");
    sf->fallthrough();
    std::string sf_graph, sf_blocks;
    sf->add_option("--graph", sf_graph, "edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    sf->add_option("--blocks", sf_blocks, "block-label file")
        ->required()
        ->check(CLI::ExistingFile);
    sf->callback([&] {
        Graph g = read_edge_list_file(sf_graph);
        BlockAssignment z = read_blocks_file(sf_blocks);
        check_same_nodes(g, z);
        ChainSettings cs;
        cs.burn_in = o.burn_in;
        cs.thin = o.thin;
        cs.num_graphs = o.num_graphs;
        cs.seed = o.seed;
        Rng rng = make_rng(o.seed);
        FiberSample sample = walk(g, z, model_from_name(o.model), cs, rng);
        if (o.format == "csv") {
            std::ostringstream ss;
            ss << "sample,u,v\n";
            for (std::size_t i = 0; i < sample.graphs.size(); ++i)
                for (auto [u, v] : sample.graphs[i].edges())
                    ss << i << ',' << u + 1 << ',' << v + 1 << '\n';
            emit(o, ss.str());
            return;
        }
        json out;
        out["model"] = o.model;
        out["seed"] = o.seed;
        out["num_graphs"] = o.num_graphs;
        out["steps"] = sample.steps;
        out["acceptance_rate"] = sample.acceptance_rate();
        out["graphs"] = json::array();
        for (const auto& gg : sample.graphs) out["graphs"].push_back(edges_json(gg));
        emit(o, out.dump(2));
    });

    // ---- polytope-check ----------------------------------------------------
    auto* pc = app.add_subcommand("polytope-check",
                                  "does the model fit exist for this graph and assignment?");
    pc->fallthrough();
    std::string pc_graph, pc_blocks;
    pc->add_option("--graph", pc_graph, "edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    pc->add_option("--blocks", pc_blocks, "block-label file")
        ->required()
        ->check(CLI::ExistingFile);
    pc->callback([&] {
        Graph g = read_edge_list_file(pc_graph);
        BlockAssignment z = read_blocks_file(pc_blocks);
        const Model model = model_from_name(o.model);
        json out;
        out["model"] = model_name(model);
        std::string verdict;
        bool exists = false;
        if (model == Model::BetaSbm) {
            // no half-space description is implemented for this model; probe
            // the fit directly
            try {
                mle_beta(g, z);
                exists = true;
                verdict = "fit-converged";
            } catch (const MleNonexistenceError& e) {
                verdict = "fit-diverged";
                out["detail"] = e.what();
            }
        } else {
            auto [ok, v] = mle_exists(model, g, z);
            exists = ok;
            verdict = verdict_name(v.verdict);
            out["membership"] = json::parse(verdict_to_json(v));
        }
        out["mle_exists"] = exists;
        out["verdict"] = verdict;
        if (o.format == "csv")
            emit(o, "model,mle_exists,verdict\n" + std::string(model_name(model)) + "," +
                        (exists ? "1" : "0") + "," + verdict + "\n");
        else
            emit(o, out.dump(2));
    });

    // ---- experiment --------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "replicated rejection-rate study");
    ex->fallthrough();
    int ex_n = 27, ex_k = 2, ex_reps = 20;
    std::string ex_regime = "dense", ex_config, ex_null = "er";
    double ex_level = 0.05;
    EstimatorOpts ex_opts;
    ex->add_option("--n", ex_n, "node count");
    ex->add_option("--k", ex_k, "block count");
    ex->add_option("--regime", ex_regime, "named parameter preset")
        ->check(CLI::IsMember({"dense", "sparse"}));
    ex->add_option("--replicates", ex_reps, "replicate count");
    ex->add_option("--config", ex_config, "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    ex->add_option("--null-model", ex_null, "model under test")
        ->check(CLI::IsMember({"er", "additive", "add", "beta"}));
    ex->add_option("--level", ex_level, "nominal rejection level");
    add_estimator_flags(ex, ex_opts);
    ex->callback([&] {
        SimulationConfig c;
        if (!ex_config.empty()) c = config_from_json(read_file(ex_config));
        if (ex->count("--n")) c.n = ex_n;
        if (ex->count("--k")) c.k = ex_k;
        if (ex->count("--regime")) c.regime = parse_regime(ex_regime);
        if (ex->count("--replicates")) c.replicates = ex_reps;
        if (app.count("--model") || ex_config.empty()) c.model = model_from_name(o.model);
        if (app.count("--seed") || ex_config.empty()) c.seed = o.seed;

        ExperimentSettings s;
        s.null_model = model_from_name(ex_null);
        s.estimator = ex_opts.method == "spectral" ? EstimatorKind::Point
                                                   : EstimatorKind::Posterior;
        s.gibbs.draws = ex_opts.draws;
        s.gibbs.burn_in = ex_opts.est_burn_in;
        s.gibbs.truncate = ex_opts.truncate;
        s.spectral.tau = ex_opts.tau;
        s.spectral.restarts = ex_opts.restarts;
        s.test = make_test_settings(o, false, false);
        s.level = ex_level;

        auto r = run_experiment(c, s);
        if (o.text_hist) {
            std::vector<double> ps;
            for (const auto& rep : r.replicates)
                if (!rep.failed) ps.push_back(rep.p_value);
            hist_stream(o) << "replicate p-values (rejection rate "
                           << r.rejection_rate << "):\n"
                           << ascii_histogram(ps);
        }
        emit(o, o.format == "csv" ? experiment_to_csv(r) : experiment_to_json(r));
    });

    // ---- fiber-enum --------------------------------------------------------
    auto* fe = app.add_subcommand("fiber-enum",
                                  "exhaustively enumerate a small fiber (oracle)");
    fe->fallthrough();
    std::string fe_graph, fe_blocks;
    bool fe_count_only = false;
    fe->add_option("--graph", fe_graph, "edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    fe->add_option("--blocks", fe_blocks, "block-label file")
        ->required()
        ->check(CLI::ExistingFile);
    fe->add_flag("--count-only", fe_count_only, "emit only the fiber size");
    fe->callback([&] {
        Graph g = read_edge_list_file(fe_graph);
        BlockAssignment z = read_blocks_file(fe_blocks);
        auto fiber = enumerate_fiber(g, z, model_from_name(o.model));
        if (o.format == "csv") {
            std::ostringstream ss;
            ss << "graph,u,v\n";
            for (std::size_t i = 0; i < fiber.size() && !fe_count_only; ++i)
                for (auto [u, v] : fiber[i].edges())
                    ss << i << ',' << u + 1 << ',' << v + 1 << '\n';
            emit(o, ss.str());
            return;
        }
        json out;
        out["model"] = o.model;
        out["size"] = fiber.size();
        if (!fe_count_only) {
            out["graphs"] = json::array();
            for (const auto& gg : fiber) out["graphs"].push_back(edges_json(gg));
        }
        emit(o, out.dump(2));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // usage problems exit 1, help/version exit 0
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const NumericalError& e) { // includes nonexistent-fit errors
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
