#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbmgof/errors.hpp"
#include "sbmgof/exact_test.hpp"
#include "sbmgof/sampler.hpp"
#include "support/fixtures.hpp"

using namespace sbmgof;
using namespace sbmgof::testfix;

namespace {

// Exact conditional p-value by exhaustive fiber enumeration with the fit
// frozen on the observed graph; the Monte Carlo estimate must approach this.
double exact_p(const Graph& g_obs, const BlockAssignment& z, Model model, GofStatistic stat) {
    FittedGof fitted = fit_gof(model, stat, g_obs, z);
    const double obs = eval_gof(fitted, g_obs, z);
    const double thr = obs - 1e-12 * std::abs(obs);
    auto fiber = enumerate_fiber(g_obs, z, model);
    long count = 0;
    for (const auto& g : fiber)
        if (eval_gof(fitted, g, z) >= thr) ++count;
    return static_cast<double>(count) / static_cast<double>(fiber.size());
}

AssignmentDistribution make_pi(std::vector<BlockAssignment> zs, std::vector<double> ws) {
    AssignmentDistribution pi;
    pi.assignments = std::move(zs);
    pi.weights = std::move(ws);
    pi.provenance = EstimatorKind::Posterior;
    pi.validate();
    return pi;
}

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph::from_edges(n, edges);
}

// Same block-pair counts as the balanced interior fixture (so the same fiber
// and the same interior fit), but the cross edges pile onto one node, which
// makes the observed deviation informative rather than fiber-minimal.
Graph skewed6_graph() {
    return Graph::from_edges(6, {{0, 1}, {3, 4}, {0, 3}, {0, 4}, {0, 5}});
}

} // namespace

TEST_SUITE("exact_test") {

TEST_CASE("statistic selection defaults and warnings") {
    CHECK(resolve_gof(Model::ErSbm, {}).stat == GofStatistic::ChiSqBC);
    CHECK(resolve_gof(Model::AddSbm, {}).stat == GofStatistic::ChiSqBC);
    CHECK(resolve_gof(Model::BetaSbm, {}).stat == GofStatistic::ChiSqPearson);
    CHECK(resolve_gof(Model::ErSbm, {}).warning.empty());
    CHECK(resolve_gof(Model::AddSbm, GofStatistic::ChiSqPearson).warning.empty());
    CHECK(resolve_gof(Model::BetaSbm, GofStatistic::ChiSqBC).warning.empty());

    auto vacuous = resolve_gof(Model::ErSbm, GofStatistic::ChiSqPearson);
    CHECK(vacuous.stat == GofStatistic::ChiSqPearson);
    CHECK(vacuous.warning.find("constant") != std::string::npos);
}

TEST_CASE("known-assignment test requires an existing fit") {
    TestSettings s;
    s.num_graphs = 10;
    // the worked 6-node example sits on the box boundary (an empty
    // within-block class) and has a one-dyad class that pins the degree fit
    CHECK_THROWS_AS(test_known(demo6_graph(), demo6_blocks(), Model::ErSbm, s),
                    MleNonexistenceError);
    CHECK_THROWS_AS(test_known(demo6_graph(), demo6_blocks(), Model::BetaSbm, s),
                    MleNonexistenceError);
    CHECK_THROWS_AS(test_known(complete_graph(6), demo6_blocks(), Model::AddSbm, s),
                    MleNonexistenceError);

    // the diagnostic names the obstruction
    try {
        test_known(demo6_graph(), demo6_blocks(), Model::ErSbm, s);
        FAIL("expected MleNonexistenceError");
    } catch (const MleNonexistenceError& e) {
        CHECK(std::string(e.what()).find("boundary") != std::string::npos);
    }

    // the degree-sum statistic of the same graph is interior, so the
    // additive-model test runs
    auto r = test_known(demo6_graph(), demo6_blocks(), Model::AddSbm, s);
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.fibers.size() == 1);
    CHECK(r.gof == GofStatistic::ChiSqBC);
}

TEST_CASE("vacuous pairing yields p equal to one with a diagnostic") {
    TestSettings s;
    s.num_graphs = 200;
    s.seed = 31;
    s.gof = GofStatistic::ChiSqPearson;
    auto r = test_known(interior6_graph(), interior6_blocks(), Model::ErSbm, s);
    CHECK(r.p_value == 1.0);
    CHECK(r.warning.find("constant") != std::string::npos);
    CHECK(r.warning.find("degenerate fiber sample") != std::string::npos);
    // every sampled value equals the observed one
    for (double v : r.fibers[0].gof_samples)
        CHECK(v == doctest::Approx(r.fibers[0].observed_gof).epsilon(1e-12));
}

TEST_CASE("monte carlo p-value matches exhaustive enumeration") {
    // balanced fixture: its matching-shaped cross edges minimize the
    // statistic over the whole fiber, so the exact p-value is 1 and tie
    // counting must keep the Monte Carlo estimate there too
    {
        const double exact = exact_p(interior6_graph(), interior6_blocks(), Model::ErSbm,
                                     GofStatistic::ChiSqBC);
        CHECK(exact == 1.0);
        TestSettings s;
        s.num_graphs = 2000;
        s.seed = 2027;
        auto r = test_known(interior6_graph(), interior6_blocks(), Model::ErSbm, s);
        CHECK(r.p_value == 1.0);
    }
    // skewed representative of the same fiber (size 756): interior p-value
    {
        const double exact = exact_p(skewed6_graph(), interior6_blocks(), Model::ErSbm,
                                     GofStatistic::ChiSqBC);
        CHECK(exact > 0.02);
        CHECK(exact < 0.98);
        TestSettings s;
        s.num_graphs = 100000;
        s.seed = 2028;
        auto r = test_known(skewed6_graph(), interior6_blocks(), Model::ErSbm, s);
        CHECK(std::abs(r.p_value - exact) < 0.02);
        CHECK(r.fibers[0].gof_samples.size() == 100000);
        CHECK(r.fibers[0].gof_infinite == 0);
    }
    // degree-corrected model on the 6-cycle fixture (fiber size 45); heavier
    // thinning because the walk accepts rarely here
    {
        const double exact = exact_p(beta6_graph(), beta6_blocks(), Model::BetaSbm,
                                     GofStatistic::ChiSqPearson);
        TestSettings s;
        s.num_graphs = 20000;
        s.thin = 60;
        s.seed = 2029;
        auto r = test_known(beta6_graph(), beta6_blocks(), Model::BetaSbm, s);
        CHECK(std::abs(r.p_value - exact) < 0.02);
    }
}

TEST_CASE("latent test with a point estimate reproduces the known test") {
    TestSettings s;
    s.num_graphs = 500;
    s.seed = 777;
    auto known = test_known(skewed6_graph(), interior6_blocks(), Model::ErSbm, s);
    auto latent = test_latent(skewed6_graph(), Model::ErSbm,
                              make_pi({interior6_blocks()}, {1.0}), s);
    CHECK(latent.latent);
    CHECK_FALSE(known.latent);
    CHECK(latent.p_value == known.p_value);
    REQUIRE(latent.fibers.size() == 1);
    CHECK(latent.fibers[0].gof_samples == known.fibers[0].gof_samples);
    CHECK(latent.fibers[0].observed_gof == known.fibers[0].observed_gof);
    CHECK(latent.fibers[0].weight == 1.0);
}

TEST_CASE("latent test weights the per-fiber p-values") {
    // two interior assignments for the same observed graph
    BlockAssignment z1 = interior6_blocks();
    BlockAssignment z2(2, {0, 0, 1, 1, 0, 1});
    TestSettings s;
    s.num_graphs = 400;
    s.seed = 99;
    auto r = test_latent(interior6_graph(), Model::ErSbm, make_pi({z2, z1}, {0.3, 0.7}), s);
    REQUIRE(r.fibers.size() == 2);
    // deterministic order: descending weight
    CHECK(r.fibers[0].weight == 0.7);
    CHECK(r.fibers[1].weight == 0.3);
    CHECK(r.fibers[0].assignment == z1);
    CHECK(r.p_value == 0.7 * r.fibers[0].p_value + 0.3 * r.fibers[1].p_value);
    for (const auto& f : r.fibers) {
        CHECK(f.mle_exists);
        CHECK(f.p_value > 0.0);
        CHECK(f.p_value <= 1.0);
    }
}

TEST_CASE("boundary statistics still run with the plug-in fit") {
    // a singleton block puts the statistic on the polytope boundary, but the
    // block-count plug-in stays computable, so the fiber runs and only the
    // interiority flag records the defect
    BlockAssignment good = interior6_blocks();
    BlockAssignment flagged(2, {0, 1, 1, 1, 1, 1});
    TestSettings s;
    s.num_graphs = 300;
    s.seed = 5;
    auto r = test_latent(interior6_graph(), Model::ErSbm, make_pi({good, flagged}, {0.6, 0.4}),
                         s);
    REQUIRE(r.fibers.size() == 2);
    CHECK(r.fibers[0].mle_exists);
    CHECK_FALSE(r.fibers[1].mle_exists);
    CHECK(r.fibers[1].gof_samples.size() == 300);
    CHECK(std::isfinite(r.fibers[1].observed_gof));
    CHECK(r.fibers[1].p_value > 0.0);
    CHECK(r.p_value == 0.6 * r.fibers[0].p_value + 0.4 * r.fibers[1].p_value);

    // fully saturated blocks freeze the whole fiber: two disjoint complete
    // blocks with no cross edges form a one-element fiber, so p = 1 exactly
    Graph cliques = Graph::from_edges(8, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                                          {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7}});
    BlockAssignment zc(2, {0, 0, 0, 0, 1, 1, 1, 1});
    auto r2 = test_latent(cliques, Model::ErSbm, make_pi({zc}, {1.0}), s);
    CHECK(r2.p_value == 1.0);
    CHECK_FALSE(r2.fibers[0].mle_exists);
    CHECK(r2.warning.find("degenerate fiber sample") != std::string::npos);
}

TEST_CASE("fibers without fittable parameters contribute conservatively") {
    // on the 6-cycle the degree-corrected fit exists for the balanced split
    // but diverges when a one-dyad class is saturated
    BlockAssignment diverging(2, {0, 0, 1, 1, 1, 1});
    TestSettings s;
    s.num_graphs = 60;
    s.thin = 60;
    s.seed = 5;
    auto r = test_latent(beta6_graph(), Model::BetaSbm,
                         make_pi({beta6_blocks(), diverging}, {0.6, 0.4}), s);
    REQUIRE(r.fibers.size() == 2);
    CHECK(r.fibers[0].mle_exists);
    CHECK_FALSE(r.fibers[1].mle_exists);
    CHECK(r.fibers[1].p_value == 1.0);
    CHECK(std::isnan(r.fibers[1].observed_gof));
    CHECK(r.fibers[1].gof_samples.empty());
    CHECK(r.p_value == 0.6 * r.fibers[0].p_value + 0.4);

    // all-unfittable support: p = 1, every fiber flagged
    auto r2 = test_latent(beta6_graph(), Model::BetaSbm, make_pi({diverging}, {1.0}), s);
    CHECK(r2.p_value == 1.0);
    CHECK_FALSE(r2.fibers[0].mle_exists);
}

TEST_CASE("add-one smoothing bounds the p-value away from zero") {
    TestSettings plain;
    plain.num_graphs = 250;
    plain.seed = 17;
    auto a = test_known(skewed6_graph(), interior6_blocks(), Model::ErSbm, plain);

    TestSettings smooth = plain;
    smooth.add_one_smoothing = true;
    auto b = test_known(skewed6_graph(), interior6_blocks(), Model::ErSbm, smooth);

    CHECK(b.p_value > 0.0);
    CHECK(b.p_value == doctest::Approx((a.p_value * 250 + 1) / 251).epsilon(1e-12));
}

TEST_CASE("independent seeds agree within monte carlo error") {
    const double exact = exact_p(skewed6_graph(), interior6_blocks(), Model::ErSbm,
                                 GofStatistic::ChiSqBC);
    TestSettings s;
    s.num_graphs = 4000;
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        s.seed = seed;
        auto r = test_known(skewed6_graph(), interior6_blocks(), Model::ErSbm, s);
        CHECK(std::abs(r.p_value - exact) < 0.04);
    }
}

TEST_CASE("no-refit mode shares one fit across fibers") {
    BlockAssignment z1 = interior6_blocks();
    BlockAssignment z2(2, {0, 0, 1, 1, 0, 1});
    auto pi = make_pi({z1, z2}, {0.5, 0.5});

    TestSettings s;
    s.num_graphs = 300;
    s.seed = 4242;
    auto refit = test_latent(interior6_graph(), Model::ErSbm, pi, s);

    s.refit_per_fiber = false;
    auto shared = test_latent(interior6_graph(), Model::ErSbm, pi, s);

    REQUIRE(refit.fibers.size() == 2);
    REQUIRE(shared.fibers.size() == 2);
    // the first (defining) fiber is identical; the second sees different
    // fitted parameters, so its observed value moves
    CHECK(shared.fibers[0].gof_samples == refit.fibers[0].gof_samples);
    CHECK(shared.fibers[1].observed_gof != refit.fibers[1].observed_gof);
}

TEST_CASE("report serialization") {
    TestSettings s;
    s.num_graphs = 50;
    s.thin = 60;
    s.seed = 1234;
    BlockAssignment diverging(2, {0, 0, 1, 1, 1, 1});
    auto r = test_latent(beta6_graph(), Model::BetaSbm,
                         make_pi({beta6_blocks(), diverging}, {0.75, 0.25}), s);

    auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["model"] == "beta");
    CHECK(j["gof"] == "chi2-pearson");
    CHECK(j["latent"] == true);
    CHECK(j["p_value"].get<double>() == r.p_value);
    CHECK(j["seed"] == 1234);
    CHECK(j["num_graphs"] == 50);
    REQUIRE(j["fibers"].size() == 2);
    for (int lab : j["fibers"][0]["z"].get<std::vector<int>>()) CHECK(lab >= 1);
    CHECK(j["fibers"][0]["gof_samples"].size() == 50);
    CHECK(j["fibers"][1]["mle_exists"] == false);
    CHECK(j["fibers"][1]["observed_gof"].is_null());
    CHECK(j["fibers"][1]["gof_samples"].empty());

    auto csv = report_to_csv(r);
    CHECK(csv.rfind("fiber,weight,sample_index,gof\n", 0) == 0);
    long rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    CHECK(rows == 50); // only the existing fiber contributes samples
    CHECK(csv.find("0,0.75,0,") != std::string::npos);
}

TEST_CASE("invalid inputs are rejected") {
    TestSettings s;
    s.num_graphs = 0;
    CHECK_THROWS_AS(test_known(interior6_graph(), interior6_blocks(), Model::ErSbm, s),
                    DataError);

    s.num_graphs = 10;
    AssignmentDistribution empty;
    CHECK_THROWS_AS(test_latent(interior6_graph(), Model::ErSbm, empty, s), DataError);

    // assignment node count must match the graph
    CHECK_THROWS_AS(test_known(interior6_graph(), BlockAssignment(2, {0, 1}), Model::ErSbm, s),
                    DataError);
}

} // TEST_SUITE
