#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gossipnet/engine.hpp"
#include "gossipnet/model.hpp"
#include "test_helpers.hpp"

using namespace gossipnet;

namespace {

bool points_equal(const SweepPointResult& a, const SweepPointResult& b) {
    const auto same = [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    return same(a.param, b.param) && same(a.target_m, b.target_m) &&
           same(a.empirical_m, b.empirical_m) && same(a.reliability, b.reliability) &&
           same(a.latency_mean, b.latency_mean) && same(a.latency_p95, b.latency_p95) &&
           a.n_atomic == b.n_atomic && a.failure_component_sizes == b.failure_component_sizes &&
           a.n_failed_runs == b.n_failed_runs && a.error == b.error;
}

}  // namespace

TEST_CASE("message complexity on forced disseminations") {
    SUBCASE("flooding a complete graph of four sites") {
        const Graph g = test::complete_graph(4);
        const auto r = disseminate(build_dissemination_graph(g, Policy::flooding(), 0, 1));
        CHECK(r.messages_sent == 12);
        CHECK(message_complexity(r, 4) == doctest::Approx(4.0));
    }
    SUBCASE("star center source with silent leaves") {
        const Graph g = test::star_graph(4);
        const auto r = disseminate(build_dissemination_graph(g, Policy::edge_probability(0.0), 0, 1));
        CHECK(r.messages_sent == 3);
        CHECK(message_complexity(r, 4) == doctest::Approx(1.0));
    }
    SUBCASE("fewer than two sites is an error") {
        DisseminationResult r;
        CHECK_THROWS_AS(message_complexity(r, 1), std::invalid_argument);
    }
}

TEST_CASE("latency over infected sites") {
    SUBCASE("single site") {
        DisseminationGraph dg;
        dg.source = 0;
        dg.out_arcs = {{}};
        CHECK(latency(disseminate(dg)) == 0);
    }
    SUBCASE("flooded path of four from one end") {
        const Graph g = test::path_graph(4);
        CHECK(latency(disseminate(build_dissemination_graph(g, Policy::flooding(), 0, 1))) == 3);
    }
    SUBCASE("non-atomic runs report the infected maximum") {
        const Graph g = test::path_graph(4);
        const auto r = disseminate(build_dissemination_graph(g, Policy::edge_probability(0.0), 0, 1));
        CHECK_FALSE(r.atomic);
        CHECK(latency(r) == 1);
    }
}

TEST_CASE("flooding experiments are perfectly reliable") {
    ExperimentConfig cfg;
    cfg.topology = TopologySpec::geometric(80, 100.0, 100.0, 30.0);
    cfg.policy = PolicyKind::Flooding;
    cfg.sweep = {0.0};
    cfg.sweep_is_target_m = false;
    cfg.n_graphs = 4;
    cfg.n_sources_per_graph = 10;
    cfg.master_seed = 9;
    const auto result = run_experiment(cfg);
    REQUIRE(result.points.size() == 1);
    CHECK(result.points[0].reliability == 1.0);
    CHECK(result.points[0].n_runs == 40);
    CHECK(result.points[0].failure_component_sizes.empty());
}

TEST_CASE("experiments are reproducible and thread-count independent") {
    ExperimentConfig cfg;
    cfg.topology = TopologySpec::bernoulli(120, 0.12);
    cfg.policy = PolicyKind::EdgeProbability;
    cfg.sweep = {0.3, 0.6};
    cfg.sweep_is_target_m = false;
    cfg.n_graphs = 3;
    cfg.n_sources_per_graph = 15;
    cfg.master_seed = 77;
    cfg.n_threads = 1;
    const auto serial = run_experiment(cfg);
    cfg.n_threads = 2;
    const auto threaded = run_experiment(cfg);
    cfg.n_threads = 1;
    const auto again = run_experiment(cfg);
    REQUIRE(serial.points.size() == 2);
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(points_equal(serial.points[i], threaded.points[i]));
        CHECK(points_equal(serial.points[i], again.points[i]));
    }
}

TEST_CASE("edge-probability reliability is monotone in the parameter") {
    ExperimentConfig cfg;
    cfg.topology = TopologySpec::bernoulli(120, 0.12);
    cfg.policy = PolicyKind::EdgeProbability;
    cfg.sweep = {0.2, 0.35, 0.5, 0.65, 0.8};
    cfg.sweep_is_target_m = false;
    cfg.n_graphs = 5;
    cfg.n_sources_per_graph = 20;
    cfg.master_seed = 4242;
    const auto result = run_experiment(cfg);
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        const auto& prev = result.points[i - 1];
        const auto& cur = result.points[i];
        const double slack = 2.0 * std::hypot(prev.reliability_stderr, cur.reliability_stderr);
        CHECK(cur.reliability >= prev.reliability - slack);
    }
}

TEST_CASE("calibration failures are per-point, not fatal") {
    ExperimentConfig cfg;
    cfg.topology = TopologySpec::bernoulli(120, 0.12);
    cfg.policy = PolicyKind::EdgeProbability;
    cfg.sweep = {5.0, 99.0};  // the second target exceeds the mean degree
    cfg.n_graphs = 2;
    cfg.n_sources_per_graph = 5;
    cfg.master_seed = 1;
    const auto result = run_experiment(cfg);
    REQUIRE(result.points.size() == 2);
    CHECK(result.points[0].error.empty());
    CHECK_FALSE(result.points[1].error.empty());
    CHECK(to_csv_rows(result).size() == 1);
}

TEST_CASE("source message accounting flag") {
    ExperimentConfig cfg;
    cfg.topology = TopologySpec::bernoulli(4, 1.0);  // complete graph
    cfg.policy = PolicyKind::Flooding;
    cfg.sweep = {0.0};
    cfg.sweep_is_target_m = false;
    cfg.n_graphs = 1;
    cfg.n_sources_per_graph = 2;
    cfg.master_seed = 5;
    const auto with_source = run_experiment(cfg);
    cfg.count_source_messages = false;
    const auto without_source = run_experiment(cfg);
    CHECK(with_source.points[0].empirical_m == doctest::Approx(4.0));
    CHECK(without_source.points[0].empirical_m == doctest::Approx(3.0));
}

TEST_CASE("reliability oracle: forced cases") {
    SUBCASE("certain edges reach everything") {
        const auto res = exact_reliability_oracle(test::complete_graph(5), Policy::edge_probability(1.0), 0);
        CHECK(res.exact);
        CHECK(res.reliability == doctest::Approx(1.0));
    }
    SUBCASE("two sites need only the source broadcast") {
        const auto res = exact_reliability_oracle(test::path_graph(2), Policy::edge_probability(0.0), 0);
        CHECK(res.reliability == doctest::Approx(1.0));
    }
}

TEST_CASE("reliability oracle matches hand-computed polynomials") {
    // Path s-a-b: only the arc a->b matters, so R = p.
    for (const double p : {0.3, 0.7}) {
        const auto res = exact_reliability_oracle(test::path_graph(3), Policy::edge_probability(p), 0);
        CHECK(res.exact);
        CHECK(res.reliability == doctest::Approx(p).epsilon(1e-12));
    }
    // Cycle s-a-b-c: b is infected iff a->b or c->b, so R = 1-(1-q)^2
    // with q the arc probability (p for pe, min(c/2,1) for pine).
    const Graph cycle = test::cycle_graph(4);
    for (const double p : {0.3, 0.7}) {
        const auto res = exact_reliability_oracle(cycle, Policy::edge_probability(p), 0);
        CHECK(res.reliability == doctest::Approx(1.0 - (1.0 - p) * (1.0 - p)).epsilon(1e-12));
    }
    const auto pine = exact_reliability_oracle(cycle, Policy::neighbor_degree_edge(1.0), 0);
    CHECK(pine.reliability == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("oracle on a triangle: the source broadcast already reaches everyone") {
    const Graph triangle = test::cycle_graph(3);
    for (const double p : {0.0, 0.3, 0.7})
        CHECK(exact_reliability_oracle(triangle, Policy::edge_probability(p), 0).reliability == 1.0);
}

TEST_CASE("isolation estimate vs exact reachability on tiny instances") {
    // The product estimate knows degrees only: no source exemption, no
    // reachability beyond isolation. On 5-6 site graphs that gap is
    // material; this records it rather than asserting equality.
    for (const std::uint64_t seed : {3ULL, 8ULL, 21ULL}) {
        const Graph g = generate(TopologySpec::bernoulli(6, 0.6), seed);
        const auto dist = empirical_degree_distribution(g);
        for (const double p : {0.4, 0.7}) {
            const double estimate =
                predict_reliability(dist, profile_pe(p, g.n_sites()));
            const double exact =
                exact_reliability_oracle(g, Policy::edge_probability(p), 0).reliability;
            INFO("seed ", seed, " p ", p, ": estimate ", estimate, " exact ", exact,
                 " residual ", estimate - exact);
            CHECK(estimate >= 0.0);
            CHECK(estimate <= 1.0);
            CHECK(std::abs(estimate - exact) < 0.5);
        }
        const double c = 2.0;
        const double estimate = predict_reliability(dist, profile_pine(c, g.n_sites()));
        const double exact =
            exact_reliability_oracle(g, Policy::neighbor_degree_edge(c), 0).reliability;
        CHECK(std::abs(estimate - exact) < 0.5);
    }
}

TEST_CASE("oracle agrees with simulated reliability on a small graph") {
    const Graph cycle = test::cycle_graph(5);
    const Policy policy = Policy::edge_probability(0.4);
    const auto oracle = exact_reliability_oracle(cycle, policy, 0);
    const int runs = 100000;
    int atomic = 0;
    for (int run = 0; run < runs; ++run)
        atomic += disseminate(build_dissemination_graph(cycle, policy, 0,
                                                        static_cast<std::uint64_t>(run)))
                      .atomic
                      ? 1
                      : 0;
    const double mc = static_cast<double>(atomic) / runs;
    const double se = std::sqrt(oracle.reliability * (1.0 - oracle.reliability) / runs);
    CHECK(std::abs(mc - oracle.reliability) < 3.0 * se);
}

TEST_CASE("oracle size limits and fallbacks") {
    const Graph k6 = test::complete_graph(6);  // 25 uncertain arcs from a source
    CHECK_THROWS_AS(static_cast<void>(exact_reliability_oracle(k6, Policy::edge_probability(0.5), 0)),
                    std::length_error);
    CHECK_THROWS_AS(
        static_cast<void>(exact_reliability_oracle(k6, Policy::self_degree_broadcast(3.0), 0)),
        std::invalid_argument);
    // A 14-cycle has 26 uncertain arcs and sites the broadcast cannot
    // reach directly, so the fallback estimate is genuinely stochastic.
    const Graph ring = test::cycle_graph(14);
    OracleOptions opts;
    opts.allow_monte_carlo = true;
    opts.mc_runs = 20000;
    const auto mc = exact_reliability_oracle(ring, Policy::edge_probability(0.5), 0, opts);
    CHECK_FALSE(mc.exact);
    CHECK(mc.std_error > 0.0);
    CHECK(mc.reliability > 0.0);
    CHECK(mc.reliability < 1.0);
}

TEST_CASE("CSV output is stable and deterministic") {
    CHECK(csv_header() ==
          "source,topology,algorithm,param,target_M,empirical_M,R,R_stderr,L_mean,L_p95,n_runs,seed");
    ExperimentConfig cfg;
    cfg.topology = TopologySpec::bernoulli(60, 0.25);
    cfg.policy = PolicyKind::EdgeProbability;
    cfg.sweep = {0.0, 0.5};
    cfg.sweep_is_target_m = false;
    cfg.n_graphs = 2;
    cfg.n_sources_per_graph = 5;
    cfg.master_seed = 3;
    const auto rows_a = to_csv_rows(run_experiment(cfg));
    const auto rows_b = to_csv_rows(run_experiment(cfg));
    REQUIRE(rows_a.size() == rows_b.size());
    for (std::size_t i = 0; i < rows_a.size(); ++i)
        CHECK(to_csv_line(rows_a[i]) == to_csv_line(rows_b[i]));
    // p = 0 never reaches the whole graph: latency fields render as nan.
    const std::string zero_line = to_csv_line(rows_a[0]);
    CHECK(zero_line.find(",nan,nan,") != std::string::npos);
    CHECK(zero_line.rfind("sim,bernoulli,pe,0,", 0) == 0);
}
