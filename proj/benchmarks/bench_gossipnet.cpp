#include <benchmark/benchmark.h>

#include "gossipnet/engine.hpp"
#include "gossipnet/model.hpp"

using namespace gossipnet;

namespace {

const TopologySpec kBernoulli = TopologySpec::bernoulli(1000, 0.014);
const TopologySpec kGeometric = TopologySpec::geometric(1000, 7500.0, 3000.0, 330.0);
const TopologySpec kScaleFree = TopologySpec::scale_free(1000, 7, 9);

void BM_GenerateBernoulli(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate(kBernoulli, seed++));
}
BENCHMARK(BM_GenerateBernoulli);

void BM_GenerateGeometric(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate(kGeometric, seed++));
}
BENCHMARK(BM_GenerateGeometric);

void BM_GenerateScaleFree(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate(kScaleFree, seed++));
}
BENCHMARK(BM_GenerateScaleFree);

void BM_BuildDisseminationGraph(benchmark::State& state) {
    const Graph g = generate(kBernoulli, 1);
    const Policy policy = Policy::neighbor_degree_edge(static_cast<double>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_dissemination_graph(g, policy, 0, seed++));
}
BENCHMARK(BM_BuildDisseminationGraph)->Arg(3)->Arg(9);

void BM_Disseminate(benchmark::State& state) {
    const Graph g = generate(kBernoulli, 1);
    const auto dg = build_dissemination_graph(g, Policy::edge_probability(0.7), 0, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(disseminate(dg));
}
BENCHMARK(BM_Disseminate);

void BM_AnalyticDegreeDistributionGeometric(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(analytic_degree_distribution(kGeometric));
}
BENCHMARK(BM_AnalyticDegreeDistributionGeometric);

void BM_ModelCurveScaleFree(benchmark::State& state) {
    const std::vector<double> grid{2.0, 4.0, 6.0, 8.0, 10.0, 12.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(model_curve(kScaleFree, PolicyKind::FixedFanout, grid));
}
BENCHMARK(BM_ModelCurveScaleFree);

void BM_ExactOracle(benchmark::State& state) {
    Graph g(6);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(1, 3);
    g.add_edge(2, 4);
    g.add_edge(3, 5);
    g.add_edge(4, 5);
    g.add_edge(1, 2);
    g.add_edge(3, 4);
    g.sort_adjacency();
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_reliability_oracle(g, Policy::edge_probability(0.5), 0));
}
BENCHMARK(BM_ExactOracle);

}  // namespace

BENCHMARK_MAIN();
