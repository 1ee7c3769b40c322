#include <benchmark/benchmark.h>

#include "gu/propagation.hpp"
#include "gu/synth.hpp"
#include "gu/train.hpp"

namespace {

gu::Graph make_graph(std::int64_t n) {
    // keep expected degree roughly constant while n grows
    double p_in = 12.0 / static_cast<double>(n);
    return gu::synth_sbm(n, 3, std::min(1.0, p_in), p_in / 10.0, 16, 2.0, 7);
}

void PropagateTwoHops(benchmark::State& state) {
    gu::Graph g = make_graph(state.range(0));
    gu::PropagationOperator op = gu::normalized_adjacency(g);
    for (auto _ : state) {
        Eigen::MatrixXd out = gu::propagate(g.features, op, 2);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(PropagateTwoHops)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BuildNormalizedAdjacency(benchmark::State& state) {
    gu::Graph g = make_graph(state.range(0));
    for (auto _ : state) {
        gu::PropagationOperator op = gu::normalized_adjacency(g);
        benchmark::DoNotOptimize(op.matrix.valuePtr());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildNormalizedAdjacency)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void TrainSgcNode(benchmark::State& state) {
    gu::Graph g = make_graph(state.range(0));
    gu::DataSplit split = gu::split_dataset(g, 0.8, gu::SplitMode::Transductive, 7);
    gu::TrainConfig cfg{gu::BackboneSpec{gu::Backbone::SGC, 2, 16}, gu::Hyper{0.3, 50, 1e-4},
                        gu::Task::Node};
    for (auto _ : state) {
        gu::ModelParams params = gu::train(cfg, g, split, 7);
        benchmark::DoNotOptimize(params.weights[0].data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(TrainSgcNode)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

} // namespace

BENCHMARK_MAIN();
