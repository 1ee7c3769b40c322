// Empirical unlearning-cost comparison across methods: the shard-retrain
// route should beat full retraining by roughly k for small requests,
// the influence update should track the CG solve, and unlinking should
// be near-free.

#include <benchmark/benchmark.h>

#include "gu/synth.hpp"
#include "gu/unlearn/eraser.hpp"
#include "gu/unlearn/influence.hpp"
#include "gu/unlearn/retrain.hpp"
#include "gu/unlearn/utu.hpp"

namespace {

struct Fixture {
    gu::Graph graph;
    gu::DataSplit split;
    gu::TrainConfig cfg;
    gu::ModelParams base;
    gu::UnlearnRequest request;
};

Fixture make_fixture(std::int64_t n) {
    Fixture f{gu::synth_sbm(n, 3, std::min(1.0, 12.0 / static_cast<double>(n)),
                            1.2 / static_cast<double>(n), 16, 2.0, 11),
              {},
              gu::TrainConfig{gu::BackboneSpec{gu::Backbone::SGC, 2, 16}, gu::Hyper{0.3, 100, 1e-4},
                              gu::Task::Node},
              {},
              {}};
    f.split = gu::split_dataset(f.graph, 0.8, gu::SplitMode::Transductive, 11);
    f.base = gu::train(f.cfg, f.graph, f.split, 11);
    std::vector<gu::NodeId> victims(f.split.train_ids.begin(), f.split.train_ids.begin() + 5);
    f.request = gu::make_request(gu::RequestKind::Node,
                                 {.nodes = victims, .edges = {}, .features = {}});
    return f;
}

void RetrainOracle(benchmark::State& state) {
    Fixture f = make_fixture(state.range(0));
    for (auto _ : state) {
        gu::RetrainResult res = gu::retrain_oracle(f.cfg, f.graph, f.split, f.request, 11);
        benchmark::DoNotOptimize(res.params.weights[0].data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(RetrainOracle)->RangeMultiplier(2)->Range(256, 1024)->Complexity();

void EraserUnlearn(benchmark::State& state) {
    Fixture f = make_fixture(state.range(0));
    gu::ShardPlan plan = gu::partition(f.cfg, f.graph, f.split, 8, 11);
    for (auto _ : state) {
        gu::ShardPlan updated = gu::eraser_unlearn(plan, f.graph, f.request, plan.seed);
        benchmark::DoNotOptimize(updated.models[0].weights[0].data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(EraserUnlearn)->RangeMultiplier(2)->Range(256, 1024)->Complexity();

void GifUnlearn(benchmark::State& state) {
    Fixture f = make_fixture(state.range(0));
    for (auto _ : state) {
        gu::ModelParams updated =
            gu::gif_unlearn(f.base, f.graph, f.split, f.request, {gu::Task::Node, 1e-4, 11});
        benchmark::DoNotOptimize(updated.weights[0].data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(GifUnlearn)->RangeMultiplier(2)->Range(256, 1024)->Complexity();

void UtuUnlearn(benchmark::State& state) {
    Fixture f = make_fixture(state.range(0));
    for (auto _ : state) {
        gu::Graph unlinked = gu::utu_apply(f.graph, f.request);
        benchmark::DoNotOptimize(unlinked.edges.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(UtuUnlearn)->RangeMultiplier(2)->Range(256, 1024)->Complexity();

} // namespace
