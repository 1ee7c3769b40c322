#include "gu/train.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

namespace gu {

std::int64_t output_dim_for(Task task, const Graph& g, const BackboneSpec& spec) {
    switch (task) {
        case Task::Node:
            require(g.labels.has_value(), ErrorCode::MissingLabels,
                    "node classification needs labels");
            return g.num_classes;
        case Task::Link:
            return spec.hidden;
        case Task::Graph:
            break;
    }
    fail(ErrorCode::UnsupportedCombination, "graph task trains over a GraphSet");
}

ModelParams train(const TrainConfig& cfg, const Graph& g, const DataSplit& split,
                  std::uint64_t seed) {
    std::int64_t out_dim = output_dim_for(cfg.task, g, cfg.backbone);
    ModelParams params = init_params(cfg.backbone, g.feature_dim(), out_dim, seed);
    if (cfg.hyper.epochs == 0) return params;

    Objective obj(g, split, cfg.task, cfg.backbone.backbone, cfg.backbone.layers,
                  cfg.hyper.weight_decay, seed);
    Eigen::VectorXd theta = flatten_params(params);
    for (int epoch = 0; epoch < cfg.hyper.epochs; ++epoch) {
        unflatten_params(theta, params);
        theta -= cfg.hyper.lr * obj.grad(params);
    }
    unflatten_params(theta, params);
    return params;
}

ModelParams train_graphs(const TrainConfig& cfg, const GraphSet& gs, const DataSplit& split,
                         std::uint64_t seed) {
    require(cfg.task == Task::Graph, ErrorCode::UnsupportedCombination,
            "train_graphs is for the graph task");
    require(gs.size() > 0, ErrorCode::EmptySet, "empty graph set");
    std::int64_t f = gs.graphs.front().feature_dim();
    ModelParams params = init_params(cfg.backbone, f, gs.num_classes, seed);
    if (cfg.hyper.epochs == 0) return params;

    GraphObjective obj(gs, split.train_ids, cfg.backbone.backbone, cfg.backbone.layers,
                       cfg.hyper.weight_decay);
    Eigen::VectorXd theta = flatten_params(params);
    for (int epoch = 0; epoch < cfg.hyper.epochs; ++epoch) {
        unflatten_params(theta, params);
        theta -= cfg.hyper.lr * obj.grad(params);
    }
    unflatten_params(theta, params);
    return params;
}

Eigen::VectorXd grad(const ModelParams& params, const Graph& g, const DataSplit& split, Task task,
                     double weight_decay, std::uint64_t seed) {
    Objective obj(g, split, task, params.backbone, params.hops, weight_decay, seed);
    return obj.grad(params);
}

Eigen::VectorXd hvp(const ModelParams& params, const Graph& g, const DataSplit& split, Task task,
                    double weight_decay, std::uint64_t seed, const Eigen::VectorXd& direction) {
    Objective obj(g, split, task, params.backbone, params.hops, weight_decay, seed);
    return obj.hvp(params, direction);
}

} // namespace gu
