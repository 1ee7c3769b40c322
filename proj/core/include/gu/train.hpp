#pragma once

#include "gu/graph.hpp"
#include "gu/model.hpp"
#include "gu/objective.hpp"

#include <cstdint>

namespace gu {

struct Hyper {
    double lr = 0.2;
    int epochs = 100;
    double weight_decay = 1e-4;
};

/// Everything needed to (re)train a model: architecture, optimizer
/// settings, and the downstream task the loss is built for.
struct TrainConfig {
    BackboneSpec backbone;
    Hyper hyper;
    Task task = Task::Node;
};

/// Full-batch gradient descent, deterministic per seed. Node tasks use
/// softmax cross-entropy over train nodes; link tasks score train edges
/// against an equal number of seeded negative pairs; weight decay enters
/// the gradient analytically.
ModelParams train(const TrainConfig& cfg, const Graph& g, const DataSplit& split,
                  std::uint64_t seed);

/// Graph classification over a GraphSet; split indexes graphs.
ModelParams train_graphs(const TrainConfig& cfg, const GraphSet& gs, const DataSplit& split,
                         std::uint64_t seed);

/// Gradient of the full training objective (task loss plus weight decay)
/// at `params`. `seed` must match the training seed so that link
/// negatives are re-derived identically.
Eigen::VectorXd grad(const ModelParams& params, const Graph& g, const DataSplit& split, Task task,
                     double weight_decay, std::uint64_t seed);

/// Exact Hessian-vector product of the same objective.
Eigen::VectorXd hvp(const ModelParams& params, const Graph& g, const DataSplit& split, Task task,
                    double weight_decay, std::uint64_t seed, const Eigen::VectorXd& direction);

std::int64_t output_dim_for(Task task, const Graph& g, const BackboneSpec& spec);

} // namespace gu
