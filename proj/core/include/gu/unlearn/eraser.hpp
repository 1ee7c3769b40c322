#pragma once

#include "gu/graph.hpp"
#include "gu/train.hpp"

#include <string>
#include <vector>

namespace gu {

/// SISA-style partition of the train nodes: balanced embedding k-means
/// over propagated features, one model per shard trained on the
/// shard-induced subgraph. Unlearning retrains only the touched shards.
struct ShardPlan {
    int k = 0;
    std::vector<NodeId> train_nodes;         // sorted original ids
    std::vector<int> assignment;             // parallel to train_nodes
    std::vector<std::vector<NodeId>> shards; // shard -> sorted original ids
    std::vector<ModelParams> models;
    std::vector<bool> active; // false once a shard's nodes are all erased
    TrainConfig config;
    std::uint64_t seed = 0;

    int shard_of(NodeId v) const; // -1 when v is not a train node
};

/// Clusters A_hat^2 X of the train nodes with seeded k-means++; capacity
/// ceil(n_train/k) is enforced by moving overflow points to the nearest
/// non-full centroid. Trains all k shard models.
ShardPlan partition(const TrainConfig& cfg, const Graph& g, const DataSplit& split, int k,
                    std::uint64_t seed);

/// Retrains exactly the shards touched by the request on their pruned
/// induced subgraphs; untouched shard models are returned bit-identical.
ShardPlan eraser_unlearn(const ShardPlan& plan, const Graph& g, const UnlearnRequest& request,
                         std::uint64_t seed);

/// Mean of per-shard softmax rows for the given nodes; rows sum to 1.
Eigen::MatrixXd aggregate_predict(const ShardPlan& plan, const Graph& g,
                                  const std::vector<NodeId>& ids);

/// Mean of per-shard sigmoid link scores (link-task plans).
Eigen::VectorXd aggregate_score_edges(const ShardPlan& plan, const Graph& g,
                                      const std::vector<Edge>& pairs);

std::string shard_plan_to_json(const ShardPlan& plan);
ShardPlan shard_plan_from_json(const std::string& text);

/// Graph-classification counterpart: shards are sets of training
/// graphs, clustered on mean-pooled propagated features.
struct GraphShardPlan {
    int k = 0;
    std::vector<NodeId> train_graphs;
    std::vector<int> assignment;
    std::vector<std::vector<NodeId>> shards;
    std::vector<ModelParams> models;
    TrainConfig config;
    std::uint64_t seed = 0;
};

GraphShardPlan partition_graphs(const TrainConfig& cfg, const GraphSet& gs, const DataSplit& split,
                                int k, std::uint64_t seed);

/// Feature-level unlearning on a graph set: `masks` pairs a graph index
/// with the feature request to apply inside it.
GraphShardPlan eraser_unlearn_graphs(const GraphShardPlan& plan, const GraphSet& gs,
                                     const std::vector<std::pair<NodeId, UnlearnRequest>>& masks,
                                     std::uint64_t seed);

Eigen::MatrixXd aggregate_predict_graphs(const GraphShardPlan& plan, const GraphSet& gs,
                                         const std::vector<NodeId>& graph_ids);

} // namespace gu
