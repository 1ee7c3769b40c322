#pragma once

#include "gu/graph.hpp"
#include "gu/model.hpp"

#include <cstdint>

namespace gu {

/// Layer-wise deletion operator on top of a frozen backbone. The
/// operator is a single linear map per layer applied to the affected
/// L-hop node set only; deleted edges are removed from propagation.
/// Nodes outside the affected set keep their base embeddings exactly.
struct DeletionModel {
    ModelParams base;                      // frozen, bit-identical to the input
    std::vector<Eigen::MatrixXd> deletion; // per layer, output-dim square
    std::vector<NodeId> affected;          // sorted ids on the original graph
    UnlearnRequest request;                // defines the unlinked propagation view
};

struct GnnDeleteOptions {
    int epochs = 50;
    double alpha = 0.5; // tradeoff: alpha*DEC + (1-alpha)*NI
    double lr = 0.05;
};

/// Trains the deletion operators to make deleted pairs score like seeded
/// random pairs (Deleted Edge Consistency) while keeping affected
/// retained embeddings near their pre-deletion values (Neighborhood
/// Influence).
DeletionModel gnndelete_unlearn(const ModelParams& base, const Graph& g, const DataSplit& split,
                                const UnlearnRequest& request, const GnnDeleteOptions& opts,
                                std::uint64_t seed);

/// Patched forward on the unlinked graph.
EmbeddingTable forward_deleted(const DeletionModel& model, const Graph& g);

Eigen::MatrixXd predict_proba_deleted(const DeletionModel& model, const Graph& g);

Eigen::VectorXd score_edges_deleted(const DeletionModel& model, const Graph& g,
                                    const std::vector<Edge>& pairs);

} // namespace gu
