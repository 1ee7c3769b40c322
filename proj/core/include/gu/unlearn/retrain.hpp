#pragma once

#include "gu/graph.hpp"
#include "gu/train.hpp"

namespace gu {

/// Ground-truth unlearned model: train from scratch on the residual
/// graph with the split remapped past any removed nodes.
struct RetrainResult {
    ModelParams params;
    ApplyResult residual;    // residual graph + old->new id map
    DataSplit residual_split;
};

RetrainResult retrain_oracle(const TrainConfig& cfg, const Graph& g, const DataSplit& split,
                             const UnlearnRequest& request, std::uint64_t seed);

} // namespace gu
