#pragma once

#include "gu/graph.hpp"
#include "gu/model.hpp"

namespace gu {

/// Projection-based node unlearning for linear (SGC) models: the weight
/// matrix is projected onto the row space of the propagated features of
/// the retained train nodes, so no direction carried only by the
/// unlearned nodes survives in the parameters.
///
/// Rank is decided by singular values above 1e-10 * sigma_max.
ModelParams projector_unlearn(const ModelParams& params, const Graph& g, const DataSplit& split,
                              const UnlearnRequest& request);

} // namespace gu
