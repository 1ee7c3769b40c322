#pragma once

#include "gu/graph.hpp"

namespace gu {

/// Structure-based unlearning: unlink the requested edges and keep the
/// model untouched. Inference thereafter runs on the returned graph.
Graph utu_unlearn(const Graph& g, const std::vector<Edge>& edges);

/// Generalization used by the harness cross-over matrix: node requests
/// unlink all incident edges (the node stays, isolated), feature
/// requests zero the masked entries. The model is never touched.
Graph utu_apply(const Graph& g, const UnlearnRequest& request);

} // namespace gu
