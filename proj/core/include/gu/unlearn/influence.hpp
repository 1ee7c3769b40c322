#pragma once

#include "gu/graph.hpp"
#include "gu/objective.hpp"
#include "gu/train.hpp"

#include <functional>

namespace gu {

struct InfluenceOptions {
    double damping = 1e-2; // lambda added to the Hessian diagonal
    int cg_iters = 100;
    double cg_tol = 1e-8;
};

/// Task objective identification for influence updates; must match the
/// values the model was trained with so gradients and link negatives are
/// re-derived identically.
struct LossSpec {
    Task task = Task::Node;
    double weight_decay = 0.0;
    std::uint64_t seed = 0;
};

/// Solves (H + damping*I) x = b by conjugate gradient, `matvec` supplying
/// H*v. Throws CGDiverged when the residual stays above tol after
/// cg_iters or negative curvature appears; both signal a larger damping.
Eigen::VectorXd conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec,
                                   const Eigen::VectorXd& b, const InfluenceOptions& opts);

/// Requested entities plus their hops-neighborhood, in original node ids.
std::vector<NodeId> affected_set(const Graph& g, const UnlearnRequest& request, int hops);

/// Influence-function unlearning with structural locality: the gradient
/// change is evaluated on the affected L-hop set only (both views share
/// the original normalization), the Hessian on the full original
/// objective. One damped Newton step toward the pruned optimum.
ModelParams gif_unlearn(const ModelParams& params, const Graph& g, const DataSplit& split,
                        const UnlearnRequest& request, const LossSpec& loss,
                        const InfluenceOptions& opts = {});

/// Edge unlearning as a single Newton-style correction over the full
/// training loss; the Hessian is taken on the pruned view.
ModelParams ceu_unlearn(const ModelParams& params, const Graph& g, const DataSplit& split,
                        const std::vector<Edge>& edges, const LossSpec& loss,
                        const InfluenceOptions& opts = {});

/// Graph-classification variant of gif for feature-level requests; the
/// affected terms are the masked training graphs.
ModelParams gif_unlearn_graphs(const ModelParams& params, const GraphSet& gs,
                               const DataSplit& split,
                               const std::vector<std::pair<NodeId, UnlearnRequest>>& masks,
                               const LossSpec& loss, const InfluenceOptions& opts = {});

} // namespace gu
