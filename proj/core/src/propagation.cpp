#include "gu/propagation.hpp"

#include "gu/error.hpp"

#include <cmath>

namespace gu {

PropagationOperator normalized_adjacency(const Graph& g) {
    std::vector<std::int64_t> deg = g.degrees();
    Eigen::VectorXd inv_sqrt(g.node_count);
    for (std::int64_t v = 0; v < g.node_count; ++v)
        inv_sqrt(v) = 1.0 / std::sqrt(static_cast<double>(deg[static_cast<std::size_t>(v)] + 1));

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(g.edges.size() * 2 + static_cast<std::size_t>(g.node_count));
    for (NodeId v = 0; v < g.node_count; ++v)
        triplets.emplace_back(v, v, inv_sqrt(v) * inv_sqrt(v));
    for (const Edge& e : g.edges) {
        double w = inv_sqrt(e.u) * inv_sqrt(e.v);
        triplets.emplace_back(e.u, e.v, w);
        triplets.emplace_back(e.v, e.u, w);
    }

    PropagationOperator op;
    op.matrix.resize(g.node_count, g.node_count);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    return op;
}

PropagationOperator mean_aggregation(const Graph& g) {
    std::vector<std::int64_t> deg = g.degrees();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(g.edges.size() * 2);
    for (const Edge& e : g.edges) {
        triplets.emplace_back(e.u, e.v, 1.0 / static_cast<double>(deg[static_cast<std::size_t>(e.u)]));
        triplets.emplace_back(e.v, e.u, 1.0 / static_cast<double>(deg[static_cast<std::size_t>(e.v)]));
    }

    PropagationOperator op;
    op.matrix.resize(g.node_count, g.node_count);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    return op;
}

Eigen::MatrixXd propagate(const Eigen::MatrixXd& features, const PropagationOperator& op,
                          int hops) {
    require(hops >= 0, ErrorCode::OutOfRange, "hop count must be >= 0");
    require(features.rows() == op.size(), ErrorCode::ShapeMismatch,
            "feature rows " + std::to_string(features.rows()) + " != operator size " +
                std::to_string(op.size()));
    Eigen::MatrixXd out = features;
    for (int hop = 0; hop < hops; ++hop) out = op.matrix * out;
    return out;
}

} // namespace gu
