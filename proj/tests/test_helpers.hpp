#pragma once

#include "gu/graph.hpp"

#include <vector>

namespace gu::testing {

// path 0-1-2-...-(n-1) with identity-ish features
inline Graph path_graph(std::int64_t n, std::int64_t f = 0) {
    if (f == 0) f = n;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, f);
    for (std::int64_t i = 0; i < n; ++i) x(i, i % f) = 1.0;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::int64_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    Eigen::VectorXi labels(n);
    for (std::int64_t i = 0; i < n; ++i) labels(i) = static_cast<int>(i % 2);
    return build_graph(x, labels, edges).graph;
}

inline Graph triangle_graph() {
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXi labels(3);
    labels << 0, 1, 0;
    return build_graph(x, labels, {{0, 1}, {1, 2}, {0, 2}}).graph;
}

inline DataSplit all_train(const Graph& g) {
    DataSplit split;
    split.mode = SplitMode::Transductive;
    for (NodeId v = 0; v < g.node_count; ++v) split.train_ids.push_back(v);
    return split;
}

} // namespace gu::testing
