#pragma once

#include "gu/graph.hpp"

#include <Eigen/Sparse>

namespace gu {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Symmetrically normalized adjacency with self-loops,
/// A_hat = D~^{-1/2} (A + I) D~^{-1/2}, in compressed row form.
struct PropagationOperator {
    SparseRowMatrix matrix;

    std::int64_t size() const { return matrix.rows(); }
};

PropagationOperator normalized_adjacency(const Graph& g);

/// Row-stochastic neighbor averaging without self-loops; isolated nodes
/// get an all-zero row (their aggregated message is the zero vector).
PropagationOperator mean_aggregation(const Graph& g);

/// A_hat^L X via L sparse-dense products. L = 0 returns X unchanged.
Eigen::MatrixXd propagate(const Eigen::MatrixXd& features, const PropagationOperator& op,
                          int hops);

} // namespace gu
