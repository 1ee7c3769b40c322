#include "gu/unlearn/projector.hpp"

#include "gu/error.hpp"
#include "gu/propagation.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace gu {

ModelParams projector_unlearn(const ModelParams& params, const Graph& g, const DataSplit& split,
                              const UnlearnRequest& request) {
    require(params.backbone == Backbone::SGC, ErrorCode::WrongBackbone,
            "projector requires an SGC backbone (single weight matrix)");
    require(request.kind == RequestKind::Node, ErrorCode::KindMismatch,
            "projector handles node-level requests");
    validate_request(g, request);

    std::vector<NodeId> retained;
    retained.reserve(split.train_ids.size());
    for (NodeId v : split.train_ids)
        if (!std::binary_search(request.delta_v.begin(), request.delta_v.end(), v))
            retained.push_back(v);

    PropagationOperator adj = normalized_adjacency(g);
    Eigen::MatrixXd propagated = propagate(g.features, adj, params.hops);
    Eigen::MatrixXd retained_rows(static_cast<std::int64_t>(retained.size()), g.feature_dim());
    for (std::size_t i = 0; i < retained.size(); ++i)
        retained_rows.row(static_cast<std::int64_t>(i)) = propagated.row(retained[i]);

    ModelParams out = params;
    if (retained.empty()) {
        out.weights[0].setZero();
        return out;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(retained_rows, Eigen::ComputeThinV);
    double cutoff = 1e-10 * svd.singularValues()(0);
    std::int64_t rank = 0;
    for (std::int64_t i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cutoff) ++rank;

    Eigen::MatrixXd basis = svd.matrixV().leftCols(rank); // f x rank, orthonormal
    out.weights[0] = basis * (basis.transpose() * params.weights[0]);
    return out;
}

} // namespace gu
