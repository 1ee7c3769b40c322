#include "gu/synth.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

namespace gu {

Graph synth_sbm(std::int64_t n, int num_classes, double p_in, double p_out, std::int64_t f,
                double signal, std::uint64_t seed) {
    require(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0, ErrorCode::InvalidProbability,
            "edge probabilities must lie in [0,1]");
    require(p_out <= p_in, ErrorCode::InvalidProbability, "p_out must not exceed p_in");
    require(num_classes >= 1 && n >= 1, ErrorCode::OutOfRange, "need n >= 1 and classes >= 1");
    require(f >= num_classes, ErrorCode::ShapeMismatch, "feature dim must be >= class count");

    Eigen::VectorXi labels(n);
    for (std::int64_t i = 0; i < n; ++i) labels(i) = static_cast<int>(i % num_classes);

    Rng edge_rng(derive_seed(seed, "sbm_edges"));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::int64_t u = 0; u < n; ++u) {
        for (std::int64_t v = u + 1; v < n; ++v) {
            double p = labels(u) == labels(v) ? p_in : p_out;
            if (edge_rng.uniform() < p) edges.emplace_back(u, v);
        }
    }

    Rng feat_rng(derive_seed(seed, "sbm_features"));
    Eigen::MatrixXd X(n, f);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < f; ++j) X(i, j) = feat_rng.normal();
    for (std::int64_t i = 0; i < n; ++i) X(i, labels(i)) += signal;

    return build_graph(X, labels, edges).graph;
}

GraphSet synth_graph_set(const SbmSetParams& params, std::uint64_t seed) {
    require(params.graph_classes >= 1 && params.graphs_per_class >= 1, ErrorCode::OutOfRange,
            "need at least one graph per class");
    require(params.nodes_min >= 2 && params.nodes_max >= params.nodes_min, ErrorCode::OutOfRange,
            "invalid node count range");

    GraphSet gs;
    gs.num_classes = params.graph_classes;
    std::int64_t total = params.graphs_per_class * params.graph_classes;
    gs.graph_labels.resize(total);

    std::int64_t idx = 0;
    for (int c = 0; c < params.graph_classes; ++c) {
        double p_in = params.p_in_base + c * params.p_in_step;
        require(p_in <= 1.0, ErrorCode::InvalidProbability, "p_in_base + c*p_in_step exceeds 1");
        for (std::int64_t j = 0; j < params.graphs_per_class; ++j, ++idx) {
            std::uint64_t gseed = derive_seed(seed, static_cast<std::uint64_t>(idx));
            std::int64_t span = params.nodes_max - params.nodes_min + 1;
            Rng size_rng(derive_seed(gseed, "size"));
            std::int64_t n = params.nodes_min + static_cast<std::int64_t>(size_rng.uniform_int(
                                                    static_cast<std::uint64_t>(span)));
            Graph g = synth_sbm(n, params.node_classes, p_in, params.p_out, params.f,
                                params.signal * (1.0 + c), gseed);
            g.graph_id = "g" + std::to_string(idx);
            gs.graphs.push_back(std::move(g));
            gs.graph_labels(idx) = c;
        }
    }
    return gs;
}

} // namespace gu
