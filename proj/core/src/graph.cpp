#include "gu/graph.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gu {

namespace {

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        return std::hash<std::int64_t>()((e.u << 32) ^ e.v);
    }
};

void check_node(const Graph& g, NodeId v, const char* what) {
    require(v >= 0 && v < g.node_count, ErrorCode::OutOfRange,
            std::string(what) + " id " + std::to_string(v) + " outside [0, " +
                std::to_string(g.node_count) + ")");
}

} // namespace

bool Graph::has_edge(NodeId a, NodeId b) const {
    Edge e(a, b);
    return std::binary_search(edges.begin(), edges.end(), e);
}

std::vector<std::int64_t> Graph::degrees() const {
    std::vector<std::int64_t> deg(static_cast<std::size_t>(node_count), 0);
    for (const Edge& e : edges) {
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    return deg;
}

bool DataSplit::is_train(NodeId v) const {
    return std::binary_search(train_ids.begin(), train_ids.end(), v);
}

std::string_view request_kind_name(RequestKind kind) {
    switch (kind) {
        case RequestKind::Node: return "node";
        case RequestKind::Edge: return "edge";
        case RequestKind::Feature: return "feature";
    }
    return "?";
}

std::int64_t UnlearnRequest::size() const {
    switch (kind) {
        case RequestKind::Node: return static_cast<std::int64_t>(delta_v.size());
        case RequestKind::Edge: return static_cast<std::int64_t>(delta_e.size());
        case RequestKind::Feature: return static_cast<std::int64_t>(delta_x.size());
    }
    return 0;
}

BuildResult build_graph(const Eigen::MatrixXd& features,
                        const std::optional<Eigen::VectorXi>& labels,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
    require(features.rows() > 0, ErrorCode::ShapeMismatch, "feature matrix is empty");
    require(features.allFinite(), ErrorCode::NonFinite, "feature matrix contains NaN or Inf");

    BuildResult out;
    Graph& g = out.graph;
    g.node_count = features.rows();
    g.features = features;

    if (labels) {
        require(labels->size() == g.node_count, ErrorCode::ShapeMismatch,
                "labels length " + std::to_string(labels->size()) + " != node count " +
                    std::to_string(g.node_count));
        int max_label = labels->size() ? labels->maxCoeff() : 0;
        require(labels->minCoeff() >= 0, ErrorCode::OutOfRange, "negative label");
        g.labels = *labels;
        g.num_classes = max_label + 1;
    }

    g.edges.reserve(edges.size());
    for (auto [a, b] : edges) {
        require(a >= 0 && a < g.node_count && b >= 0 && b < g.node_count, ErrorCode::OutOfRange,
                "edge (" + std::to_string(a) + "," + std::to_string(b) + ") endpoint outside [0, " +
                    std::to_string(g.node_count) + ")");
        if (a == b) {
            ++out.self_loops_dropped;
            continue;
        }
        g.edges.emplace_back(a, b);
    }
    std::sort(g.edges.begin(), g.edges.end());
    auto last = std::unique(g.edges.begin(), g.edges.end());
    out.duplicates_dropped = std::distance(last, g.edges.end());
    g.edges.erase(last, g.edges.end());
    return out;
}

DataSplit split_dataset(const Graph& g, double train_ratio, SplitMode mode, std::uint64_t seed) {
    require(train_ratio >= 0.0 && train_ratio <= 1.0, ErrorCode::InvalidRatio,
            "train_ratio " + std::to_string(train_ratio) + " outside [0,1]");
    std::size_t n = static_cast<std::size_t>(g.node_count);
    std::size_t n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n)));

    Rng rng(derive_seed(seed, "split"));
    std::vector<std::size_t> order = rng.sample_without_replacement(n, n);

    DataSplit split;
    split.mode = mode;
    split.train_ids.assign(order.begin(), order.begin() + n_train);
    split.test_ids.assign(order.begin() + n_train, order.end());
    std::sort(split.train_ids.begin(), split.train_ids.end());
    std::sort(split.test_ids.begin(), split.test_ids.end());
    return split;
}

DataSplit split_graph_set(const GraphSet& gs, double train_ratio, std::uint64_t seed) {
    require(train_ratio >= 0.0 && train_ratio <= 1.0, ErrorCode::InvalidRatio,
            "train_ratio outside [0,1]");
    std::size_t n = static_cast<std::size_t>(gs.size());
    std::size_t n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n)));

    Rng rng(derive_seed(seed, "graph_split"));
    std::vector<std::size_t> order = rng.sample_without_replacement(n, n);

    DataSplit split;
    split.mode = SplitMode::Inductive; // held-out graphs are never seen in training
    split.train_ids.assign(order.begin(), order.begin() + n_train);
    split.test_ids.assign(order.begin() + n_train, order.end());
    std::sort(split.train_ids.begin(), split.train_ids.end());
    std::sort(split.test_ids.begin(), split.test_ids.end());
    return split;
}

UnlearnRequest make_request(RequestKind kind, const RequestTargets& targets) {
    auto populated = [&](RequestKind k) {
        switch (k) {
            case RequestKind::Node: return !targets.nodes.empty();
            case RequestKind::Edge: return !targets.edges.empty();
            case RequestKind::Feature: return !targets.features.empty();
        }
        return false;
    };
    require(populated(kind), ErrorCode::EmptyRequest,
            std::string("no targets supplied for ") + std::string(request_kind_name(kind)) +
                "-level request");
    for (RequestKind other : {RequestKind::Node, RequestKind::Edge, RequestKind::Feature}) {
        if (other == kind) continue;
        require(!populated(other), ErrorCode::KindMismatch,
                std::string(request_kind_name(other)) + "-level targets supplied for a " +
                    std::string(request_kind_name(kind)) + "-level request");
    }

    UnlearnRequest r;
    r.kind = kind;
    switch (kind) {
        case RequestKind::Node:
            r.delta_v = targets.nodes;
            std::sort(r.delta_v.begin(), r.delta_v.end());
            r.delta_v.erase(std::unique(r.delta_v.begin(), r.delta_v.end()), r.delta_v.end());
            break;
        case RequestKind::Edge:
            r.delta_e = targets.edges;
            std::sort(r.delta_e.begin(), r.delta_e.end());
            r.delta_e.erase(std::unique(r.delta_e.begin(), r.delta_e.end()), r.delta_e.end());
            break;
        case RequestKind::Feature:
            r.delta_x = targets.features;
            std::sort(r.delta_x.begin(), r.delta_x.end(),
                      [](const FeatureMask& a, const FeatureMask& b) { return a.node < b.node; });
            break;
    }
    return r;
}

void validate_request(const Graph& g, const UnlearnRequest& r) {
    switch (r.kind) {
        case RequestKind::Node:
            for (NodeId v : r.delta_v) check_node(g, v, "node request target");
            break;
        case RequestKind::Edge:
            for (const Edge& e : r.delta_e) {
                check_node(g, e.u, "edge request endpoint");
                check_node(g, e.v, "edge request endpoint");
                require(g.has_edge(e.u, e.v), ErrorCode::MissingTarget,
                        "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") not present in graph");
            }
            break;
        case RequestKind::Feature:
            for (const FeatureMask& m : r.delta_x) {
                check_node(g, m.node, "feature request target");
                for (std::int64_t d : m.dims)
                    require(d >= 0 && d < g.feature_dim(), ErrorCode::OutOfRange,
                            "feature dimension " + std::to_string(d) + " outside [0, " +
                                std::to_string(g.feature_dim()) + ")");
            }
            break;
    }
}

ApplyResult apply_request(const Graph& g, const UnlearnRequest& r) {
    validate_request(g, r);
    switch (r.kind) {
        case RequestKind::Node: {
            std::vector<NodeId> keep;
            keep.reserve(static_cast<std::size_t>(g.node_count) - r.delta_v.size());
            std::size_t cursor = 0;
            for (NodeId v = 0; v < g.node_count; ++v) {
                if (cursor < r.delta_v.size() && r.delta_v[cursor] == v) {
                    ++cursor;
                    continue;
                }
                keep.push_back(v);
            }
            return induced_subgraph(g, keep);
        }
        case RequestKind::Edge: {
            ApplyResult out;
            out.graph = g;
            std::unordered_set<Edge, EdgeHash> drop(r.delta_e.begin(), r.delta_e.end());
            auto& edges = out.graph.edges;
            edges.erase(std::remove_if(edges.begin(), edges.end(),
                                       [&](const Edge& e) { return drop.count(e) > 0; }),
                        edges.end());
            out.id_map.resize(static_cast<std::size_t>(g.node_count));
            for (NodeId v = 0; v < g.node_count; ++v) out.id_map[static_cast<std::size_t>(v)] = v;
            return out;
        }
        case RequestKind::Feature: {
            ApplyResult out;
            out.graph = g;
            for (const FeatureMask& m : r.delta_x) {
                if (m.dims.empty()) {
                    out.graph.features.row(m.node).setZero();
                } else {
                    for (std::int64_t d : m.dims) out.graph.features(m.node, d) = 0.0;
                }
            }
            out.id_map.resize(static_cast<std::size_t>(g.node_count));
            for (NodeId v = 0; v < g.node_count; ++v) out.id_map[static_cast<std::size_t>(v)] = v;
            return out;
        }
    }
    fail(ErrorCode::KindMismatch, "unreachable request kind");
}

ApplyResult induced_subgraph(const Graph& g, const std::vector<NodeId>& nodes) {
    std::vector<NodeId> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (NodeId v : sorted) check_node(g, v, "subgraph node");

    ApplyResult out;
    out.id_map.assign(static_cast<std::size_t>(g.node_count), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out.id_map[static_cast<std::size_t>(sorted[i])] = static_cast<NodeId>(i);

    Graph& sub = out.graph;
    sub.node_count = static_cast<std::int64_t>(sorted.size());
    sub.features.resize(sub.node_count, g.feature_dim());
    if (g.labels) {
        sub.labels = Eigen::VectorXi(sub.node_count);
        sub.num_classes = g.num_classes;
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        sub.features.row(static_cast<std::int64_t>(i)) = g.features.row(sorted[i]);
        if (g.labels) (*sub.labels)(static_cast<std::int64_t>(i)) = (*g.labels)(sorted[i]);
    }
    sub.graph_id = g.graph_id;

    for (const Edge& e : g.edges) {
        NodeId nu = out.id_map[static_cast<std::size_t>(e.u)];
        NodeId nv = out.id_map[static_cast<std::size_t>(e.v)];
        if (nu >= 0 && nv >= 0) sub.edges.emplace_back(nu, nv);
    }
    std::sort(sub.edges.begin(), sub.edges.end());
    return out;
}

std::vector<NodeId> k_hop_neighborhood(const Graph& g, const std::vector<NodeId>& seeds, int hops) {
    std::vector<std::vector<NodeId>> adjacency(static_cast<std::size_t>(g.node_count));
    for (const Edge& e : g.edges) {
        adjacency[static_cast<std::size_t>(e.u)].push_back(e.v);
        adjacency[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<int> dist(static_cast<std::size_t>(g.node_count), -1);
    std::vector<NodeId> frontier;
    for (NodeId v : seeds) {
        check_node(g, v, "neighborhood seed");
        if (dist[static_cast<std::size_t>(v)] != 0) {
            dist[static_cast<std::size_t>(v)] = 0;
            frontier.push_back(v);
        }
    }
    std::vector<NodeId> out = frontier;
    for (int level = 1; level <= hops && !frontier.empty(); ++level) {
        std::vector<NodeId> next;
        for (NodeId v : frontier)
            for (NodeId w : adjacency[static_cast<std::size_t>(v)])
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = level;
                    next.push_back(w);
                    out.push_back(w);
                }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

DataSplit remap_split(const DataSplit& split, const std::vector<NodeId>& id_map) {
    DataSplit out;
    out.mode = split.mode;
    auto remap = [&](const std::vector<NodeId>& ids, std::vector<NodeId>& dst) {
        for (NodeId v : ids) {
            NodeId nv = id_map[static_cast<std::size_t>(v)];
            if (nv >= 0) dst.push_back(nv);
        }
        std::sort(dst.begin(), dst.end());
    };
    remap(split.train_ids, out.train_ids);
    remap(split.test_ids, out.test_ids);
    return out;
}

} // namespace gu
