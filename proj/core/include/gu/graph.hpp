#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gu {

using NodeId = std::int64_t;

/// Canonical undirected edge, endpoint order u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected attributed graph. Edges are stored as a sorted canonical
/// pair list (no self-loops, no duplicates); features are dense rows,
/// one per node. Immutable after construction by convention: operations
/// return new graphs.
struct Graph {
    std::int64_t node_count = 0;
    std::vector<Edge> edges;
    Eigen::MatrixXd features;              // node_count x feature_dim
    std::optional<Eigen::VectorXi> labels; // values in [0, num_classes)
    int num_classes = 0;
    std::optional<std::string> graph_id;

    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges.size()); }
    std::int64_t feature_dim() const { return features.cols(); }
    bool has_edge(NodeId a, NodeId b) const;
    std::vector<std::int64_t> degrees() const; // without self-loops
};

/// Collection of graphs for graph-level tasks, one label per graph.
struct GraphSet {
    std::vector<Graph> graphs;
    Eigen::VectorXi graph_labels;
    int num_classes = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(graphs.size()); }
};

enum class SplitMode { Transductive, Inductive };

struct DataSplit {
    std::vector<NodeId> train_ids; // sorted
    std::vector<NodeId> test_ids;  // sorted
    SplitMode mode = SplitMode::Transductive;

    bool is_train(NodeId v) const;
};

enum class RequestKind { Node, Edge, Feature };

std::string_view request_kind_name(RequestKind kind);

/// One feature-level target: a node plus the masked dimensions.
struct FeatureMask {
    NodeId node = 0;
    std::vector<std::int64_t> dims; // empty means "all dimensions"
};

/// An unlearning request: exactly one of the three levels populated,
/// matching `kind`. `size()` is the cardinality of that level.
struct UnlearnRequest {
    RequestKind kind = RequestKind::Node;
    std::vector<NodeId> delta_v;
    std::vector<Edge> delta_e;
    std::vector<FeatureMask> delta_x;

    std::int64_t size() const;
};

struct RequestTargets {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    std::vector<FeatureMask> features;
};

struct BuildResult {
    Graph graph;
    std::int64_t self_loops_dropped = 0;
    std::int64_t duplicates_dropped = 0;
};

/// Validates and canonicalizes raw inputs into a Graph. Self-loops and
/// duplicate pairs are dropped (counts reported, not errors).
BuildResult build_graph(const Eigen::MatrixXd& features,
                        const std::optional<Eigen::VectorXi>& labels,
                        const std::vector<std::pair<NodeId, NodeId>>& edges);

/// Seeded train/test split with |train| = round(train_ratio * n).
DataSplit split_dataset(const Graph& g, double train_ratio, SplitMode mode, std::uint64_t seed);

/// Same contract over graph indices of a GraphSet.
DataSplit split_graph_set(const GraphSet& gs, double train_ratio, std::uint64_t seed);

/// Builds a request of the given kind from the matching target level;
/// rejects mismatched or empty targets.
UnlearnRequest make_request(RequestKind kind, const RequestTargets& targets);

/// Checks that every target of `r` exists in `g`.
void validate_request(const Graph& g, const UnlearnRequest& r);

struct ApplyResult {
    Graph graph;
    /// old node id -> new node id; -1 for removed nodes. Identity for
    /// edge- and feature-level requests.
    std::vector<NodeId> id_map;

    NodeId remap(NodeId old_id) const { return id_map[static_cast<std::size_t>(old_id)]; }
};

/// Materializes the residual graph: node requests drop nodes and their
/// incident edges (dense re-index), edge requests drop edges, feature
/// requests zero the masked dimensions.
ApplyResult apply_request(const Graph& g, const UnlearnRequest& r);

/// Subgraph induced by `nodes` (need not be sorted); id_map as in ApplyResult.
ApplyResult induced_subgraph(const Graph& g, const std::vector<NodeId>& nodes);

/// Remaps a split through an id map, dropping removed nodes.
DataSplit remap_split(const DataSplit& split, const std::vector<NodeId>& id_map);

/// Nodes within `hops` edges of any seed node (seeds included), sorted.
std::vector<NodeId> k_hop_neighborhood(const Graph& g, const std::vector<NodeId>& seeds, int hops);

} // namespace gu
