#pragma once

#include "gu/graph.hpp"
#include "gu/model.hpp"

#include <cstdint>
#include <vector>

namespace gu {

enum class Task { Node, Link, Graph };

std::string_view task_name(Task task);
Task task_from_name(std::string_view name);

/// One link-prediction loss term: a node pair plus its 0/1 label.
struct LinkSample {
    NodeId u = 0;
    NodeId v = 0;
    double label = 1.0;
};

/// Full-batch training objective over a fixed (graph, split, task):
/// task loss averaged over its terms plus (weight_decay/2)*||theta||^2.
///
/// The Hessian-vector product is exact (forward-over-reverse through the
/// same computation), not a finite-difference or Gauss-Newton surrogate.
/// Restricting to a subset of loss terms keeps the full-objective
/// normalization so that gradient differences between two views are
/// directly comparable; the influence-function updates rely on this.
class Objective {
  public:
    /// Builds the objective on the training view of `g`. Inductive
    /// splits reduce to the train-induced subgraph internally; link
    /// objectives sample one negative per positive from the seed.
    Objective(const Graph& g, const DataSplit& split, Task task, Backbone backbone, int hops,
              double weight_decay, std::uint64_t seed);

    double loss(const ModelParams& params) const;
    Eigen::VectorXd grad(const ModelParams& params) const;
    Eigen::VectorXd hvp(const ModelParams& params, const Eigen::VectorXd& direction) const;

    /// Gradient of the selected loss terms only (indices into
    /// term_count()), with the full normalization and WITHOUT the weight
    /// decay term.
    Eigen::VectorXd grad_terms(const ModelParams& params,
                               const std::vector<std::int64_t>& term_ids) const;

    std::int64_t term_count() const;
    Task task() const { return task_; }
    const Graph& view() const { return view_; }
    /// original node id -> view id (-1 when excluded by an inductive split)
    const std::vector<NodeId>& view_map() const { return view_map_; }
    const std::vector<NodeId>& train_nodes() const { return train_nodes_; }
    const std::vector<LinkSample>& link_samples() const { return samples_; }
    double normalization() const { return norm_; }

    /// Derived objective over an explicit view (used for pruned twins in
    /// influence updates). Caller supplies terms and normalization.
    static Objective raw(Graph view, std::vector<NodeId> view_map, Task task, Backbone backbone,
                         int hops, double weight_decay, std::vector<NodeId> train_nodes,
                         std::vector<LinkSample> samples, double normalization);

  private:
    Objective() = default;
    void prepare_workspace();

    Task task_ = Task::Node;
    Backbone backbone_ = Backbone::SGC;
    int hops_ = 2;
    double weight_decay_ = 0.0;
    double norm_ = 1.0;

    Graph view_;
    std::vector<NodeId> view_map_;
    std::vector<NodeId> train_nodes_; // view-local ids (node task)
    std::vector<LinkSample> samples_; // view-local ids (link task)

    ForwardWorkspace ops_;
    Eigen::MatrixXd sgc_prop_; // A_hat^hops X, SGC only
};

/// Graph-classification analogue over a GraphSet; terms are train graphs
/// with mean-pooled readout.
class GraphObjective {
  public:
    GraphObjective(const GraphSet& gs, const std::vector<NodeId>& train_graphs, Backbone backbone,
                   int hops, double weight_decay);

    double loss(const ModelParams& params) const;
    Eigen::VectorXd grad(const ModelParams& params) const;
    Eigen::VectorXd hvp(const ModelParams& params, const Eigen::VectorXd& direction) const;
    Eigen::VectorXd grad_terms(const ModelParams& params,
                               const std::vector<std::int64_t>& term_ids) const;

    std::int64_t term_count() const { return static_cast<std::int64_t>(train_graphs_.size()); }
    const std::vector<NodeId>& train_graphs() const { return train_graphs_; }

  private:
    Backbone backbone_ = Backbone::SGC;
    int hops_ = 2;
    double weight_decay_ = 0.0;
    double norm_ = 1.0;

    std::vector<Graph> graphs_;       // train graphs, in train_graphs_ order
    std::vector<int> labels_;
    std::vector<NodeId> train_graphs_;
    std::vector<ForwardWorkspace> ops_;
    std::vector<Eigen::MatrixXd> sgc_prop_;
};

} // namespace gu
