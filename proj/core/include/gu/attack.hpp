#pragma once

#include "gu/graph.hpp"
#include "gu/model.hpp"

#include <functional>
#include <string>

namespace gu {

/// Result of a forgetting audit. MIA fills `auc` plus the group counts;
/// the poisoning audit fills auc_before/auc_after and the edge count.
struct AttackReport {
    std::string kind;
    double auc = 0.0;
    double auc_before = 0.0;
    double auc_after = 0.0;
    std::int64_t members = 0;
    std::int64_t nonmembers = 0;
    std::int64_t poison_edges = 0;
    std::uint64_t seed = 0;
};

/// Class-probability rows for the requested nodes, in request order.
using NodeProbFn = std::function<Eigen::MatrixXd(const std::vector<NodeId>&)>;

/// Link scores for the requested pairs, in request order.
using LinkScorer = std::function<Eigen::VectorXd(const std::vector<Edge>&)>;

NodeProbFn make_prob_fn(const ModelParams& params, const Graph& g);
LinkScorer make_link_scorer(const ModelParams& params, const Graph& g);

/// Confidence-threshold membership inference: each node is scored by the
/// probability the model assigns to its true class; the report's AUC
/// ranks members (positives) against nonmembers by exact pairwise
/// comparison with ties credited 0.5.
AttackReport mia_auc(const NodeProbFn& predict, const Graph& g,
                     const std::vector<NodeId>& member_ids,
                     const std::vector<NodeId>& nonmember_ids, const Eigen::VectorXi& labels);

struct PoisonResult {
    Graph poisoned;
    std::vector<Edge> poison_set;
};

/// Injects round(ratio*m) heterophilic non-edges (endpoints with
/// different labels), uniformly sampled per seed.
PoisonResult poison(const Graph& g, double ratio, std::uint64_t seed);

/// Link-prediction AUC of the deployed model before unlearning and the
/// updated model after, on held-out positives vs sampled negatives.
/// When `poison_set` is given, the evaluation pairs are checked to be
/// disjoint from it.
AttackReport poison_recovery(const LinkScorer& model_before, const LinkScorer& model_after,
                             const Graph& g_clean, const std::vector<Edge>& eval_pos_edges,
                             const std::vector<Edge>& eval_neg_pairs,
                             const std::vector<Edge>* poison_set = nullptr);

} // namespace gu
