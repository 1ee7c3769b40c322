#include "gu/attack.hpp"

#include "gu/error.hpp"
#include "gu/metrics.hpp"
#include "gu/rng.hpp"

#include <algorithm>
#include <unordered_set>

namespace gu {

NodeProbFn make_prob_fn(const ModelParams& params, const Graph& g) {
    // forward once, close over the table
    Eigen::MatrixXd probs = predict_proba(params, g);
    return [probs](const std::vector<NodeId>& ids) {
        Eigen::MatrixXd rows(static_cast<std::int64_t>(ids.size()), probs.cols());
        for (std::size_t i = 0; i < ids.size(); ++i)
            rows.row(static_cast<std::int64_t>(i)) = probs.row(ids[i]);
        return rows;
    };
}

LinkScorer make_link_scorer(const ModelParams& params, const Graph& g) {
    ModelParams copy = params;
    Graph graph = g;
    return [copy, graph](const std::vector<Edge>& pairs) {
        return score_edges(copy, graph, pairs);
    };
}

AttackReport mia_auc(const NodeProbFn& predict, const Graph& g,
                     const std::vector<NodeId>& member_ids,
                     const std::vector<NodeId>& nonmember_ids, const Eigen::VectorXi& labels) {
    require(!member_ids.empty() && !nonmember_ids.empty(), ErrorCode::EmptySet,
            "both member and nonmember sets must be nonempty");
    require(labels.size() == g.node_count, ErrorCode::ShapeMismatch,
            "labels length != node count");

    std::vector<double> scores;
    std::vector<int> is_member;
    auto push_group = [&](const std::vector<NodeId>& ids, int flag) {
        Eigen::MatrixXd probs = predict(ids);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            int label = labels(ids[i]);
            require(label >= 0 && label < probs.cols(), ErrorCode::OutOfRange,
                    "node " + std::to_string(ids[i]) + " has no usable label");
            scores.push_back(probs(static_cast<std::int64_t>(i), label));
            is_member.push_back(flag);
        }
    };
    push_group(member_ids, 1);
    push_group(nonmember_ids, 0);

    AttackReport report;
    report.kind = "mia";
    report.auc = auc(scores, is_member);
    report.members = static_cast<std::int64_t>(member_ids.size());
    report.nonmembers = static_cast<std::int64_t>(nonmember_ids.size());
    return report;
}

PoisonResult poison(const Graph& g, double ratio, std::uint64_t seed) {
    require(g.labels.has_value(), ErrorCode::MissingLabels, "poisoning needs labels");
    require(ratio >= 0.0, ErrorCode::InvalidRatio, "poison ratio must be >= 0");
    std::int64_t wanted = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(g.edge_count())));

    // candidate count: cross-class pairs not already edges
    std::vector<std::int64_t> class_sizes(static_cast<std::size_t>(g.num_classes), 0);
    for (std::int64_t v = 0; v < g.node_count; ++v)
        ++class_sizes[static_cast<std::size_t>((*g.labels)(v))];
    std::int64_t cross_pairs = 0;
    for (std::size_t a = 0; a < class_sizes.size(); ++a)
        for (std::size_t b = a + 1; b < class_sizes.size(); ++b)
            cross_pairs += class_sizes[a] * class_sizes[b];
    std::int64_t cross_edges = 0;
    for (const Edge& e : g.edges)
        if ((*g.labels)(e.u) != (*g.labels)(e.v)) ++cross_edges;
    require(wanted <= cross_pairs - cross_edges, ErrorCode::InsufficientCandidates,
            "not enough heterophilic non-edges: need " + std::to_string(wanted) + ", have " +
                std::to_string(cross_pairs - cross_edges));

    struct EdgeHash {
        std::size_t operator()(const Edge& e) const {
            return std::hash<std::int64_t>()((e.u << 32) ^ e.v);
        }
    };
    std::unordered_set<Edge, EdgeHash> taken(g.edges.begin(), g.edges.end());

    PoisonResult out;
    Rng rng(derive_seed(seed, "poison"));
    while (static_cast<std::int64_t>(out.poison_set.size()) < wanted) {
        NodeId a = static_cast<NodeId>(rng.uniform_int(static_cast<std::uint64_t>(g.node_count)));
        NodeId b = static_cast<NodeId>(rng.uniform_int(static_cast<std::uint64_t>(g.node_count)));
        if (a == b || (*g.labels)(a) == (*g.labels)(b)) continue;
        Edge e(a, b);
        if (!taken.insert(e).second) continue;
        out.poison_set.push_back(e);
    }
    std::sort(out.poison_set.begin(), out.poison_set.end());

    out.poisoned = g;
    out.poisoned.edges.insert(out.poisoned.edges.end(), out.poison_set.begin(),
                              out.poison_set.end());
    std::sort(out.poisoned.edges.begin(), out.poisoned.edges.end());
    return out;
}

AttackReport poison_recovery(const LinkScorer& model_before, const LinkScorer& model_after,
                             const Graph& g_clean, const std::vector<Edge>& eval_pos_edges,
                             const std::vector<Edge>& eval_neg_pairs,
                             const std::vector<Edge>* poison_set) {
    require(!eval_pos_edges.empty() && !eval_neg_pairs.empty(), ErrorCode::EmptySet,
            "evaluation sets must be nonempty");
    for (const Edge& e : eval_pos_edges)
        require(e.v < g_clean.node_count, ErrorCode::OutOfRange, "evaluation pair out of range");
    if (poison_set) {
        for (const Edge& e : eval_pos_edges)
            require(!std::binary_search(poison_set->begin(), poison_set->end(), e),
                    ErrorCode::OutOfRange, "evaluation positive overlaps the poison set");
        for (const Edge& e : eval_neg_pairs)
            require(!std::binary_search(poison_set->begin(), poison_set->end(), e),
                    ErrorCode::OutOfRange, "evaluation negative overlaps the poison set");
    }

    std::vector<Edge> all_pairs = eval_pos_edges;
    all_pairs.insert(all_pairs.end(), eval_neg_pairs.begin(), eval_neg_pairs.end());
    std::vector<int> labels(all_pairs.size(), 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(eval_pos_edges.size()),
              1);

    AttackReport report;
    report.kind = "poison";
    report.auc_before = auc(to_double_vector(model_before(all_pairs)), labels);
    report.auc_after = auc(to_double_vector(model_after(all_pairs)), labels);
    report.auc = report.auc_after;
    report.poison_edges = poison_set ? static_cast<std::int64_t>(poison_set->size()) : 0;
    return report;
}

} // namespace gu
