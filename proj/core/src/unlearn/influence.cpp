#include "gu/unlearn/influence.hpp"

#include "gu/error.hpp"

#include <algorithm>
#include <unordered_set>

namespace gu {

namespace {

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        return std::hash<std::int64_t>()((e.u << 32) ^ e.v);
    }
};

UnlearnRequest to_view(const UnlearnRequest& request, const std::vector<NodeId>& view_map) {
    UnlearnRequest out;
    out.kind = request.kind;
    for (NodeId v : request.delta_v) {
        NodeId nv = view_map[static_cast<std::size_t>(v)];
        if (nv >= 0) out.delta_v.push_back(nv);
    }
    for (const Edge& e : request.delta_e) {
        NodeId nu = view_map[static_cast<std::size_t>(e.u)];
        NodeId nv = view_map[static_cast<std::size_t>(e.v)];
        if (nu >= 0 && nv >= 0) out.delta_e.emplace_back(nu, nv);
    }
    for (const FeatureMask& m : request.delta_x) {
        NodeId nv = view_map[static_cast<std::size_t>(m.node)];
        if (nv >= 0) out.delta_x.push_back({nv, m.dims});
    }
    std::sort(out.delta_v.begin(), out.delta_v.end());
    std::sort(out.delta_e.begin(), out.delta_e.end());
    return out;
}

struct PrunedTwin {
    Objective objective;
    std::vector<std::int64_t> affected_terms;
};

// Derives the pruned objective from the original one: terms are
// translated through the residual id map, loss terms owned by removed
// entities drop out. `norm` decides whether both views share the
// original normalization (gif) or the twin uses its own (ceu).
PrunedTwin make_pruned_twin(const Objective& orig, const UnlearnRequest& view_request,
                            const std::unordered_set<NodeId>& affected_view, Backbone backbone,
                            int hops, double weight_decay, bool share_normalization) {
    ApplyResult res = apply_request(orig.view(), view_request);

    std::vector<NodeId> composed_map(orig.view_map().size(), -1);
    for (std::size_t i = 0; i < orig.view_map().size(); ++i) {
        NodeId mid = orig.view_map()[i];
        if (mid >= 0) composed_map[i] = res.id_map[static_cast<std::size_t>(mid)];
    }

    std::vector<std::int64_t> affected_terms;
    std::vector<NodeId> train_nodes;
    std::vector<LinkSample> samples;

    if (orig.task() == Task::Node) {
        for (NodeId v : orig.train_nodes()) {
            NodeId nv = res.id_map[static_cast<std::size_t>(v)];
            if (nv < 0) continue;
            if (affected_view.count(v))
                affected_terms.push_back(static_cast<std::int64_t>(train_nodes.size()));
            train_nodes.push_back(nv);
        }
    } else {
        std::unordered_set<Edge, EdgeHash> removed(view_request.delta_e.begin(),
                                                   view_request.delta_e.end());
        for (const LinkSample& s : orig.link_samples()) {
            NodeId nu = res.id_map[static_cast<std::size_t>(s.u)];
            NodeId nv = res.id_map[static_cast<std::size_t>(s.v)];
            if (nu < 0 || nv < 0) continue;
            if (s.label > 0.5 && removed.count(Edge(s.u, s.v))) continue; // unlearned positive
            if (affected_view.count(s.u) || affected_view.count(s.v))
                affected_terms.push_back(static_cast<std::int64_t>(samples.size()));
            samples.push_back({nu, nv, s.label});
        }
    }

    double norm = share_normalization
                      ? orig.normalization()
                      : 1.0 / std::max<double>(1.0, static_cast<double>(orig.task() == Task::Node
                                                                            ? train_nodes.size()
                                                                            : samples.size()));
    return PrunedTwin{Objective::raw(std::move(res.graph), std::move(composed_map), orig.task(),
                                     backbone, hops, weight_decay, std::move(train_nodes),
                                     std::move(samples), norm),
                      std::move(affected_terms)};
}

ModelParams newton_step(const ModelParams& params, const Eigen::VectorXd& delta_grad,
                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& hvp,
                        const InfluenceOptions& opts) {
    ModelParams out = params;
    if (delta_grad.norm() == 0.0) return out; // request had no effect on the objective
    Eigen::VectorXd step = conjugate_gradient(hvp, delta_grad, opts);
    unflatten_params(flatten_params(params) - step, out);
    return out;
}

} // namespace

Eigen::VectorXd conjugate_gradient(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec, const Eigen::VectorXd& b,
    const InfluenceOptions& opts) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    double b_norm = b.norm();
    if (b_norm == 0.0) return x;
    double threshold = opts.cg_tol * b_norm;

    Eigen::VectorXd r = b; // residual for x = 0
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    for (int iter = 0; iter < opts.cg_iters; ++iter) {
        if (std::sqrt(rr) <= threshold) return x;
        Eigen::VectorXd ap = matvec(p) + opts.damping * p;
        double p_ap = p.dot(ap);
        require(p_ap > 0.0, ErrorCode::CGDiverged,
                "negative curvature encountered; raise the damping");
        double alpha = rr / p_ap;
        x += alpha * p;
        r -= alpha * ap;
        double rr_next = r.squaredNorm();
        p = r + (rr_next / rr) * p;
        rr = rr_next;
    }
    require(std::sqrt(rr) <= threshold, ErrorCode::CGDiverged,
            "residual " + std::to_string(std::sqrt(rr)) + " above tolerance after " +
                std::to_string(opts.cg_iters) + " iterations; raise the damping");
    return x;
}

std::vector<NodeId> affected_set(const Graph& g, const UnlearnRequest& request, int hops) {
    std::vector<NodeId> seeds;
    switch (request.kind) {
        case RequestKind::Node:
            seeds = request.delta_v;
            break;
        case RequestKind::Edge:
            for (const Edge& e : request.delta_e) {
                seeds.push_back(e.u);
                seeds.push_back(e.v);
            }
            break;
        case RequestKind::Feature:
            for (const FeatureMask& m : request.delta_x) seeds.push_back(m.node);
            break;
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return k_hop_neighborhood(g, seeds, hops);
}

ModelParams gif_unlearn(const ModelParams& params, const Graph& g, const DataSplit& split,
                        const UnlearnRequest& request, const LossSpec& loss,
                        const InfluenceOptions& opts) {
    validate_request(g, request);
    Objective orig(g, split, loss.task, params.backbone, params.hops, loss.weight_decay,
                   loss.seed);

    // affected entities in view ids
    std::vector<NodeId> affected = affected_set(g, request, params.hops);
    std::unordered_set<NodeId> affected_view;
    for (NodeId v : affected) {
        NodeId nv = orig.view_map()[static_cast<std::size_t>(v)];
        if (nv >= 0) affected_view.insert(nv);
    }

    UnlearnRequest view_request = to_view(request, orig.view_map());
    PrunedTwin twin = make_pruned_twin(orig, view_request, affected_view, params.backbone,
                                       params.hops, loss.weight_decay,
                                       /*share_normalization=*/true);

    std::vector<std::int64_t> affected_orig;
    if (loss.task == Task::Node) {
        for (std::size_t i = 0; i < orig.train_nodes().size(); ++i)
            if (affected_view.count(orig.train_nodes()[i]))
                affected_orig.push_back(static_cast<std::int64_t>(i));
    } else {
        for (std::size_t i = 0; i < orig.link_samples().size(); ++i) {
            const LinkSample& s = orig.link_samples()[i];
            if (affected_view.count(s.u) || affected_view.count(s.v))
                affected_orig.push_back(static_cast<std::int64_t>(i));
        }
    }

    Eigen::VectorXd delta_grad = twin.objective.grad_terms(params, twin.affected_terms) -
                                 orig.grad_terms(params, affected_orig);
    auto hvp = [&](const Eigen::VectorXd& v) { return orig.hvp(params, v); };
    return newton_step(params, delta_grad, hvp, opts);
}

ModelParams ceu_unlearn(const ModelParams& params, const Graph& g, const DataSplit& split,
                        const std::vector<Edge>& edges, const LossSpec& loss,
                        const InfluenceOptions& opts) {
    if (edges.empty()) return params;
    UnlearnRequest request =
        make_request(RequestKind::Edge, {.nodes = {}, .edges = edges, .features = {}});
    validate_request(g, request);

    Objective orig(g, split, loss.task, params.backbone, params.hops, loss.weight_decay,
                   loss.seed);
    UnlearnRequest view_request = to_view(request, orig.view_map());
    PrunedTwin twin = make_pruned_twin(orig, view_request, {}, params.backbone, params.hops,
                                       loss.weight_decay, /*share_normalization=*/false);

    Eigen::VectorXd delta_grad = twin.objective.grad(params) - orig.grad(params);
    auto hvp = [&](const Eigen::VectorXd& v) { return twin.objective.hvp(params, v); };
    return newton_step(params, delta_grad, hvp, opts);
}

ModelParams gif_unlearn_graphs(const ModelParams& params, const GraphSet& gs,
                               const DataSplit& split,
                               const std::vector<std::pair<NodeId, UnlearnRequest>>& masks,
                               const LossSpec& loss, const InfluenceOptions& opts) {
    require(loss.task == Task::Graph, ErrorCode::UnsupportedCombination,
            "gif_unlearn_graphs is for the graph task");

    GraphObjective orig(gs, split.train_ids, params.backbone, params.hops, loss.weight_decay);

    GraphSet masked = gs;
    std::unordered_set<NodeId> masked_ids;
    for (const auto& [graph_idx, request] : masks) {
        require(graph_idx >= 0 && graph_idx < gs.size(), ErrorCode::MissingTarget,
                "graph index out of range");
        require(request.kind == RequestKind::Feature, ErrorCode::KindMismatch,
                "graph-set unlearning handles feature requests");
        masked.graphs[static_cast<std::size_t>(graph_idx)] =
            apply_request(masked.graphs[static_cast<std::size_t>(graph_idx)], request).graph;
        masked_ids.insert(graph_idx);
    }
    GraphObjective pruned(masked, split.train_ids, params.backbone, params.hops,
                          loss.weight_decay);

    std::vector<std::int64_t> affected_terms;
    for (std::size_t i = 0; i < split.train_ids.size(); ++i)
        if (masked_ids.count(split.train_ids[i]))
            affected_terms.push_back(static_cast<std::int64_t>(i));

    Eigen::VectorXd delta_grad = pruned.grad_terms(params, affected_terms) -
                                 orig.grad_terms(params, affected_terms);
    auto hvp = [&](const Eigen::VectorXd& v) { return orig.hvp(params, v); };
    return newton_step(params, delta_grad, hvp, opts);
}

} // namespace gu
