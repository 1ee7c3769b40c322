#include "gu/unlearn/gnndelete.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"
#include "gu/unlearn/influence.hpp"
#include "gu/unlearn/utu.hpp"

#include <algorithm>
#include <cmath>

namespace gu {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<Edge> deleted_pairs(const Graph& g, const UnlearnRequest& request) {
    if (request.kind == RequestKind::Edge) return request.delta_e;
    std::vector<Edge> incident;
    for (const Edge& e : g.edges)
        if (std::binary_search(request.delta_v.begin(), request.delta_v.end(), e.u) ||
            std::binary_search(request.delta_v.begin(), request.delta_v.end(), e.v))
            incident.push_back(e);
    return incident;
}

struct PatchedLayers {
    std::vector<Eigen::MatrixXd> mixed; // inputs to W_k
    std::vector<Eigen::MatrixXd> pre;   // Z_k
    std::vector<Eigen::MatrixXd> core;  // activation before the operator
    std::vector<Eigen::MatrixXd> post;  // H_0 .. H_K after operator/pinning
};

struct View {
    Graph pruned;
    ForwardWorkspace ops;
    Eigen::MatrixXd sgc_prop;
    std::vector<std::int64_t> affected;   // row indices
    std::vector<std::int64_t> unaffected; // complement
};

Eigen::MatrixXd mix_rows(const ModelParams& p, const View& v, const Eigen::MatrixXd& h,
                         std::size_t layer) {
    if (p.backbone == Backbone::SGC) return v.sgc_prop;
    (void)layer;
    if (p.backbone == Backbone::GCN) return v.ops.adj.matrix * h;
    Eigen::MatrixXd m(h.rows(), 2 * h.cols());
    m.leftCols(h.cols()) = h;
    m.rightCols(h.cols()) = v.ops.mean->matrix * h;
    return m;
}

Eigen::MatrixXd mix_adjoint_rows(const ModelParams& p, const View& v, const Eigen::MatrixXd& dp) {
    if (p.backbone == Backbone::GCN) return v.ops.adj.matrix * dp;
    std::int64_t d = dp.cols() / 2;
    return dp.leftCols(d) + v.ops.mean->matrix.transpose() * dp.rightCols(d);
}

// Base layer outputs on the pruned view (no operator).
std::vector<Eigen::MatrixXd> base_layers(const ModelParams& p, const View& v) {
    std::vector<Eigen::MatrixXd> post(p.weights.size() + 1);
    post[0] = v.pruned.features;
    for (std::size_t k = 0; k < p.weights.size(); ++k) {
        Eigen::MatrixXd z = mix_rows(p, v, post[k], k) * p.weights[k];
        post[k + 1] = (k + 1 < p.weights.size()) ? z.cwiseMax(0.0) : z;
    }
    return post;
}

PatchedLayers patched_forward(const ModelParams& p, const View& v,
                              const std::vector<Eigen::MatrixXd>& deletion,
                              const std::vector<Eigen::MatrixXd>& base_post) {
    PatchedLayers out;
    std::size_t layers = p.weights.size();
    out.mixed.resize(layers);
    out.pre.resize(layers);
    out.core.resize(layers);
    out.post.resize(layers + 1);
    out.post[0] = v.pruned.features;
    for (std::size_t k = 0; k < layers; ++k) {
        out.mixed[k] = mix_rows(p, v, out.post[k], k);
        out.pre[k] = out.mixed[k] * p.weights[k];
        out.core[k] = (k + 1 < layers) ? out.pre[k].cwiseMax(0.0) : out.pre[k];
        Eigen::MatrixXd h = out.core[k];
        for (std::int64_t row : v.affected)
            h.row(row) = out.core[k].row(row) * deletion[k];
        // operator scope: everything outside the affected set keeps base values
        for (std::int64_t row : v.unaffected) h.row(row) = base_post[k + 1].row(row);
        out.post[k + 1] = std::move(h);
    }
    return out;
}

} // namespace

DeletionModel gnndelete_unlearn(const ModelParams& base, const Graph& g, const DataSplit& split,
                                const UnlearnRequest& request, const GnnDeleteOptions& opts,
                                std::uint64_t seed) {
    (void)split; // both losses are label-free; kept for interface parity
    require(request.kind != RequestKind::Feature, ErrorCode::KindMismatch,
            "gnndelete handles node- and edge-level requests");
    require(request.size() > 0, ErrorCode::EmptyRequest, "empty request");
    validate_request(g, request);

    DeletionModel model;
    model.base = base;
    model.request = request;
    model.affected = affected_set(g, request, base.hops);

    std::vector<Edge> pairs = deleted_pairs(g, request);

    View view;
    view.pruned = utu_apply(g, request); // node requests unlink incident edges
    view.ops = make_workspace(view.pruned, base.backbone);
    if (base.backbone == Backbone::SGC)
        view.sgc_prop = propagate(view.pruned.features, view.ops.adj, base.hops);

    std::vector<bool> is_affected(static_cast<std::size_t>(g.node_count), false);
    for (NodeId v : model.affected) is_affected[static_cast<std::size_t>(v)] = true;
    for (NodeId v = 0; v < g.node_count; ++v)
        (is_affected[static_cast<std::size_t>(v)] ? view.affected : view.unaffected).push_back(v);

    // NI targets: base embeddings on the original, pre-deletion graph
    EmbeddingTable ni_target = forward(base, g);
    std::vector<std::int64_t> retained;
    for (NodeId v : model.affected)
        if (request.kind != RequestKind::Node ||
            !std::binary_search(request.delta_v.begin(), request.delta_v.end(), v))
            retained.push_back(v);

    std::vector<Eigen::MatrixXd> base_post = base_layers(base, view);

    // DEC targets: scores of seeded uniform random pairs under the base
    // model on the unlinked graph
    Rng rng(derive_seed(seed, "gnndelete_pairs"));
    std::vector<double> dec_target(pairs.size());
    {
        const Eigen::MatrixXd& emb = base_post.back();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            NodeId a = static_cast<NodeId>(rng.uniform_int(static_cast<std::uint64_t>(g.node_count)));
            NodeId b = a;
            while (b == a)
                b = static_cast<NodeId>(rng.uniform_int(static_cast<std::uint64_t>(g.node_count)));
            dec_target[i] = sigmoid(emb.row(a).dot(emb.row(b)));
        }
    }

    for (const auto& w : base.weights)
        model.deletion.push_back(Eigen::MatrixXd::Identity(w.cols(), w.cols()));

    double dec_norm = pairs.empty() ? 0.0 : 1.0 / static_cast<double>(pairs.size());
    double ni_norm = retained.empty() ? 0.0 : 1.0 / static_cast<double>(retained.size());
    std::size_t layers = base.weights.size();

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        PatchedLayers cache = patched_forward(base, view, model.deletion, base_post);
        const Eigen::MatrixXd& emb = cache.post.back();

        Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(emb.rows(), emb.cols());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            double s = sigmoid(emb.row(pairs[i].u).dot(emb.row(pairs[i].v)));
            double coeff = opts.alpha * dec_norm * 2.0 * (s - dec_target[i]) * s * (1.0 - s);
            d_out.row(pairs[i].u) += coeff * emb.row(pairs[i].v);
            d_out.row(pairs[i].v) += coeff * emb.row(pairs[i].u);
        }
        for (std::int64_t v : retained)
            d_out.row(v) +=
                (1.0 - opts.alpha) * ni_norm * 2.0 * (emb.row(v) - ni_target.row(v));

        // backprop through the patched stack, operators only
        std::vector<Eigen::MatrixXd> grad_d;
        for (const auto& d : model.deletion)
            grad_d.push_back(Eigen::MatrixXd::Zero(d.rows(), d.cols()));
        Eigen::MatrixXd dh = std::move(d_out);
        for (std::size_t k = layers; k-- > 0;) {
            for (std::int64_t row : view.unaffected) dh.row(row).setZero(); // pinned rows
            for (std::int64_t row : view.affected)
                grad_d[k] += cache.core[k].row(row).transpose() * dh.row(row);
            Eigen::MatrixXd d_core = Eigen::MatrixXd::Zero(dh.rows(), dh.cols());
            for (std::int64_t row : view.affected)
                d_core.row(row) = dh.row(row) * model.deletion[k].transpose();
            if (k == 0) break;
            Eigen::MatrixXd dz = (k + 1 < layers)
                                     ? (cache.pre[k].array() > 0.0)
                                           .cast<double>()
                                           .matrix()
                                           .cwiseProduct(d_core)
                                     : std::move(d_core);
            dh = mix_adjoint_rows(base, view, dz * base.weights[k].transpose());
        }
        for (std::size_t k = 0; k < layers; ++k) model.deletion[k] -= opts.lr * grad_d[k];
    }
    return model;
}

EmbeddingTable forward_deleted(const DeletionModel& model, const Graph& g) {
    View view;
    view.pruned = utu_apply(g, model.request);
    view.ops = make_workspace(view.pruned, model.base.backbone);
    if (model.base.backbone == Backbone::SGC)
        view.sgc_prop = propagate(view.pruned.features, view.ops.adj, model.base.hops);

    std::vector<bool> is_affected(static_cast<std::size_t>(g.node_count), false);
    for (NodeId v : model.affected) is_affected[static_cast<std::size_t>(v)] = true;
    for (NodeId v = 0; v < g.node_count; ++v)
        (is_affected[static_cast<std::size_t>(v)] ? view.affected : view.unaffected).push_back(v);

    std::vector<Eigen::MatrixXd> base_post = base_layers(model.base, view);
    return patched_forward(model.base, view, model.deletion, base_post).post.back();
}

Eigen::MatrixXd predict_proba_deleted(const DeletionModel& model, const Graph& g) {
    return softmax_rows(forward_deleted(model, g));
}

Eigen::VectorXd score_edges_deleted(const DeletionModel& model, const Graph& g,
                                    const std::vector<Edge>& pairs) {
    EmbeddingTable emb = forward_deleted(model, g);
    Eigen::VectorXd scores(static_cast<std::int64_t>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i)
        scores(static_cast<std::int64_t>(i)) =
            sigmoid(emb.row(pairs[i].u).dot(emb.row(pairs[i].v)));
    return scores;
}

} // namespace gu
