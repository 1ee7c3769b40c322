#include "gu/objective.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gu {

namespace {

double stable_softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---- backbone passes -------------------------------------------------
//
// Every backbone is a stack of layers Z_k = mix_k(H_k) W_k with ReLU
// between layers and none on the last. mix is linear in H (sparse
// propagation / neighbor-mean concat / fixed SGC precompute), which keeps
// the adjoint and tangent recurrences below mechanical.

struct LayerOps {
    Backbone backbone;
    const ForwardWorkspace* ops;
    const Eigen::MatrixXd* sgc_prop; // non-null iff backbone == SGC
};

struct Cache {
    std::vector<Eigen::MatrixXd> mixed; // P_k, input to W_k
    std::vector<Eigen::MatrixXd> pre;   // Z_k
    std::vector<Eigen::MatrixXd> post;  // H_0 .. H_K

    const Eigen::MatrixXd& out() const { return post.back(); }
};

Eigen::MatrixXd mix(const LayerOps& lo, const Eigen::MatrixXd& h) {
    if (lo.backbone == Backbone::GCN) return lo.ops->adj.matrix * h;
    Eigen::MatrixXd m(h.rows(), 2 * h.cols());
    m.leftCols(h.cols()) = h;
    m.rightCols(h.cols()) = lo.ops->mean->matrix * h;
    return m;
}

Eigen::MatrixXd mix_adjoint(const LayerOps& lo, const Eigen::MatrixXd& dp) {
    if (lo.backbone == Backbone::GCN) return lo.ops->adj.matrix * dp; // symmetric
    std::int64_t d = dp.cols() / 2;
    return dp.leftCols(d) + lo.ops->mean->matrix.transpose() * dp.rightCols(d);
}

Cache forward_cache(const ModelParams& p, const LayerOps& lo, const Eigen::MatrixXd& x) {
    Cache c;
    std::size_t layers = p.weights.size();
    c.mixed.resize(layers);
    c.pre.resize(layers);
    c.post.resize(layers + 1);
    c.post[0] = x;
    for (std::size_t k = 0; k < layers; ++k) {
        c.mixed[k] = lo.backbone == Backbone::SGC ? *lo.sgc_prop : mix(lo, c.post[k]);
        require(c.mixed[k].cols() == p.weights[k].rows(), ErrorCode::ShapeMismatch,
                "layer " + std::to_string(k) + " input width " + std::to_string(c.mixed[k].cols()) +
                    " != weight rows " + std::to_string(p.weights[k].rows()));
        c.pre[k] = c.mixed[k] * p.weights[k];
        c.post[k + 1] = (k + 1 < layers) ? c.pre[k].cwiseMax(0.0) : c.pre[k];
    }
    return c;
}

void backward(const ModelParams& p, const LayerOps& lo, const Cache& c, Eigen::MatrixXd d_out,
              std::vector<Eigen::MatrixXd>& grad_w) {
    std::size_t layers = p.weights.size();
    Eigen::MatrixXd dh = std::move(d_out);
    for (std::size_t k = layers; k-- > 0;) {
        Eigen::MatrixXd dz =
            (k + 1 < layers) ? (c.pre[k].array() > 0.0).cast<double>().matrix().cwiseProduct(dh)
                             : std::move(dh);
        grad_w[k] += c.mixed[k].transpose() * dz;
        if (k > 0) dh = mix_adjoint(lo, dz * p.weights[k].transpose());
    }
}

struct TangentCache {
    std::vector<Eigen::MatrixXd> mixed_t; // tP_k
    std::vector<Eigen::MatrixXd> post_t;  // tH_0 .. tH_K

    const Eigen::MatrixXd& out_t() const { return post_t.back(); }
};

TangentCache forward_tangent(const ModelParams& p, const LayerOps& lo, const Cache& c,
                             const std::vector<Eigen::MatrixXd>& w_tan) {
    TangentCache t;
    std::size_t layers = p.weights.size();
    t.mixed_t.resize(layers);
    t.post_t.resize(layers + 1);
    t.post_t[0] = Eigen::MatrixXd::Zero(c.post[0].rows(), c.post[0].cols());
    for (std::size_t k = 0; k < layers; ++k) {
        t.mixed_t[k] = lo.backbone == Backbone::SGC
                           ? Eigen::MatrixXd::Zero(c.mixed[k].rows(), c.mixed[k].cols())
                           : mix(lo, t.post_t[k]);
        Eigen::MatrixXd tz = t.mixed_t[k] * p.weights[k] + c.mixed[k] * w_tan[k];
        t.post_t[k + 1] = (k + 1 < layers)
                              ? (c.pre[k].array() > 0.0).cast<double>().matrix().cwiseProduct(tz)
                              : std::move(tz);
    }
    return t;
}

// Forward-over-reverse: propagates the adjoint and its directional
// derivative together, accumulating t(dW) which is exactly H * v.
void backward_hvp(const ModelParams& p, const LayerOps& lo, const Cache& c, const TangentCache& t,
                  const std::vector<Eigen::MatrixXd>& w_tan, Eigen::MatrixXd d_out,
                  Eigen::MatrixXd d_out_t, std::vector<Eigen::MatrixXd>& hvp_w) {
    std::size_t layers = p.weights.size();
    Eigen::MatrixXd dh = std::move(d_out);
    Eigen::MatrixXd dh_t = std::move(d_out_t);
    for (std::size_t k = layers; k-- > 0;) {
        Eigen::MatrixXd dz, dz_t;
        if (k + 1 < layers) {
            Eigen::MatrixXd mask = (c.pre[k].array() > 0.0).cast<double>();
            dz = mask.cwiseProduct(dh);
            dz_t = mask.cwiseProduct(dh_t);
        } else {
            dz = std::move(dh);
            dz_t = std::move(dh_t);
        }
        hvp_w[k] += t.mixed_t[k].transpose() * dz + c.mixed[k].transpose() * dz_t;
        if (k > 0) {
            dh = mix_adjoint(lo, dz * p.weights[k].transpose());
            dh_t = mix_adjoint(lo, dz_t * p.weights[k].transpose() + dz * w_tan[k].transpose());
        }
    }
}

// ---- task heads --------------------------------------------------------

double node_head(const Eigen::MatrixXd& out, const Eigen::VectorXi& labels,
                 const std::vector<NodeId>& nodes, double norm, Eigen::MatrixXd* d_out) {
    double loss = 0.0;
    for (NodeId v : nodes) {
        double row_max = out.row(v).maxCoeff();
        Eigen::ArrayXd shifted = (out.row(v).array() - row_max).exp();
        double z = shifted.sum();
        loss += (std::log(z) - (out(v, labels(v)) - row_max)) * norm;
        if (d_out) {
            Eigen::ArrayXd probs = shifted / z;
            d_out->row(v) += (probs * norm).matrix().transpose();
            (*d_out)(v, labels(v)) -= norm;
        }
    }
    return loss;
}

void node_head_tangent(const Eigen::MatrixXd& out, const Eigen::MatrixXd& out_t,
                       const Eigen::VectorXi& labels, const std::vector<NodeId>& nodes,
                       double norm, Eigen::MatrixXd* d_out_t) {
    (void)labels; // the one-hot target is constant, only softmax bends
    for (NodeId v : nodes) {
        double row_max = out.row(v).maxCoeff();
        Eigen::ArrayXd shifted = (out.row(v).array() - row_max).exp();
        Eigen::ArrayXd probs = shifted / shifted.sum();
        Eigen::ArrayXd tv = out_t.row(v).transpose().array();
        double dot = (probs * tv).sum();
        d_out_t->row(v) += ((probs * tv - probs * dot) * norm).matrix().transpose();
    }
}

double link_head(const Eigen::MatrixXd& out, const std::vector<LinkSample>& samples,
                 const std::vector<std::int64_t>* subset, double norm, Eigen::MatrixXd* d_out) {
    double loss = 0.0;
    std::size_t count = subset ? subset->size() : samples.size();
    for (std::size_t i = 0; i < count; ++i) {
        const LinkSample& s = samples[subset ? static_cast<std::size_t>((*subset)[i]) : i];
        double dot = out.row(s.u).dot(out.row(s.v));
        loss += (stable_softplus(dot) - s.label * dot) * norm;
        if (d_out) {
            double coeff = (sigmoid(dot) - s.label) * norm;
            d_out->row(s.u) += coeff * out.row(s.v);
            d_out->row(s.v) += coeff * out.row(s.u);
        }
    }
    return loss;
}

void link_head_tangent(const Eigen::MatrixXd& out, const Eigen::MatrixXd& out_t,
                       const std::vector<LinkSample>& samples, double norm,
                       Eigen::MatrixXd* d_out_t) {
    for (const LinkSample& s : samples) {
        double dot = out.row(s.u).dot(out.row(s.v));
        double q = sigmoid(dot);
        double coeff = (q - s.label) * norm;
        double dot_t = out_t.row(s.u).dot(out.row(s.v)) + out.row(s.u).dot(out_t.row(s.v));
        double coeff_t = q * (1.0 - q) * dot_t * norm;
        d_out_t->row(s.u) += coeff_t * out.row(s.v) + coeff * out_t.row(s.v);
        d_out_t->row(s.v) += coeff_t * out.row(s.u) + coeff * out_t.row(s.u);
    }
}

std::vector<Eigen::MatrixXd> zeros_like(const std::vector<Eigen::MatrixXd>& weights) {
    std::vector<Eigen::MatrixXd> zs;
    zs.reserve(weights.size());
    for (const auto& w : weights) zs.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    return zs;
}

std::vector<Eigen::MatrixXd> unflatten_like(const Eigen::VectorXd& flat,
                                            const std::vector<Eigen::MatrixXd>& weights) {
    std::vector<Eigen::MatrixXd> out = zeros_like(weights);
    std::int64_t offset = 0;
    for (auto& w : out)
        for (std::int64_t i = 0; i < w.rows(); ++i)
            for (std::int64_t j = 0; j < w.cols(); ++j) w(i, j) = flat(offset++);
    return out;
}

Eigen::VectorXd flatten_mats(const std::vector<Eigen::MatrixXd>& mats) {
    std::int64_t total = 0;
    for (const auto& m : mats) total += m.size();
    Eigen::VectorXd flat(total);
    std::int64_t offset = 0;
    for (const auto& m : mats)
        for (std::int64_t i = 0; i < m.rows(); ++i)
            for (std::int64_t j = 0; j < m.cols(); ++j) flat(offset++) = m(i, j);
    return flat;
}

} // namespace

std::string_view task_name(Task task) {
    switch (task) {
        case Task::Node: return "node";
        case Task::Link: return "link";
        case Task::Graph: return "graph";
    }
    return "?";
}

Task task_from_name(std::string_view name) {
    if (name == "node") return Task::Node;
    if (name == "link") return Task::Link;
    if (name == "graph") return Task::Graph;
    fail(ErrorCode::ParseError, "unknown task '" + std::string(name) + "'");
}

// ---- Objective ---------------------------------------------------------

Objective::Objective(const Graph& g, const DataSplit& split, Task task, Backbone backbone,
                     int hops, double weight_decay, std::uint64_t seed)
    : task_(task), backbone_(backbone), hops_(hops), weight_decay_(weight_decay) {
    require(task != Task::Graph, ErrorCode::UnsupportedCombination,
            "use GraphObjective for graph-level tasks");

    std::vector<NodeId> train_local;
    if (split.mode == SplitMode::Inductive) {
        ApplyResult sub = induced_subgraph(g, split.train_ids);
        view_ = std::move(sub.graph);
        view_map_ = std::move(sub.id_map);
        train_local.resize(static_cast<std::size_t>(view_.node_count));
        for (std::size_t i = 0; i < train_local.size(); ++i)
            train_local[i] = static_cast<NodeId>(i);
    } else {
        view_ = g;
        view_map_.resize(static_cast<std::size_t>(g.node_count));
        for (NodeId v = 0; v < g.node_count; ++v) view_map_[static_cast<std::size_t>(v)] = v;
        train_local = split.train_ids;
    }

    if (task == Task::Node) {
        require(view_.labels.has_value(), ErrorCode::MissingLabels,
                "node classification needs labels");
        require(!train_local.empty(), ErrorCode::EmptySet, "empty training set");
        train_nodes_ = std::move(train_local);
        norm_ = 1.0 / static_cast<double>(train_nodes_.size());
    } else {
        std::vector<bool> is_train(static_cast<std::size_t>(view_.node_count), false);
        for (NodeId v : train_local) is_train[static_cast<std::size_t>(v)] = true;
        for (const Edge& e : view_.edges)
            if (is_train[static_cast<std::size_t>(e.u)] && is_train[static_cast<std::size_t>(e.v)])
                samples_.push_back({e.u, e.v, 1.0});
        require(!samples_.empty(), ErrorCode::NoEdges, "no training edges for link task");

        // one negative per positive, sampled once per run
        std::size_t positives = samples_.size();
        std::unordered_set<std::int64_t> taken;
        auto key = [&](const Edge& e) { return e.u * view_.node_count + e.v; };
        for (const Edge& e : view_.edges) taken.insert(key(e));

        Rng rng(derive_seed(seed, "link_negatives"));
        std::size_t nt = train_local.size();
        std::size_t attempts = 0, limit = 200 * positives + 10000;
        std::size_t sampled = 0;
        while (sampled < positives) {
            require(attempts++ < limit, ErrorCode::InsufficientCandidates,
                    "could not sample enough negative train pairs");
            NodeId a = train_local[rng.uniform_int(nt)];
            NodeId b = train_local[rng.uniform_int(nt)];
            if (a == b) continue;
            Edge e(a, b);
            if (!taken.insert(key(e)).second) continue;
            samples_.push_back({e.u, e.v, 0.0});
            ++sampled;
        }
        norm_ = 1.0 / static_cast<double>(samples_.size());
    }
    prepare_workspace();
}

Objective Objective::raw(Graph view, std::vector<NodeId> view_map, Task task, Backbone backbone,
                         int hops, double weight_decay, std::vector<NodeId> train_nodes,
                         std::vector<LinkSample> samples, double normalization) {
    Objective obj;
    obj.task_ = task;
    obj.backbone_ = backbone;
    obj.hops_ = hops;
    obj.weight_decay_ = weight_decay;
    obj.norm_ = normalization;
    obj.view_ = std::move(view);
    obj.view_map_ = std::move(view_map);
    obj.train_nodes_ = std::move(train_nodes);
    obj.samples_ = std::move(samples);
    obj.prepare_workspace();
    return obj;
}

void Objective::prepare_workspace() {
    ops_ = make_workspace(view_, backbone_);
    if (backbone_ == Backbone::SGC) sgc_prop_ = propagate(view_.features, ops_.adj, hops_);
}

std::int64_t Objective::term_count() const {
    return task_ == Task::Node ? static_cast<std::int64_t>(train_nodes_.size())
                               : static_cast<std::int64_t>(samples_.size());
}

double Objective::loss(const ModelParams& params) const {
    require(params.backbone == backbone_, ErrorCode::WrongBackbone,
            "params backbone does not match objective");
    LayerOps lo{backbone_, &ops_, backbone_ == Backbone::SGC ? &sgc_prop_ : nullptr};
    Cache cache = forward_cache(params, lo, view_.features);
    double value = task_ == Task::Node
                       ? node_head(cache.out(), *view_.labels, train_nodes_, norm_, nullptr)
                       : link_head(cache.out(), samples_, nullptr, norm_, nullptr);
    for (const auto& w : params.weights) value += 0.5 * weight_decay_ * w.squaredNorm();
    return value;
}

Eigen::VectorXd Objective::grad(const ModelParams& params) const {
    require(params.backbone == backbone_, ErrorCode::WrongBackbone,
            "params backbone does not match objective");
    LayerOps lo{backbone_, &ops_, backbone_ == Backbone::SGC ? &sgc_prop_ : nullptr};
    Cache cache = forward_cache(params, lo, view_.features);

    Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(cache.out().rows(), cache.out().cols());
    if (task_ == Task::Node)
        node_head(cache.out(), *view_.labels, train_nodes_, norm_, &d_out);
    else
        link_head(cache.out(), samples_, nullptr, norm_, &d_out);

    std::vector<Eigen::MatrixXd> grad_w = zeros_like(params.weights);
    backward(params, lo, cache, std::move(d_out), grad_w);
    for (std::size_t k = 0; k < grad_w.size(); ++k) grad_w[k] += weight_decay_ * params.weights[k];
    return flatten_mats(grad_w);
}

Eigen::VectorXd Objective::grad_terms(const ModelParams& params,
                                      const std::vector<std::int64_t>& term_ids) const {
    LayerOps lo{backbone_, &ops_, backbone_ == Backbone::SGC ? &sgc_prop_ : nullptr};
    Cache cache = forward_cache(params, lo, view_.features);

    Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(cache.out().rows(), cache.out().cols());
    if (task_ == Task::Node) {
        std::vector<NodeId> subset;
        subset.reserve(term_ids.size());
        for (std::int64_t idx : term_ids) {
            require(idx >= 0 && idx < term_count(), ErrorCode::OutOfRange, "term index out of range");
            subset.push_back(train_nodes_[static_cast<std::size_t>(idx)]);
        }
        node_head(cache.out(), *view_.labels, subset, norm_, &d_out);
    } else {
        for (std::int64_t idx : term_ids)
            require(idx >= 0 && idx < term_count(), ErrorCode::OutOfRange, "term index out of range");
        link_head(cache.out(), samples_, &term_ids, norm_, &d_out);
    }

    std::vector<Eigen::MatrixXd> grad_w = zeros_like(params.weights);
    backward(params, lo, cache, std::move(d_out), grad_w);
    return flatten_mats(grad_w);
}

Eigen::VectorXd Objective::hvp(const ModelParams& params, const Eigen::VectorXd& direction) const {
    require(direction.size() == params.parameter_count(), ErrorCode::ShapeMismatch,
            "direction length != parameter count");
    LayerOps lo{backbone_, &ops_, backbone_ == Backbone::SGC ? &sgc_prop_ : nullptr};
    Cache cache = forward_cache(params, lo, view_.features);
    std::vector<Eigen::MatrixXd> w_tan = unflatten_like(direction, params.weights);
    TangentCache tangent = forward_tangent(params, lo, cache, w_tan);

    Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(cache.out().rows(), cache.out().cols());
    Eigen::MatrixXd d_out_t = Eigen::MatrixXd::Zero(cache.out().rows(), cache.out().cols());
    if (task_ == Task::Node) {
        node_head(cache.out(), *view_.labels, train_nodes_, norm_, &d_out);
        node_head_tangent(cache.out(), tangent.out_t(), *view_.labels, train_nodes_, norm_,
                          &d_out_t);
    } else {
        link_head(cache.out(), samples_, nullptr, norm_, &d_out);
        link_head_tangent(cache.out(), tangent.out_t(), samples_, norm_, &d_out_t);
    }

    std::vector<Eigen::MatrixXd> hvp_w = zeros_like(params.weights);
    backward_hvp(params, lo, cache, tangent, w_tan, std::move(d_out), std::move(d_out_t), hvp_w);
    for (std::size_t k = 0; k < hvp_w.size(); ++k) hvp_w[k] += weight_decay_ * w_tan[k];
    return flatten_mats(hvp_w);
}

// ---- GraphObjective ------------------------------------------------------

GraphObjective::GraphObjective(const GraphSet& gs, const std::vector<NodeId>& train_graphs,
                               Backbone backbone, int hops, double weight_decay)
    : backbone_(backbone), hops_(hops), weight_decay_(weight_decay) {
    require(!train_graphs.empty(), ErrorCode::EmptySet, "no training graphs");
    train_graphs_ = train_graphs;
    norm_ = 1.0 / static_cast<double>(train_graphs_.size());
    for (NodeId idx : train_graphs_) {
        require(idx >= 0 && idx < gs.size(), ErrorCode::OutOfRange, "train graph index out of range");
        const Graph& g = gs.graphs[static_cast<std::size_t>(idx)];
        graphs_.push_back(g);
        labels_.push_back(gs.graph_labels(idx));
        ops_.push_back(make_workspace(g, backbone));
        sgc_prop_.push_back(backbone == Backbone::SGC ? propagate(g.features, ops_.back().adj, hops)
                                                      : Eigen::MatrixXd());
    }
}

double GraphObjective::loss(const ModelParams& params) const {
    double value = 0.0;
    for (std::size_t j = 0; j < graphs_.size(); ++j) {
        LayerOps lo{backbone_, &ops_[j], backbone_ == Backbone::SGC ? &sgc_prop_[j] : nullptr};
        Cache cache = forward_cache(params, lo, graphs_[j].features);
        Eigen::VectorXd pooled = cache.out().colwise().mean();
        double row_max = pooled.maxCoeff();
        Eigen::ArrayXd shifted = (pooled.array() - row_max).exp();
        value += (std::log(shifted.sum()) - (pooled(labels_[j]) - row_max)) * norm_;
    }
    for (const auto& w : params.weights) value += 0.5 * weight_decay_ * w.squaredNorm();
    return value;
}

Eigen::VectorXd GraphObjective::grad_terms(const ModelParams& params,
                                           const std::vector<std::int64_t>& term_ids) const {
    std::vector<Eigen::MatrixXd> grad_w = zeros_like(params.weights);
    for (std::int64_t idx : term_ids) {
        require(idx >= 0 && idx < term_count(), ErrorCode::OutOfRange, "term index out of range");
        std::size_t j = static_cast<std::size_t>(idx);
        LayerOps lo{backbone_, &ops_[j], backbone_ == Backbone::SGC ? &sgc_prop_[j] : nullptr};
        Cache cache = forward_cache(params, lo, graphs_[j].features);

        Eigen::VectorXd pooled = cache.out().colwise().mean();
        double row_max = pooled.maxCoeff();
        Eigen::ArrayXd shifted = (pooled.array() - row_max).exp();
        Eigen::ArrayXd probs = shifted / shifted.sum();
        Eigen::VectorXd d_pooled = (probs * norm_).matrix();
        d_pooled(labels_[j]) -= norm_;

        double inv_n = 1.0 / static_cast<double>(cache.out().rows());
        Eigen::MatrixXd d_out = inv_n * Eigen::VectorXd::Ones(cache.out().rows()) *
                                d_pooled.transpose();
        backward(params, lo, cache, std::move(d_out), grad_w);
    }
    return flatten_mats(grad_w);
}

Eigen::VectorXd GraphObjective::grad(const ModelParams& params) const {
    std::vector<std::int64_t> all(static_cast<std::size_t>(term_count()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int64_t>(i);
    return grad_terms(params, all) + weight_decay_ * flatten_params(params);
}

Eigen::VectorXd GraphObjective::hvp(const ModelParams& params,
                                    const Eigen::VectorXd& direction) const {
    require(direction.size() == params.parameter_count(), ErrorCode::ShapeMismatch,
            "direction length != parameter count");
    std::vector<Eigen::MatrixXd> w_tan = unflatten_like(direction, params.weights);
    std::vector<Eigen::MatrixXd> hvp_w = zeros_like(params.weights);
    for (std::size_t j = 0; j < graphs_.size(); ++j) {
        LayerOps lo{backbone_, &ops_[j], backbone_ == Backbone::SGC ? &sgc_prop_[j] : nullptr};
        Cache cache = forward_cache(params, lo, graphs_[j].features);
        TangentCache tangent = forward_tangent(params, lo, cache, w_tan);

        Eigen::VectorXd pooled = cache.out().colwise().mean();
        Eigen::VectorXd pooled_t = tangent.out_t().colwise().mean();
        double row_max = pooled.maxCoeff();
        Eigen::ArrayXd shifted = (pooled.array() - row_max).exp();
        Eigen::ArrayXd probs = shifted / shifted.sum();

        Eigen::VectorXd d_pooled = (probs * norm_).matrix();
        d_pooled(labels_[j]) -= norm_;
        double dot = (probs * pooled_t.array()).sum();
        Eigen::VectorXd d_pooled_t =
            ((probs * pooled_t.array() - probs * dot) * norm_).matrix();

        double inv_n = 1.0 / static_cast<double>(cache.out().rows());
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(cache.out().rows());
        backward_hvp(params, lo, cache, tangent, w_tan, inv_n * ones * d_pooled.transpose(),
                     inv_n * ones * d_pooled_t.transpose(), hvp_w);
    }
    for (std::size_t k = 0; k < hvp_w.size(); ++k) hvp_w[k] += weight_decay_ * w_tan[k];
    return flatten_mats(hvp_w);
}

} // namespace gu
