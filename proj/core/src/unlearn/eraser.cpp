#include "gu/unlearn/eraser.hpp"

#include "gu/error.hpp"
#include "gu/propagation.hpp"
#include "gu/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace gu {

namespace {

// Seeded k-means++ initialization followed by Lloyd iterations; the
// final pass assigns points in index order to the nearest centroid that
// still has capacity.
std::vector<int> balanced_kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
    std::int64_t n = points.rows();
    Rng rng(derive_seed(seed, "kmeans"));

    std::vector<std::int64_t> centers;
    centers.push_back(static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(n))));
    Eigen::VectorXd dist2 = (points.rowwise() - points.row(centers[0])).rowwise().squaredNorm();
    while (static_cast<int>(centers.size()) < k) {
        double total = dist2.sum();
        std::int64_t chosen = 0;
        if (total <= 0.0) {
            chosen = static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        } else {
            double draw = rng.uniform() * total;
            double acc = 0.0;
            for (std::int64_t i = 0; i < n; ++i) {
                acc += dist2(i);
                if (acc >= draw) {
                    chosen = i;
                    break;
                }
            }
        }
        centers.push_back(chosen);
        dist2 = dist2.cwiseMin(
            (points.rowwise() - points.row(chosen)).rowwise().squaredNorm());
    }

    Eigen::MatrixXd centroids(k, points.cols());
    for (int c = 0; c < k; ++c) centroids.row(c) = points.row(centers[c]);

    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 25; ++iter) {
        bool changed = false;
        for (std::int64_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                double d = (points.row(i) - centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[static_cast<std::size_t>(i)] != best) {
                assign[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        for (std::int64_t i = 0; i < n; ++i) {
            sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0)
                centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }

    // capacity pass
    std::int64_t capacity = (n + k - 1) / k;
    std::vector<std::int64_t> load(static_cast<std::size_t>(k), 0);
    std::vector<int> final_assign(static_cast<std::size_t>(n), -1);
    for (std::int64_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> order;
        order.reserve(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c)
            order.emplace_back((points.row(i) - centroids.row(c)).squaredNorm(), c);
        std::sort(order.begin(), order.end());
        for (auto [d, c] : order) {
            if (load[static_cast<std::size_t>(c)] < capacity) {
                final_assign[static_cast<std::size_t>(i)] = c;
                ++load[static_cast<std::size_t>(c)];
                break;
            }
        }
    }
    return final_assign;
}

// Trains one shard model on the shard-induced subgraph. A link-task
// shard can end up with no internal edges; it is reported unusable
// instead of aborting the whole plan.
struct ShardModel {
    ModelParams params;
    bool usable = true;
};

ShardModel train_shard(const TrainConfig& cfg, const Graph& g,
                       const std::vector<NodeId>& shard_nodes, std::uint64_t shard_seed) {
    ApplyResult sub = induced_subgraph(g, shard_nodes);
    DataSplit all_train;
    all_train.mode = SplitMode::Transductive;
    all_train.train_ids.resize(static_cast<std::size_t>(sub.graph.node_count));
    for (std::size_t i = 0; i < all_train.train_ids.size(); ++i)
        all_train.train_ids[i] = static_cast<NodeId>(i);
    try {
        return {train(cfg, sub.graph, all_train, shard_seed), true};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoEdges) throw;
        std::int64_t out_dim = output_dim_for(cfg.task, sub.graph, cfg.backbone);
        return {init_params(cfg.backbone, g.feature_dim(), out_dim, shard_seed), false};
    }
}

std::vector<bool> touched_shards(const ShardPlan& plan, const UnlearnRequest& request) {
    std::vector<bool> touched(static_cast<std::size_t>(plan.k), false);
    auto mark = [&](NodeId v) {
        int s = plan.shard_of(v);
        if (s >= 0) touched[static_cast<std::size_t>(s)] = true;
    };
    switch (request.kind) {
        case RequestKind::Node:
            for (NodeId v : request.delta_v) mark(v);
            break;
        case RequestKind::Edge:
            for (const Edge& e : request.delta_e) {
                mark(e.u);
                mark(e.v);
            }
            break;
        case RequestKind::Feature:
            for (const FeatureMask& m : request.delta_x) mark(m.node);
            break;
    }
    return touched;
}

} // namespace

int ShardPlan::shard_of(NodeId v) const {
    auto it = std::lower_bound(train_nodes.begin(), train_nodes.end(), v);
    if (it == train_nodes.end() || *it != v) return -1;
    return assignment[static_cast<std::size_t>(it - train_nodes.begin())];
}

ShardPlan partition(const TrainConfig& cfg, const Graph& g, const DataSplit& split, int k,
                    std::uint64_t seed) {
    std::int64_t n_train = static_cast<std::int64_t>(split.train_ids.size());
    require(k >= 1 && k <= n_train, ErrorCode::InvalidK,
            "k must lie in [1, n_train=" + std::to_string(n_train) + "]");

    ShardPlan plan;
    plan.k = k;
    plan.config = cfg;
    plan.seed = seed;
    plan.train_nodes = split.train_ids;

    PropagationOperator adj = normalized_adjacency(g);
    Eigen::MatrixXd propagated = propagate(g.features, adj, 2);
    Eigen::MatrixXd points(n_train, g.feature_dim());
    for (std::int64_t i = 0; i < n_train; ++i)
        points.row(i) = propagated.row(plan.train_nodes[static_cast<std::size_t>(i)]);

    plan.assignment = balanced_kmeans(points, k, seed);
    plan.shards.assign(static_cast<std::size_t>(k), {});
    for (std::size_t i = 0; i < plan.train_nodes.size(); ++i)
        plan.shards[static_cast<std::size_t>(plan.assignment[i])].push_back(plan.train_nodes[i]);

    plan.active.assign(static_cast<std::size_t>(k), true);
    plan.models.reserve(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) {
        ShardModel shard = train_shard(cfg, g, plan.shards[static_cast<std::size_t>(s)],
                                       derive_seed(seed, static_cast<std::uint64_t>(s)));
        plan.active[static_cast<std::size_t>(s)] = shard.usable;
        plan.models.push_back(std::move(shard.params));
    }
    bool any_active = false;
    for (bool flag : plan.active) any_active = any_active || flag;
    require(any_active, ErrorCode::NoEdges, "every shard ended up without training data");
    return plan;
}

ShardPlan eraser_unlearn(const ShardPlan& plan, const Graph& g, const UnlearnRequest& request,
                         std::uint64_t seed) {
    validate_request(g, request);
    ShardPlan out = plan;
    std::vector<bool> touched = touched_shards(plan, request);

    ApplyResult residual = apply_request(g, request);
    for (int s = 0; s < plan.k; ++s) {
        if (!touched[static_cast<std::size_t>(s)]) continue; // untouched shards stay bit-identical
        std::vector<NodeId> retained_residual, retained_original;
        for (NodeId v : plan.shards[static_cast<std::size_t>(s)]) {
            NodeId nv = residual.id_map[static_cast<std::size_t>(v)];
            if (nv >= 0) {
                retained_residual.push_back(nv);
                retained_original.push_back(v);
            }
        }
        out.shards[static_cast<std::size_t>(s)] = retained_original;
        if (retained_residual.empty()) {
            out.active[static_cast<std::size_t>(s)] = false; // fully erased shard
            continue;
        }
        ShardModel shard = train_shard(plan.config, residual.graph, retained_residual,
                                       derive_seed(seed, static_cast<std::uint64_t>(s)));
        out.active[static_cast<std::size_t>(s)] = shard.usable;
        out.models[static_cast<std::size_t>(s)] = std::move(shard.params);
    }
    if (request.kind == RequestKind::Node) {
        std::vector<NodeId> new_train;
        std::vector<int> new_assign;
        for (std::size_t i = 0; i < out.train_nodes.size(); ++i)
            if (residual.id_map[static_cast<std::size_t>(out.train_nodes[i])] >= 0) {
                new_train.push_back(out.train_nodes[i]);
                new_assign.push_back(out.assignment[i]);
            }
        out.train_nodes = std::move(new_train);
        out.assignment = std::move(new_assign);
    }
    return out;
}

Eigen::MatrixXd aggregate_predict(const ShardPlan& plan, const Graph& g,
                                  const std::vector<NodeId>& ids) {
    Eigen::MatrixXd mean;
    ForwardWorkspace ws = make_workspace(g, plan.config.backbone.backbone);
    double voters = 0.0;
    for (std::size_t s = 0; s < plan.models.size(); ++s) {
        if (!plan.active.empty() && !plan.active[s]) continue;
        Eigen::MatrixXd probs = softmax_rows(forward(plan.models[s], g, &ws));
        Eigen::MatrixXd rows(static_cast<std::int64_t>(ids.size()), probs.cols());
        for (std::size_t i = 0; i < ids.size(); ++i)
            rows.row(static_cast<std::int64_t>(i)) = probs.row(ids[i]);
        if (mean.size() == 0)
            mean = rows;
        else
            mean += rows;
        voters += 1.0;
    }
    require(voters > 0.0, ErrorCode::EmptySet, "no active shards left");
    return mean / voters;
}

Eigen::VectorXd aggregate_score_edges(const ShardPlan& plan, const Graph& g,
                                      const std::vector<Edge>& pairs) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<std::int64_t>(pairs.size()));
    ForwardWorkspace ws = make_workspace(g, plan.config.backbone.backbone);
    double voters = 0.0;
    for (std::size_t s = 0; s < plan.models.size(); ++s) {
        if (!plan.active.empty() && !plan.active[s]) continue;
        mean += score_edges(plan.models[s], g, pairs, &ws);
        voters += 1.0;
    }
    require(voters > 0.0, ErrorCode::EmptySet, "no active shards left");
    return mean / voters;
}

std::string shard_plan_to_json(const ShardPlan& plan) {
    nlohmann::json doc;
    doc["k"] = plan.k;
    doc["train_nodes"] = plan.train_nodes;
    doc["assignment"] = plan.assignment;
    auto models = nlohmann::json::array();
    for (const ModelParams& m : plan.models)
        models.push_back(nlohmann::json::parse(params_to_json(m)));
    doc["models"] = models;
    doc["backbone"] = std::string(backbone_name(plan.config.backbone.backbone));
    doc["layers"] = plan.config.backbone.layers;
    doc["hidden"] = plan.config.backbone.hidden;
    doc["task"] = std::string(task_name(plan.config.task));
    doc["lr"] = plan.config.hyper.lr;
    doc["epochs"] = plan.config.hyper.epochs;
    doc["weight_decay"] = plan.config.hyper.weight_decay;
    doc["active"] = std::vector<int>(plan.active.begin(), plan.active.end());
    doc["seed"] = plan.seed;
    return doc.dump();
}

ShardPlan shard_plan_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("shard plan json: ") + e.what());
    }
    ShardPlan plan;
    try {
        plan.k = doc.at("k").get<int>();
        plan.train_nodes = doc.at("train_nodes").get<std::vector<NodeId>>();
        plan.assignment = doc.at("assignment").get<std::vector<int>>();
        for (const auto& m : doc.at("models"))
            plan.models.push_back(params_from_json(m.dump()));
        plan.config.backbone.backbone = backbone_from_name(doc.at("backbone").get<std::string>());
        plan.config.backbone.layers = doc.at("layers").get<int>();
        plan.config.backbone.hidden = doc.at("hidden").get<int>();
        plan.config.task = task_from_name(doc.at("task").get<std::string>());
        plan.config.hyper.lr = doc.at("lr").get<double>();
        plan.config.hyper.epochs = doc.at("epochs").get<int>();
        plan.config.hyper.weight_decay = doc.at("weight_decay").get<double>();
        for (int flag : doc.at("active").get<std::vector<int>>())
            plan.active.push_back(flag != 0);
        plan.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("shard plan json: ") + e.what());
    }
    plan.shards.assign(static_cast<std::size_t>(plan.k), {});
    for (std::size_t i = 0; i < plan.train_nodes.size(); ++i)
        plan.shards[static_cast<std::size_t>(plan.assignment[i])].push_back(plan.train_nodes[i]);
    return plan;
}

// ---- graph-set variant ---------------------------------------------------

GraphShardPlan partition_graphs(const TrainConfig& cfg, const GraphSet& gs, const DataSplit& split,
                                int k, std::uint64_t seed) {
    std::int64_t n_train = static_cast<std::int64_t>(split.train_ids.size());
    require(k >= 1 && k <= n_train, ErrorCode::InvalidK, "k must lie in [1, #train graphs]");

    GraphShardPlan plan;
    plan.k = k;
    plan.config = cfg;
    plan.seed = seed;
    plan.train_graphs = split.train_ids;

    std::int64_t f = gs.graphs.front().feature_dim();
    Eigen::MatrixXd points(n_train, f);
    for (std::int64_t i = 0; i < n_train; ++i) {
        const Graph& g = gs.graphs[static_cast<std::size_t>(plan.train_graphs[static_cast<std::size_t>(i)])];
        PropagationOperator adj = normalized_adjacency(g);
        points.row(i) = propagate(g.features, adj, 2).colwise().mean();
    }

    plan.assignment = balanced_kmeans(points, k, seed);
    plan.shards.assign(static_cast<std::size_t>(k), {});
    for (std::size_t i = 0; i < plan.train_graphs.size(); ++i)
        plan.shards[static_cast<std::size_t>(plan.assignment[i])].push_back(plan.train_graphs[i]);

    for (int s = 0; s < k; ++s) {
        DataSplit shard_split;
        shard_split.train_ids = plan.shards[static_cast<std::size_t>(s)];
        plan.models.push_back(train_graphs(cfg, gs, shard_split,
                                           derive_seed(seed, static_cast<std::uint64_t>(s))));
    }
    return plan;
}

GraphShardPlan eraser_unlearn_graphs(const GraphShardPlan& plan, const GraphSet& gs,
                                     const std::vector<std::pair<NodeId, UnlearnRequest>>& masks,
                                     std::uint64_t seed) {
    GraphShardPlan out = plan;
    std::vector<bool> touched(static_cast<std::size_t>(plan.k), false);
    GraphSet masked = gs;
    for (const auto& [graph_idx, request] : masks) {
        require(graph_idx >= 0 && graph_idx < gs.size(), ErrorCode::MissingTarget,
                "graph index out of range");
        require(request.kind == RequestKind::Feature, ErrorCode::KindMismatch,
                "graph-set unlearning handles feature requests");
        masked.graphs[static_cast<std::size_t>(graph_idx)] =
            apply_request(masked.graphs[static_cast<std::size_t>(graph_idx)], request).graph;
        for (std::size_t i = 0; i < plan.train_graphs.size(); ++i)
            if (plan.train_graphs[i] == graph_idx)
                touched[static_cast<std::size_t>(plan.assignment[i])] = true;
    }
    for (int s = 0; s < plan.k; ++s) {
        if (!touched[static_cast<std::size_t>(s)]) continue;
        DataSplit shard_split;
        shard_split.train_ids = plan.shards[static_cast<std::size_t>(s)];
        out.models[static_cast<std::size_t>(s)] = train_graphs(
            plan.config, masked, shard_split, derive_seed(seed, static_cast<std::uint64_t>(s)));
    }
    return out;
}

Eigen::MatrixXd aggregate_predict_graphs(const GraphShardPlan& plan, const GraphSet& gs,
                                         const std::vector<NodeId>& graph_ids) {
    Eigen::MatrixXd mean;
    for (const ModelParams& m : plan.models) {
        Eigen::MatrixXd rows(static_cast<std::int64_t>(graph_ids.size()), gs.num_classes);
        for (std::size_t i = 0; i < graph_ids.size(); ++i) {
            const Graph& g = gs.graphs[static_cast<std::size_t>(graph_ids[i])];
            Eigen::VectorXd pooled = forward(m, g).colwise().mean();
            rows.row(static_cast<std::int64_t>(i)) =
                softmax_rows(pooled.transpose()).row(0);
        }
        if (mean.size() == 0)
            mean = rows;
        else
            mean += rows;
    }
    return mean / static_cast<double>(plan.models.size());
}

} // namespace gu
