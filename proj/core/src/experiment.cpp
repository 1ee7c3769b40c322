#include "gu/experiment.hpp"

#include "gu/dataset_io.hpp"
#include "gu/error.hpp"
#include "gu/metrics.hpp"
#include "gu/perturb.hpp"
#include "gu/rng.hpp"
#include "gu/unlearn/eraser.hpp"
#include "gu/unlearn/gnndelete.hpp"
#include "gu/unlearn/influence.hpp"
#include "gu/unlearn/projector.hpp"
#include "gu/unlearn/retrain.hpp"
#include "gu/unlearn/utu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gu {

namespace {

template <typename F>
auto stage(const char* name, F&& fn) {
    try {
        return std::forward<F>(fn)();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + " stage: " + e.message());
    }
}

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        return std::hash<std::int64_t>()((e.u << 32) ^ e.v);
    }
};

TrainConfig train_config(const ExperimentConfig& cfg) {
    return TrainConfig{cfg.backbone, cfg.hyper, cfg.task};
}

// CGDiverged asks the caller to raise the damping; retry a few times
// with a 10x larger lambda before giving up.
template <typename F>
auto with_damping_escalation(InfluenceOptions opts, F&& attempt) {
    for (int tries = 0;; ++tries) {
        try {
            return attempt(opts);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::CGDiverged || tries >= 3) throw;
            opts.damping *= 10.0;
        }
    }
}

// ---- single-graph pipeline (node / link tasks) ----------------------------

struct RunContext {
    ExperimentConfig cfg;
    Graph graph; // deployed graph (poisoned when the audit asks for it)
    Graph clean; // pre-poison graph
    std::vector<Edge> poison_set;
    DataSplit split;
    ModelParams base; // plain base model (all methods but eraser)
    ShardPlan plan;   // eraser only
    std::vector<Edge> train_edges;
    std::string digest;
};

std::vector<Edge> edges_with_train_endpoints(const Graph& g, const DataSplit& split) {
    std::vector<Edge> out;
    for (const Edge& e : g.edges)
        if (split.is_train(e.u) && split.is_train(e.v)) out.push_back(e);
    return out;
}

Graph materialize_graph(const ExperimentConfig& cfg) {
    if (cfg.dataset.type == "dir") return load_dataset(cfg.dataset.path).graph;
    return synth_sbm(cfg.dataset.n, cfg.dataset.classes, cfg.dataset.p_in, cfg.dataset.p_out,
                     cfg.dataset.features, cfg.dataset.signal, derive_seed(cfg.seed, "dataset"));
}

void train_base(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    if (cfg.method == Method::Eraser)
        ctx.plan = partition(train_config(cfg), ctx.graph, ctx.split, cfg.method_params.k,
                             cfg.seed);
    else
        ctx.base = train(train_config(cfg), ctx.graph, ctx.split, cfg.seed);
}

RunContext prepare_run(const ExperimentConfig& cfg) {
    RunContext ctx;
    ctx.cfg = cfg;
    ctx.digest = config_digest(cfg);

    ctx.clean = stage("dataset", [&] { return materialize_graph(cfg); });
    ctx.split = stage("split", [&] {
        return split_dataset(ctx.clean, cfg.split.train_ratio, cfg.split.mode, cfg.seed);
    });

    ctx.graph = ctx.clean;
    if (cfg.attacks.poison) {
        PoisonResult poisoned = stage("poison", [&] {
            return poison(ctx.clean, cfg.attacks.poison_ratio, derive_seed(cfg.seed, "attack"));
        });
        ctx.graph = std::move(poisoned.poisoned);
        ctx.poison_set = std::move(poisoned.poison_set);
    }

    stage("train", [&] {
        train_base(ctx);
        return 0;
    });
    ctx.train_edges = edges_with_train_endpoints(ctx.graph, ctx.split);
    return ctx;
}

// prepare_run with a perturbation applied between splitting and training
RunContext prepare_run_perturbed(const ExperimentConfig& cfg, const std::string& kind,
                                 double level) {
    RunContext ctx;
    ctx.cfg = cfg;
    ctx.digest = config_digest(cfg);

    ctx.clean = stage("dataset", [&] { return materialize_graph(cfg); });
    ctx.split = stage("split", [&] {
        return split_dataset(ctx.clean, cfg.split.train_ratio, cfg.split.mode, cfg.seed);
    });

    stage("perturb", [&] {
        PerturbSpec spec = LabelNoise{level};
        if (kind == "feature_noise") spec = FeatureNoise{level};
        if (kind == "label_sparsity") spec = LabelSparsity{1.0 - level};
        if (kind == "feature_sparsity") spec = FeatureSparsity{level};
        PerturbResult result =
            perturb(ctx.clean, ctx.split, spec, derive_seed(cfg.seed, "perturb"));
        ctx.clean = std::move(result.graph);
        if (result.label_mask) {
            std::vector<NodeId> kept;
            for (NodeId v : ctx.split.train_ids)
                if ((*result.label_mask)[static_cast<std::size_t>(v)]) kept.push_back(v);
            ctx.split.train_ids = std::move(kept);
        }
        return 0;
    });

    ctx.graph = ctx.clean;
    stage("train", [&] {
        train_base(ctx);
        return 0;
    });
    ctx.train_edges = edges_with_train_endpoints(ctx.graph, ctx.split);
    return ctx;
}

UnlearnRequest materialize_request(const RunContext& ctx, double ratio) {
    const ExperimentConfig& cfg = ctx.cfg;
    if (cfg.attacks.poison)
        return make_request(RequestKind::Edge,
                            {.nodes = {}, .edges = ctx.poison_set, .features = {}});
    if (!cfg.request.target_nodes.empty() || !cfg.request.target_edges.empty()) {
        RequestTargets targets;
        targets.edges = cfg.request.target_edges;
        if (cfg.request.kind == RequestKind::Feature)
            for (NodeId v : cfg.request.target_nodes) targets.features.push_back({v, {}});
        else
            targets.nodes = cfg.request.target_nodes;
        return make_request(cfg.request.kind, targets);
    }

    Rng rng(derive_seed(cfg.seed, "request"));
    RequestTargets targets;
    switch (cfg.request.kind) {
        case RequestKind::Node:
        case RequestKind::Feature: {
            std::size_t count = static_cast<std::size_t>(
                std::llround(ratio * static_cast<double>(ctx.split.train_ids.size())));
            auto picked = rng.sample_without_replacement(ctx.split.train_ids.size(), count);
            std::sort(picked.begin(), picked.end());
            for (std::size_t idx : picked) {
                NodeId v = ctx.split.train_ids[idx];
                if (cfg.request.kind == RequestKind::Node)
                    targets.nodes.push_back(v);
                else
                    targets.features.push_back({v, {}});
            }
            break;
        }
        case RequestKind::Edge: {
            std::size_t count = static_cast<std::size_t>(
                std::llround(ratio * static_cast<double>(ctx.train_edges.size())));
            auto picked = rng.sample_without_replacement(ctx.train_edges.size(), count);
            std::sort(picked.begin(), picked.end());
            for (std::size_t idx : picked) targets.edges.push_back(ctx.train_edges[idx]);
            break;
        }
    }
    bool empty = targets.nodes.empty() && targets.edges.empty() && targets.features.empty();
    require(!empty, ErrorCode::EmptyRequest, "request ratio materialized zero targets");
    return make_request(cfg.request.kind, targets);
}

/// The unlearned predictor: a graph to run inference on, closures for
/// class probabilities and link scores over that graph, and an audit
/// predictor over the original deployed graph (removed entities still
/// have rows there, which the membership audit needs).
struct Unlearned {
    Graph graph;                // inference graph after unlearning
    std::vector<NodeId> id_map; // original -> inference graph ids
    NodeProbFn proba;
    LinkScorer scorer;
    NodeProbFn audit_proba;
};

Unlearned run_unlearn(RunContext& ctx, const UnlearnRequest& request, MetricsReport& report,
                      MemProbe& probe) {
    const ExperimentConfig& cfg = ctx.cfg;
    std::vector<NodeId> identity(static_cast<std::size_t>(ctx.graph.node_count));
    for (NodeId v = 0; v < ctx.graph.node_count; ++v) identity[static_cast<std::size_t>(v)] = v;

    LossSpec loss{cfg.task, cfg.hyper.weight_decay, cfg.seed};
    Unlearned out;
    switch (cfg.method) {
        case Method::Retrain: {
            auto profiled = profile([&] {
                return retrain_oracle(train_config(cfg), ctx.graph, ctx.split, request, cfg.seed);
            });
            report.unlearn_seconds = profiled.wall_seconds;
            report.peak_bytes = profiled.peak_bytes;
            probe = profiled.probe;
            RetrainResult& res = profiled.value;
            out.graph = std::move(res.residual.graph);
            out.id_map = std::move(res.residual.id_map);
            out.proba = make_prob_fn(res.params, out.graph);
            out.scorer = make_link_scorer(res.params, out.graph);
            out.audit_proba = make_prob_fn(res.params, ctx.graph);
            return out;
        }
        case Method::Eraser: {
            auto profiled = profile(
                [&] { return eraser_unlearn(ctx.plan, ctx.graph, request, ctx.plan.seed); });
            report.unlearn_seconds = profiled.wall_seconds;
            report.peak_bytes = profiled.peak_bytes;
            probe = profiled.probe;
            ShardPlan plan = std::move(profiled.value);
            ApplyResult residual = apply_request(ctx.graph, request);
            out.graph = std::move(residual.graph);
            out.id_map = std::move(residual.id_map);
            Graph graph_copy = out.graph;
            out.proba = [plan, graph_copy](const std::vector<NodeId>& ids) {
                return aggregate_predict(plan, graph_copy, ids);
            };
            out.scorer = [plan, graph_copy](const std::vector<Edge>& pairs) {
                return aggregate_score_edges(plan, graph_copy, pairs);
            };
            Graph deployed = ctx.graph;
            out.audit_proba = [plan, deployed](const std::vector<NodeId>& ids) {
                return aggregate_predict(plan, deployed, ids);
            };
            return out;
        }
        case Method::Gif:
        case Method::Ceu: {
            auto profiled = profile([&] {
                return with_damping_escalation(
                    cfg.method_params.influence, [&](const InfluenceOptions& opts) {
                        return cfg.method == Method::Gif
                                   ? gif_unlearn(ctx.base, ctx.graph, ctx.split, request, loss,
                                                 opts)
                                   : ceu_unlearn(ctx.base, ctx.graph, ctx.split, request.delta_e,
                                                 loss, opts);
                    });
            });
            report.unlearn_seconds = profiled.wall_seconds;
            report.peak_bytes = profiled.peak_bytes;
            probe = profiled.probe;
            ApplyResult residual = apply_request(ctx.graph, request);
            out.graph = std::move(residual.graph);
            out.id_map = std::move(residual.id_map);
            out.proba = make_prob_fn(profiled.value, out.graph);
            out.scorer = make_link_scorer(profiled.value, out.graph);
            out.audit_proba = make_prob_fn(profiled.value, ctx.graph);
            return out;
        }
        case Method::GnnDelete: {
            auto profiled = profile([&] {
                return gnndelete_unlearn(ctx.base, ctx.graph, ctx.split, request,
                                         cfg.method_params.gnndelete,
                                         derive_seed(cfg.seed, "gnndelete"));
            });
            report.unlearn_seconds = profiled.wall_seconds;
            report.peak_bytes = profiled.peak_bytes;
            probe = profiled.probe;
            DeletionModel model = std::move(profiled.value);
            out.graph = ctx.graph; // unlinking happens inside the model's forward
            out.id_map = identity;
            Graph graph_copy = ctx.graph;
            out.proba = [model, graph_copy](const std::vector<NodeId>& ids) {
                Eigen::MatrixXd probs = predict_proba_deleted(model, graph_copy);
                Eigen::MatrixXd rows(static_cast<std::int64_t>(ids.size()), probs.cols());
                for (std::size_t i = 0; i < ids.size(); ++i)
                    rows.row(static_cast<std::int64_t>(i)) = probs.row(ids[i]);
                return rows;
            };
            out.scorer = [model, graph_copy](const std::vector<Edge>& pairs) {
                return score_edges_deleted(model, graph_copy, pairs);
            };
            out.audit_proba = out.proba;
            return out;
        }
        case Method::Utu: {
            auto profiled = profile([&] { return utu_apply(ctx.graph, request); });
            report.unlearn_seconds = profiled.wall_seconds;
            report.peak_bytes = profiled.peak_bytes;
            probe = profiled.probe;
            out.graph = std::move(profiled.value);
            out.id_map = identity;
            out.proba = make_prob_fn(ctx.base, out.graph);
            out.scorer = make_link_scorer(ctx.base, out.graph);
            out.audit_proba = out.proba;
            return out;
        }
        case Method::Projector: {
            auto profiled = profile(
                [&] { return projector_unlearn(ctx.base, ctx.graph, ctx.split, request); });
            report.unlearn_seconds = profiled.wall_seconds;
            report.peak_bytes = profiled.peak_bytes;
            probe = profiled.probe;
            ApplyResult residual = apply_request(ctx.graph, request);
            out.graph = std::move(residual.graph);
            out.id_map = std::move(residual.id_map);
            out.proba = make_prob_fn(profiled.value, out.graph);
            out.scorer = make_link_scorer(profiled.value, out.graph);
            out.audit_proba = make_prob_fn(profiled.value, ctx.graph);
            return out;
        }
    }
    fail(ErrorCode::UnknownMethod, "unreachable method");
}

Unlearned baseline_predictor(const RunContext& ctx) {
    Unlearned out;
    out.graph = ctx.graph;
    out.id_map.resize(static_cast<std::size_t>(ctx.graph.node_count));
    for (NodeId v = 0; v < ctx.graph.node_count; ++v) out.id_map[static_cast<std::size_t>(v)] = v;
    if (ctx.cfg.method == Method::Eraser) {
        Graph graph_copy = ctx.graph;
        ShardPlan plan = ctx.plan;
        out.proba = [plan, graph_copy](const std::vector<NodeId>& ids) {
            return aggregate_predict(plan, graph_copy, ids);
        };
        out.scorer = [plan, graph_copy](const std::vector<Edge>& pairs) {
            return aggregate_score_edges(plan, graph_copy, pairs);
        };
    } else {
        out.proba = make_prob_fn(ctx.base, ctx.graph);
        out.scorer = make_link_scorer(ctx.base, ctx.graph);
    }
    out.audit_proba = out.proba;
    return out;
}

void evaluate_node_task(const RunContext& ctx, const Unlearned& unlearned, MetricsReport& report) {
    std::vector<NodeId> test_rows;
    std::vector<int> labels;
    for (NodeId v : ctx.split.test_ids) {
        NodeId nv = unlearned.id_map[static_cast<std::size_t>(v)];
        if (nv < 0) continue;
        test_rows.push_back(nv);
        labels.push_back((*ctx.clean.labels)(v));
    }
    Eigen::MatrixXd probs = unlearned.proba(test_rows);
    std::vector<int> preds = to_int_vector(argmax_rows(probs));
    report.metrics["f1_micro"] = f1(preds, labels, F1Mode::Micro);
    report.metrics["f1_macro"] = f1(preds, labels, F1Mode::Macro);
    report.metrics["accuracy"] = accuracy(preds, labels);
}

std::pair<std::vector<Edge>, std::vector<Edge>> link_eval_sets(const RunContext& ctx) {
    // positives: clean edges outside the train-positive set; negatives:
    // seeded non-edges of the deployed graph, count-matched
    std::unordered_set<Edge, EdgeHash> train_set(ctx.train_edges.begin(), ctx.train_edges.end());
    std::vector<Edge> positives;
    for (const Edge& e : ctx.clean.edges)
        if (!train_set.count(e)) positives.push_back(e);
    require(!positives.empty(), ErrorCode::EmptySet, "no held-out edges to evaluate");

    std::unordered_set<Edge, EdgeHash> taken(ctx.graph.edges.begin(), ctx.graph.edges.end());
    std::vector<Edge> negatives;
    Rng rng(derive_seed(ctx.cfg.seed, "eval_negatives"));
    std::size_t attempts = 0, limit = 200 * positives.size() + 10000;
    while (negatives.size() < positives.size()) {
        require(attempts++ < limit, ErrorCode::InsufficientCandidates,
                "could not sample evaluation negatives");
        NodeId a = static_cast<NodeId>(
            rng.uniform_int(static_cast<std::uint64_t>(ctx.graph.node_count)));
        NodeId b = static_cast<NodeId>(
            rng.uniform_int(static_cast<std::uint64_t>(ctx.graph.node_count)));
        if (a == b) continue;
        Edge e(a, b);
        if (!taken.insert(e).second) continue;
        negatives.push_back(e);
    }
    return {positives, negatives};
}

void evaluate_link_task(const RunContext& ctx, const Unlearned& unlearned, MetricsReport& report) {
    auto [positives, negatives] = link_eval_sets(ctx);
    auto translate = [&](const std::vector<Edge>& pairs) {
        std::vector<Edge> out;
        for (const Edge& e : pairs) {
            NodeId nu = unlearned.id_map[static_cast<std::size_t>(e.u)];
            NodeId nv = unlearned.id_map[static_cast<std::size_t>(e.v)];
            if (nu >= 0 && nv >= 0) out.emplace_back(nu, nv);
        }
        return out;
    };
    std::vector<Edge> pos = translate(positives);
    std::vector<Edge> neg = translate(negatives);
    std::vector<Edge> all = pos;
    all.insert(all.end(), neg.begin(), neg.end());
    std::vector<int> labels(all.size(), 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(pos.size()), 1);
    report.metrics["auc"] = auc(to_double_vector(unlearned.scorer(all)), labels);
}

void run_attacks(const RunContext& ctx, const UnlearnRequest& request, const Unlearned& unlearned,
                 MetricsReport& report) {
    const ExperimentConfig& cfg = ctx.cfg;
    if (cfg.attacks.mia) {
        std::vector<NodeId> members;
        if (cfg.attacks.mia_members == "train") {
            members = ctx.split.train_ids;
        } else {
            switch (request.kind) {
                case RequestKind::Node:
                    members = request.delta_v;
                    break;
                case RequestKind::Feature:
                    for (const FeatureMask& m : request.delta_x) members.push_back(m.node);
                    break;
                case RequestKind::Edge:
                    for (const Edge& e : request.delta_e) {
                        if (ctx.split.is_train(e.u)) members.push_back(e.u);
                        if (ctx.split.is_train(e.v)) members.push_back(e.v);
                    }
                    std::sort(members.begin(), members.end());
                    members.erase(std::unique(members.begin(), members.end()), members.end());
                    break;
            }
        }
        AttackReport attack = mia_auc(unlearned.audit_proba, ctx.graph, members,
                                      ctx.split.test_ids, *ctx.clean.labels);
        attack.seed = derive_seed(cfg.seed, "attack");
        report.attack = attack;
    }
    if (cfg.attacks.poison) {
        auto [positives, negatives] = link_eval_sets(ctx);
        LinkScorer before = cfg.method == Method::Eraser
                                ? LinkScorer([&ctx](const std::vector<Edge>& pairs) {
                                      return aggregate_score_edges(ctx.plan, ctx.graph, pairs);
                                  })
                                : make_link_scorer(ctx.base, ctx.graph);
        auto translate = [&](const std::vector<Edge>& pairs) {
            std::vector<Edge> out;
            for (const Edge& e : pairs)
                out.emplace_back(unlearned.id_map[static_cast<std::size_t>(e.u)],
                                 unlearned.id_map[static_cast<std::size_t>(e.v)]);
            return out;
        };
        LinkScorer after = [&](const std::vector<Edge>& pairs) {
            return unlearned.scorer(translate(pairs));
        };
        AttackReport attack =
            poison_recovery(before, after, ctx.clean, positives, negatives, &ctx.poison_set);
        attack.seed = derive_seed(cfg.seed, "attack");
        report.attack = attack;
    }
}

MetricsReport execute_run(RunContext& ctx, double level, const std::string& series) {
    const ExperimentConfig& cfg = ctx.cfg;
    MetricsReport report;
    report.method = std::string(method_name(cfg.method));
    report.backbone = std::string(backbone_name(cfg.backbone.backbone));
    report.task = std::string(task_name(cfg.task));
    report.request_kind = std::string(request_kind_name(cfg.request.kind));
    report.level = level;
    report.series = series;
    report.seed = cfg.seed;
    report.digest = ctx.digest;

    auto total = profile([&] {
        bool has_request = true;
        if (!cfg.attacks.poison && cfg.request.target_nodes.empty() &&
            cfg.request.target_edges.empty()) {
            std::size_t base_count = cfg.request.kind == RequestKind::Edge
                                         ? ctx.train_edges.size()
                                         : ctx.split.train_ids.size();
            has_request = static_cast<std::size_t>(std::llround(
                              cfg.request.ratio * static_cast<double>(base_count))) > 0;
        }

        if (!has_request) {
            // nothing to unlearn: report the base model as-is
            Unlearned baseline = baseline_predictor(ctx);
            stage("evaluate", [&] {
                if (cfg.task == Task::Node)
                    evaluate_node_task(ctx, baseline, report);
                else
                    evaluate_link_task(ctx, baseline, report);
                return 0;
            });
            return 0;
        }

        UnlearnRequest materialized =
            stage("request", [&] { return materialize_request(ctx, cfg.request.ratio); });

        MemProbe probe = MemProbe::None;
        Unlearned unlearned =
            stage("unlearn", [&] { return run_unlearn(ctx, materialized, report, probe); });
        report.mem_probe = std::string(mem_probe_name(probe));

        stage("evaluate", [&] {
            if (cfg.task == Task::Node)
                evaluate_node_task(ctx, unlearned, report);
            else
                evaluate_link_task(ctx, unlearned, report);
            return 0;
        });
        stage("attack", [&] {
            run_attacks(ctx, materialized, unlearned, report);
            return 0;
        });
        return 0;
    });
    report.total_seconds = total.wall_seconds;
    return report;
}

// ---- graph-set pipeline ----------------------------------------------------

Eigen::MatrixXd pooled_proba(const ModelParams& params, const GraphSet& gs,
                             const std::vector<NodeId>& ids) {
    Eigen::MatrixXd rows(static_cast<std::int64_t>(ids.size()), gs.num_classes);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        Eigen::VectorXd pooled =
            forward(params, gs.graphs[static_cast<std::size_t>(ids[i])]).colwise().mean();
        rows.row(static_cast<std::int64_t>(i)) = softmax_rows(pooled.transpose()).row(0);
    }
    return rows;
}

MetricsReport run_graph_experiment(const ExperimentConfig& cfg) {
    MetricsReport report;
    report.method = std::string(method_name(cfg.method));
    report.backbone = std::string(backbone_name(cfg.backbone.backbone));
    report.task = "graph";
    report.request_kind = "feature";
    report.level = cfg.request.ratio;
    report.seed = cfg.seed;
    report.digest = config_digest(cfg);

    auto total = profile([&] {
        GraphSet gs = stage("dataset", [&] {
            require(cfg.dataset.type == "sbm_set", ErrorCode::UnsupportedCombination,
                    "graph task needs dataset.type sbm_set");
            return synth_graph_set(cfg.dataset.set_params, derive_seed(cfg.seed, "dataset"));
        });
        DataSplit split =
            stage("split", [&] { return split_graph_set(gs, cfg.split.train_ratio, cfg.seed); });

        // half of the training graphs get `ratio` of their node features
        // zeroed to whole-zero vectors
        std::vector<std::pair<NodeId, UnlearnRequest>> masks = stage("request", [&] {
            std::vector<std::pair<NodeId, UnlearnRequest>> out;
            Rng rng(derive_seed(cfg.seed, "request"));
            auto chosen =
                rng.sample_without_replacement(split.train_ids.size(), split.train_ids.size() / 2);
            std::sort(chosen.begin(), chosen.end());
            for (std::size_t idx : chosen) {
                NodeId graph_idx = split.train_ids[idx];
                const Graph& g = gs.graphs[static_cast<std::size_t>(graph_idx)];
                std::size_t masked_count = static_cast<std::size_t>(
                    std::llround(cfg.request.ratio * static_cast<double>(g.node_count)));
                if (masked_count == 0) continue;
                auto nodes = rng.sample_without_replacement(
                    static_cast<std::size_t>(g.node_count), masked_count);
                std::sort(nodes.begin(), nodes.end());
                RequestTargets targets;
                for (std::size_t v : nodes)
                    targets.features.push_back({static_cast<NodeId>(v), {}});
                out.emplace_back(graph_idx, make_request(RequestKind::Feature, targets));
            }
            return out;
        });

        GraphSet masked = gs;
        for (const auto& [graph_idx, request] : masks)
            masked.graphs[static_cast<std::size_t>(graph_idx)] =
                apply_request(masked.graphs[static_cast<std::size_t>(graph_idx)], request).graph;

        NodeProbFn predict;
        MemProbe probe = MemProbe::None;
        stage("unlearn", [&] {
            TrainConfig tc = train_config(cfg);
            switch (cfg.method) {
                case Method::Retrain: {
                    auto profiled =
                        profile([&] { return train_graphs(tc, masked, split, cfg.seed); });
                    report.unlearn_seconds = profiled.wall_seconds;
                    report.peak_bytes = profiled.peak_bytes;
                    probe = profiled.probe;
                    ModelParams params = std::move(profiled.value);
                    predict = [params, masked](const std::vector<NodeId>& ids) {
                        return pooled_proba(params, masked, ids);
                    };
                    break;
                }
                case Method::Eraser: {
                    GraphShardPlan plan =
                        partition_graphs(tc, gs, split, cfg.method_params.k, cfg.seed);
                    auto profiled = profile(
                        [&] { return eraser_unlearn_graphs(plan, gs, masks, plan.seed); });
                    report.unlearn_seconds = profiled.wall_seconds;
                    report.peak_bytes = profiled.peak_bytes;
                    probe = profiled.probe;
                    GraphShardPlan updated = std::move(profiled.value);
                    predict = [updated, masked](const std::vector<NodeId>& ids) {
                        return aggregate_predict_graphs(updated, masked, ids);
                    };
                    break;
                }
                case Method::Gif: {
                    ModelParams base = train_graphs(tc, gs, split, cfg.seed);
                    LossSpec loss{Task::Graph, cfg.hyper.weight_decay, cfg.seed};
                    auto profiled = profile([&] {
                        return with_damping_escalation(
                            cfg.method_params.influence, [&](const InfluenceOptions& opts) {
                                return gif_unlearn_graphs(base, gs, split, masks, loss, opts);
                            });
                    });
                    report.unlearn_seconds = profiled.wall_seconds;
                    report.peak_bytes = profiled.peak_bytes;
                    probe = profiled.probe;
                    ModelParams params = std::move(profiled.value);
                    predict = [params, masked](const std::vector<NodeId>& ids) {
                        return pooled_proba(params, masked, ids);
                    };
                    break;
                }
                default:
                    fail(ErrorCode::UnsupportedCombination,
                         "graph task supports retrain, eraser, gif");
            }
            return 0;
        });
        report.mem_probe = std::string(mem_probe_name(probe));

        stage("evaluate", [&] {
            Eigen::MatrixXd probs = predict(split.test_ids);
            std::vector<int> preds = to_int_vector(argmax_rows(probs));
            std::vector<int> labels;
            for (NodeId idx : split.test_ids) labels.push_back(gs.graph_labels(idx));
            report.metrics["accuracy"] = accuracy(preds, labels);
            report.metrics["f1_micro"] = f1(preds, labels, F1Mode::Micro);
            return 0;
        });
        return 0;
    });
    report.total_seconds = total.wall_seconds;
    return report;
}

} // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
    validate_combination(cfg);
    if (cfg.task == Task::Graph) return run_graph_experiment(cfg);
    RunContext ctx = prepare_run(cfg);
    return execute_run(ctx, cfg.request.ratio, "");
}

std::vector<MetricsReport> sweep_intensity(const ExperimentConfig& base,
                                           const std::vector<double>& ratios) {
    require(std::is_sorted(ratios.begin(), ratios.end()), ErrorCode::InvalidRatio,
            "ratios must be sorted");
    for (double r : ratios)
        require(r >= 0.0 && r <= 0.5, ErrorCode::InvalidRatio,
                "intensity ratios must lie in [0, 0.5]");
    validate_combination(base);
    require(base.task != Task::Graph, ErrorCode::UnsupportedCombination,
            "intensity sweeps cover node/link tasks");

    RunContext ctx = prepare_run(base); // shared pretrained base model
    std::vector<MetricsReport> out;
    for (double ratio : ratios) {
        ctx.cfg.request.ratio = ratio;
        out.push_back(execute_run(ctx, ratio, "ratio"));
    }
    return out;
}

std::vector<MetricsReport> sweep_perturbation(const ExperimentConfig& base,
                                              const std::string& kind,
                                              const std::vector<double>& levels) {
    validate_combination(base);
    require(base.task != Task::Graph, ErrorCode::UnsupportedCombination,
            "perturbation sweeps cover node/link tasks");
    require(kind == "label_noise" || kind == "feature_noise" || kind == "label_sparsity" ||
                kind == "feature_sparsity",
            ErrorCode::ParseError, "unknown perturbation kind '" + kind + "'");

    std::vector<MetricsReport> out;
    for (double level : levels) {
        require(level >= 0.0 && level <= 1.0, ErrorCode::InvalidRatio,
                "perturbation level outside [0,1]");
        RunContext ctx = prepare_run_perturbed(base, kind, level);
        out.push_back(execute_run(ctx, level, kind));
    }
    return out;
}

} // namespace gu
