#include "gu/config.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gu {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        require(known.count(it.key()) > 0, ErrorCode::ParseError,
                "unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, "key '" + key + "': " + e.what());
    }
}

DatasetSpec parse_dataset(const json& obj) {
    DatasetSpec spec;
    reject_unknown_keys(obj, {"type", "n", "classes", "p_in", "p_out", "features", "signal",
                              "path", "graphs_per_class", "graph_classes", "nodes_min",
                              "nodes_max", "node_classes"},
                        "dataset");
    spec.type = get_or<std::string>(obj, "type", "sbm");
    require(spec.type == "sbm" || spec.type == "dir" || spec.type == "sbm_set",
            ErrorCode::ParseError, "dataset.type must be sbm, dir, or sbm_set");
    if (spec.type == "dir") {
        require(obj.contains("path"), ErrorCode::ParseError, "dataset.type dir needs a path");
        spec.path = obj.at("path").get<std::string>();
        return spec;
    }
    if (spec.type == "sbm_set") {
        spec.set_params.graphs_per_class = get_or<std::int64_t>(obj, "graphs_per_class", 30);
        spec.set_params.graph_classes = get_or<int>(obj, "graph_classes", 2);
        spec.set_params.nodes_min = get_or<std::int64_t>(obj, "nodes_min", 20);
        spec.set_params.nodes_max = get_or<std::int64_t>(obj, "nodes_max", 32);
        spec.set_params.node_classes = get_or<int>(obj, "node_classes", 2);
        spec.set_params.f = get_or<std::int64_t>(obj, "features", 8);
        spec.set_params.signal = get_or<double>(obj, "signal", 1.0);
        return spec;
    }
    spec.n = get_or<std::int64_t>(obj, "n", 300);
    spec.classes = get_or<int>(obj, "classes", 3);
    spec.p_in = get_or<double>(obj, "p_in", 0.10);
    spec.p_out = get_or<double>(obj, "p_out", 0.01);
    spec.features = get_or<std::int64_t>(obj, "features", 10);
    spec.signal = get_or<double>(obj, "signal", 2.0);
    return spec;
}

} // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Retrain: return "retrain";
        case Method::Eraser: return "eraser";
        case Method::Gif: return "gif";
        case Method::Ceu: return "ceu";
        case Method::GnnDelete: return "gnndelete";
        case Method::Utu: return "utu";
        case Method::Projector: return "projector";
    }
    return "?";
}

Method method_from_name(std::string_view name) {
    for (Method m : {Method::Retrain, Method::Eraser, Method::Gif, Method::Ceu, Method::GnnDelete,
                     Method::Utu, Method::Projector})
        if (name == method_name(m)) return m;
    fail(ErrorCode::UnknownMethod,
         "unknown method '" + std::string(name) +
             "'; supported: retrain, eraser, gif, ceu, gnndelete, utu, projector");
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
    require(doc.is_object(), ErrorCode::ParseError, "config must be a JSON object");
    reject_unknown_keys(doc, {"dataset", "task", "backbone", "hyper", "method", "method_params",
                              "request", "split", "attacks", "seed"},
                        "config");

    ExperimentConfig cfg;
    require(doc.contains("seed"), ErrorCode::ParseError, "config needs a seed");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.task = task_from_name(get_or<std::string>(doc, "task", "node"));
    cfg.method = method_from_name(get_or<std::string>(doc, "method", "retrain"));

    if (doc.contains("dataset")) cfg.dataset = parse_dataset(doc.at("dataset"));

    if (doc.contains("backbone")) {
        const json& b = doc.at("backbone");
        reject_unknown_keys(b, {"name", "layers", "hidden"}, "backbone");
        cfg.backbone.backbone = backbone_from_name(get_or<std::string>(b, "name", "sgc"));
        cfg.backbone.layers = get_or<int>(b, "layers", 2);
        cfg.backbone.hidden = get_or<int>(b, "hidden", 16);
        require(cfg.backbone.layers >= 1, ErrorCode::ParseError, "backbone.layers must be >= 1");
    }
    if (doc.contains("hyper")) {
        const json& h = doc.at("hyper");
        reject_unknown_keys(h, {"lr", "epochs", "weight_decay"}, "hyper");
        cfg.hyper.lr = get_or<double>(h, "lr", cfg.hyper.lr);
        cfg.hyper.epochs = get_or<int>(h, "epochs", cfg.hyper.epochs);
        cfg.hyper.weight_decay = get_or<double>(h, "weight_decay", cfg.hyper.weight_decay);
        require(cfg.hyper.epochs >= 0, ErrorCode::ParseError, "hyper.epochs must be >= 0");
    }
    if (doc.contains("method_params")) {
        const json& m = doc.at("method_params");
        reject_unknown_keys(m, {"k", "damping", "cg_iters", "cg_tol", "epochs", "alpha", "lr"},
                            "method_params");
        cfg.method_params.k = get_or<int>(m, "k", cfg.method_params.k);
        cfg.method_params.influence.damping =
            get_or<double>(m, "damping", cfg.method_params.influence.damping);
        cfg.method_params.influence.cg_iters =
            get_or<int>(m, "cg_iters", cfg.method_params.influence.cg_iters);
        cfg.method_params.influence.cg_tol =
            get_or<double>(m, "cg_tol", cfg.method_params.influence.cg_tol);
        cfg.method_params.gnndelete.epochs =
            get_or<int>(m, "epochs", cfg.method_params.gnndelete.epochs);
        cfg.method_params.gnndelete.alpha =
            get_or<double>(m, "alpha", cfg.method_params.gnndelete.alpha);
        cfg.method_params.gnndelete.lr = get_or<double>(m, "lr", cfg.method_params.gnndelete.lr);
    }
    if (doc.contains("request")) {
        const json& r = doc.at("request");
        reject_unknown_keys(r, {"kind", "ratio", "nodes", "edges"}, "request");
        std::string kind = get_or<std::string>(r, "kind", "node");
        if (kind == "node")
            cfg.request.kind = RequestKind::Node;
        else if (kind == "edge")
            cfg.request.kind = RequestKind::Edge;
        else if (kind == "feature")
            cfg.request.kind = RequestKind::Feature;
        else
            fail(ErrorCode::ParseError, "request.kind must be node, edge, or feature");
        cfg.request.ratio = get_or<double>(r, "ratio", cfg.request.ratio);
        require(cfg.request.ratio >= 0.0 && cfg.request.ratio <= 1.0, ErrorCode::InvalidRatio,
                "request.ratio outside [0,1]");
        cfg.request.target_nodes = get_or<std::vector<NodeId>>(r, "nodes", {});
        if (r.contains("edges"))
            for (const auto& pair : r.at("edges")) {
                require(pair.is_array() && pair.size() == 2, ErrorCode::ParseError,
                        "request.edges entries must be [u,v] pairs");
                cfg.request.target_edges.emplace_back(pair[0].get<NodeId>(),
                                                      pair[1].get<NodeId>());
            }
    }
    if (doc.contains("split")) {
        const json& s = doc.at("split");
        reject_unknown_keys(s, {"train_ratio", "mode"}, "split");
        cfg.split.train_ratio = get_or<double>(s, "train_ratio", 0.8);
        require(cfg.split.train_ratio >= 0.0 && cfg.split.train_ratio <= 1.0,
                ErrorCode::InvalidRatio, "split.train_ratio outside [0,1]");
        std::string mode = get_or<std::string>(s, "mode", "transductive");
        if (mode == "transductive")
            cfg.split.mode = SplitMode::Transductive;
        else if (mode == "inductive")
            cfg.split.mode = SplitMode::Inductive;
        else
            fail(ErrorCode::ParseError, "split.mode must be transductive or inductive");
    }
    if (doc.contains("attacks")) {
        const json& a = doc.at("attacks");
        if (a.is_array()) {
            for (const auto& entry : a) {
                std::string name = entry.get<std::string>();
                if (name == "mia")
                    cfg.attacks.mia = true;
                else if (name == "poison")
                    cfg.attacks.poison = true;
                else
                    fail(ErrorCode::ParseError, "unknown attack '" + name + "'");
            }
        } else {
            reject_unknown_keys(a, {"mia", "poison", "mia_members", "poison_ratio"}, "attacks");
            cfg.attacks.mia = get_or<bool>(a, "mia", false);
            cfg.attacks.poison = get_or<bool>(a, "poison", false);
            cfg.attacks.mia_members = get_or<std::string>(a, "mia_members", "unlearned");
            cfg.attacks.poison_ratio = get_or<double>(a, "poison_ratio", 0.10);
            require(cfg.attacks.mia_members == "unlearned" || cfg.attacks.mia_members == "train",
                    ErrorCode::ParseError, "attacks.mia_members must be unlearned or train");
        }
    }

    validate_combination(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::IoError, "cannot open config " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json_text(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json doc;
    json dataset;
    dataset["type"] = cfg.dataset.type;
    if (cfg.dataset.type == "dir") {
        dataset["path"] = cfg.dataset.path;
    } else if (cfg.dataset.type == "sbm_set") {
        dataset["graphs_per_class"] = cfg.dataset.set_params.graphs_per_class;
        dataset["graph_classes"] = cfg.dataset.set_params.graph_classes;
        dataset["nodes_min"] = cfg.dataset.set_params.nodes_min;
        dataset["nodes_max"] = cfg.dataset.set_params.nodes_max;
        dataset["node_classes"] = cfg.dataset.set_params.node_classes;
        dataset["features"] = cfg.dataset.set_params.f;
        dataset["signal"] = cfg.dataset.set_params.signal;
    } else {
        dataset["n"] = cfg.dataset.n;
        dataset["classes"] = cfg.dataset.classes;
        dataset["p_in"] = cfg.dataset.p_in;
        dataset["p_out"] = cfg.dataset.p_out;
        dataset["features"] = cfg.dataset.features;
        dataset["signal"] = cfg.dataset.signal;
    }
    doc["dataset"] = dataset;
    doc["task"] = std::string(task_name(cfg.task));
    doc["backbone"] = {{"name", std::string(backbone_name(cfg.backbone.backbone))},
                       {"layers", cfg.backbone.layers},
                       {"hidden", cfg.backbone.hidden}};
    doc["hyper"] = {{"lr", cfg.hyper.lr},
                    {"epochs", cfg.hyper.epochs},
                    {"weight_decay", cfg.hyper.weight_decay}};
    doc["method"] = std::string(method_name(cfg.method));
    doc["method_params"] = {{"k", cfg.method_params.k},
                            {"damping", cfg.method_params.influence.damping},
                            {"cg_iters", cfg.method_params.influence.cg_iters},
                            {"cg_tol", cfg.method_params.influence.cg_tol},
                            {"epochs", cfg.method_params.gnndelete.epochs},
                            {"alpha", cfg.method_params.gnndelete.alpha},
                            {"lr", cfg.method_params.gnndelete.lr}};
    json request;
    request["kind"] = std::string(request_kind_name(cfg.request.kind));
    request["ratio"] = cfg.request.ratio;
    if (!cfg.request.target_nodes.empty()) request["nodes"] = cfg.request.target_nodes;
    if (!cfg.request.target_edges.empty()) {
        json edges = json::array();
        for (const Edge& e : cfg.request.target_edges) edges.push_back({e.u, e.v});
        request["edges"] = edges;
    }
    doc["request"] = request;
    doc["split"] = {{"train_ratio", cfg.split.train_ratio},
                    {"mode", cfg.split.mode == SplitMode::Transductive ? "transductive"
                                                                       : "inductive"}};
    doc["attacks"] = {{"mia", cfg.attacks.mia},
                      {"poison", cfg.attacks.poison},
                      {"mia_members", cfg.attacks.mia_members},
                      {"poison_ratio", cfg.attacks.poison_ratio}};
    doc["seed"] = cfg.seed;
    return doc.dump();
}

std::string config_digest(const ExperimentConfig& cfg) {
    std::uint64_t h = fnv1a(config_to_json(cfg));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void validate_combination(const ExperimentConfig& cfg) {
    const RequestKind kind = cfg.request.kind;
    if (cfg.task == Task::Graph) {
        require(kind == RequestKind::Feature, ErrorCode::UnsupportedCombination,
                "graph task supports feature requests only");
        require(cfg.method == Method::Retrain || cfg.method == Method::Eraser ||
                    cfg.method == Method::Gif,
                ErrorCode::UnsupportedCombination,
                "graph task supports methods retrain, eraser, gif");
        require(!cfg.attacks.mia && !cfg.attacks.poison, ErrorCode::UnsupportedCombination,
                "attacks are defined for node/link tasks");
        return;
    }
    switch (cfg.method) {
        case Method::Ceu:
            require(kind == RequestKind::Edge, ErrorCode::UnsupportedCombination,
                    "ceu accepts edge requests only");
            break;
        case Method::Projector:
            require(kind == RequestKind::Node && cfg.task == Task::Node &&
                        cfg.backbone.backbone == Backbone::SGC,
                    ErrorCode::UnsupportedCombination,
                    "projector supports node requests on the node task with an SGC backbone");
            break;
        case Method::GnnDelete:
            require(kind != RequestKind::Feature, ErrorCode::UnsupportedCombination,
                    "gnndelete accepts node or edge requests");
            break;
        default:
            break; // retrain, eraser, gif, utu cover all kinds
    }
    if (cfg.attacks.mia)
        require(cfg.task == Task::Node, ErrorCode::UnsupportedCombination,
                "MIA is defined for the node task");
    if (cfg.attacks.poison)
        require(cfg.task == Task::Link && kind == RequestKind::Edge,
                ErrorCode::UnsupportedCombination,
                "the poisoning audit runs on the link task with edge requests");
}

} // namespace gu
