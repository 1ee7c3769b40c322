#include "gu/model.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace gu {

std::string_view backbone_name(Backbone b) {
    switch (b) {
        case Backbone::GCN: return "gcn";
        case Backbone::SGC: return "sgc";
        case Backbone::SageMean: return "sage";
    }
    return "?";
}

Backbone backbone_from_name(std::string_view name) {
    if (name == "gcn") return Backbone::GCN;
    if (name == "sgc") return Backbone::SGC;
    if (name == "sage") return Backbone::SageMean;
    fail(ErrorCode::ParseError, "unknown backbone '" + std::string(name) + "'");
}

std::int64_t ModelParams::parameter_count() const {
    std::int64_t total = 0;
    for (const auto& w : weights) total += w.size();
    return total;
}

std::vector<std::pair<std::int64_t, std::int64_t>> weight_shapes(const BackboneSpec& spec,
                                                                 std::int64_t feature_dim,
                                                                 std::int64_t output_dim) {
    require(spec.layers >= 1, ErrorCode::ShapeMismatch, "need at least one layer");
    std::vector<std::pair<std::int64_t, std::int64_t>> shapes;
    if (spec.backbone == Backbone::SGC) {
        shapes.emplace_back(feature_dim, output_dim);
        return shapes;
    }
    std::int64_t in = feature_dim;
    for (int k = 0; k < spec.layers; ++k) {
        std::int64_t out = (k + 1 == spec.layers) ? output_dim : spec.hidden;
        std::int64_t rows = spec.backbone == Backbone::SageMean ? 2 * in : in;
        shapes.emplace_back(rows, out);
        in = out;
    }
    return shapes;
}

ModelParams init_params(const BackboneSpec& spec, std::int64_t feature_dim,
                        std::int64_t output_dim, std::uint64_t seed) {
    ModelParams params;
    params.backbone = spec.backbone;
    params.hops = spec.layers;
    Rng rng(derive_seed(seed, "init"));
    for (auto [rows, cols] : weight_shapes(spec, feature_dim, output_dim)) {
        double scale = std::sqrt(6.0 / static_cast<double>(rows + cols));
        Eigen::MatrixXd w(rows, cols);
        for (std::int64_t i = 0; i < rows; ++i)
            for (std::int64_t j = 0; j < cols; ++j) w(i, j) = (2.0 * rng.uniform() - 1.0) * scale;
        params.weights.push_back(std::move(w));
    }
    return params;
}

ForwardWorkspace make_workspace(const Graph& g, Backbone backbone) {
    ForwardWorkspace ws;
    ws.adj = normalized_adjacency(g);
    if (backbone == Backbone::SageMean) ws.mean = mean_aggregation(g);
    return ws;
}

namespace {

Eigen::MatrixXd layer_mix(const ModelParams& params, const ForwardWorkspace& ws,
                          const Eigen::MatrixXd& h) {
    switch (params.backbone) {
        case Backbone::GCN:
            return ws.adj.matrix * h;
        case Backbone::SageMean: {
            Eigen::MatrixXd mixed(h.rows(), 2 * h.cols());
            mixed.leftCols(h.cols()) = h;
            mixed.rightCols(h.cols()) = ws.mean->matrix * h;
            return mixed;
        }
        case Backbone::SGC:
            fail(ErrorCode::WrongBackbone, "SGC has no per-layer mixing");
    }
    fail(ErrorCode::WrongBackbone, "unknown backbone");
}

} // namespace

EmbeddingTable forward(const ModelParams& params, const Graph& g,
                       const ForwardWorkspace* workspace) {
    require(!params.weights.empty(), ErrorCode::ShapeMismatch, "model has no weights");
    ForwardWorkspace local;
    if (!workspace) {
        local = make_workspace(g, params.backbone);
        workspace = &local;
    }

    if (params.backbone == Backbone::SGC) {
        require(g.features.cols() == params.weights[0].rows(), ErrorCode::ShapeMismatch,
                "feature dim " + std::to_string(g.features.cols()) + " != weight rows " +
                    std::to_string(params.weights[0].rows()));
        return propagate(g.features, workspace->adj, params.hops) * params.weights[0];
    }

    Eigen::MatrixXd h = g.features;
    for (std::size_t k = 0; k < params.weights.size(); ++k) {
        Eigen::MatrixXd mixed = layer_mix(params, *workspace, h);
        require(mixed.cols() == params.weights[k].rows(), ErrorCode::ShapeMismatch,
                "layer " + std::to_string(k) + " input dim " + std::to_string(mixed.cols()) +
                    " != weight rows " + std::to_string(params.weights[k].rows()));
        h = mixed * params.weights[k];
        if (k + 1 < params.weights.size()) h = h.cwiseMax(0.0);
    }
    return h;
}

Eigen::MatrixXd predict_proba(const ModelParams& params, const Graph& g,
                              const ForwardWorkspace* workspace) {
    return softmax_rows(forward(params, g, workspace));
}

Eigen::VectorXd score_edges(const ModelParams& params, const Graph& g,
                            const std::vector<Edge>& pairs, const ForwardWorkspace* workspace) {
    for (const Edge& e : pairs)
        require(e.u >= 0 && e.v < g.node_count, ErrorCode::OutOfRange,
                "pair (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    EmbeddingTable h = forward(params, g, workspace);
    Eigen::VectorXd scores(static_cast<std::int64_t>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double dot = h.row(pairs[i].u).dot(h.row(pairs[i].v));
        scores(static_cast<std::int64_t>(i)) = 1.0 / (1.0 + std::exp(-dot));
    }
    return scores;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd probs(logits.rows(), logits.cols());
    for (std::int64_t i = 0; i < logits.rows(); ++i) {
        double row_max = logits.row(i).maxCoeff();
        Eigen::ArrayXd shifted = (logits.row(i).array() - row_max).exp();
        probs.row(i) = shifted / shifted.sum();
    }
    return probs;
}

Eigen::VectorXi argmax_rows(const Eigen::MatrixXd& scores) {
    Eigen::VectorXi out(scores.rows());
    for (std::int64_t i = 0; i < scores.rows(); ++i) {
        int best = 0;
        for (std::int64_t j = 1; j < scores.cols(); ++j)
            if (scores(i, j) > scores(i, best)) best = static_cast<int>(j);
        out(i) = best;
    }
    return out;
}

Eigen::VectorXd flatten_params(const ModelParams& params) {
    Eigen::VectorXd flat(params.parameter_count());
    std::int64_t offset = 0;
    for (const auto& w : params.weights) {
        for (std::int64_t i = 0; i < w.rows(); ++i)
            for (std::int64_t j = 0; j < w.cols(); ++j) flat(offset++) = w(i, j);
    }
    return flat;
}

void unflatten_params(const Eigen::VectorXd& flat, ModelParams& params) {
    require(flat.size() == params.parameter_count(), ErrorCode::ShapeMismatch,
            "flat vector length mismatch");
    std::int64_t offset = 0;
    for (auto& w : params.weights) {
        for (std::int64_t i = 0; i < w.rows(); ++i)
            for (std::int64_t j = 0; j < w.cols(); ++j) w(i, j) = flat(offset++);
    }
}

std::string params_to_json(const ModelParams& params) {
    nlohmann::json doc;
    doc["backbone"] = std::string(backbone_name(params.backbone));
    doc["hops"] = params.hops;
    auto shapes = nlohmann::json::array();
    auto weights = nlohmann::json::array();
    for (const auto& w : params.weights) {
        shapes.push_back({w.rows(), w.cols()});
        std::vector<double> row_major;
        row_major.reserve(static_cast<std::size_t>(w.size()));
        for (std::int64_t i = 0; i < w.rows(); ++i)
            for (std::int64_t j = 0; j < w.cols(); ++j) row_major.push_back(w(i, j));
        weights.push_back(row_major);
    }
    doc["shapes"] = shapes;
    doc["weights"] = weights;
    return doc.dump();
}

ModelParams params_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("model json: ") + e.what());
    }
    ModelParams params;
    try {
        params.backbone = backbone_from_name(doc.at("backbone").get<std::string>());
        params.hops = doc.at("hops").get<int>();
        const auto& shapes = doc.at("shapes");
        const auto& weights = doc.at("weights");
        require(shapes.size() == weights.size(), ErrorCode::ParseError,
                "shapes/weights length mismatch");
        for (std::size_t k = 0; k < shapes.size(); ++k) {
            std::int64_t rows = shapes[k][0].get<std::int64_t>();
            std::int64_t cols = shapes[k][1].get<std::int64_t>();
            const auto& flat = weights[k];
            require(static_cast<std::int64_t>(flat.size()) == rows * cols, ErrorCode::ParseError,
                    "weight array length mismatch");
            Eigen::MatrixXd w(rows, cols);
            std::size_t idx = 0;
            for (std::int64_t i = 0; i < rows; ++i)
                for (std::int64_t j = 0; j < cols; ++j) w(i, j) = flat[idx++].get<double>();
            params.weights.push_back(std::move(w));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("model json: ") + e.what());
    }
    return params;
}

} // namespace gu
