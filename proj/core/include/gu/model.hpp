#pragma once

#include "gu/graph.hpp"
#include "gu/propagation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gu {

enum class Backbone { GCN, SGC, SageMean };

std::string_view backbone_name(Backbone b);
Backbone backbone_from_name(std::string_view name);

/// Architecture description. `layers` is the hop count L; for SGC it is
/// the propagation depth of the single linear layer.
struct BackboneSpec {
    Backbone backbone = Backbone::SGC;
    int layers = 2;
    int hidden = 16;
};

using EmbeddingTable = Eigen::MatrixXd;

/// Trained weights. GCN/SAGE-mean hold one matrix per layer, SGC exactly
/// one; hops record the propagation depth. Values are immutable by
/// convention; unlearning operators return updated copies.
struct ModelParams {
    Backbone backbone = Backbone::SGC;
    int hops = 2;
    std::vector<Eigen::MatrixXd> weights;

    std::int64_t parameter_count() const;
    std::int64_t output_dim() const { return weights.empty() ? 0 : weights.back().cols(); }
};

/// Weight shapes for a spec: feature_dim -> hidden -> ... -> output_dim.
/// SAGE-mean layers consume the concatenation [self || mean-neighbors],
/// doubling each layer's input rows.
std::vector<std::pair<std::int64_t, std::int64_t>> weight_shapes(const BackboneSpec& spec,
                                                                 std::int64_t feature_dim,
                                                                 std::int64_t output_dim);

/// Glorot-uniform initialization, deterministic per seed.
ModelParams init_params(const BackboneSpec& spec, std::int64_t feature_dim,
                        std::int64_t output_dim, std::uint64_t seed);

/// Reusable per-graph propagation state.
struct ForwardWorkspace {
    PropagationOperator adj;
    std::optional<PropagationOperator> mean; // SAGE-mean only
};

ForwardWorkspace make_workspace(const Graph& g, Backbone backbone);

/// Final-layer node representations. The last layer carries no
/// activation, so these rows double as logits for classification heads
/// and as embeddings for edge scoring.
EmbeddingTable forward(const ModelParams& params, const Graph& g,
                       const ForwardWorkspace* workspace = nullptr);

/// Row-wise softmax of forward(), for node-level class probabilities.
Eigen::MatrixXd predict_proba(const ModelParams& params, const Graph& g,
                              const ForwardWorkspace* workspace = nullptr);

/// sigmoid(h_u . h_v) per pair; symmetric in pair order.
Eigen::VectorXd score_edges(const ModelParams& params, const Graph& g,
                            const std::vector<Edge>& pairs,
                            const ForwardWorkspace* workspace = nullptr);

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Argmax per row; ties broken toward the lowest class index.
Eigen::VectorXi argmax_rows(const Eigen::MatrixXd& scores);

Eigen::VectorXd flatten_params(const ModelParams& params);
void unflatten_params(const Eigen::VectorXd& flat, ModelParams& params);

/// JSON round-trip; bit-exact for finite weights.
std::string params_to_json(const ModelParams& params);
ModelParams params_from_json(const std::string& text);

} // namespace gu
