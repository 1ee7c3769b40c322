#pragma once

#include "gu/graph.hpp"
#include "gu/synth.hpp"
#include "gu/train.hpp"
#include "gu/unlearn/influence.hpp"
#include "gu/unlearn/gnndelete.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gu {

enum class Method { Retrain, Eraser, Gif, Ceu, GnnDelete, Utu, Projector };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

struct DatasetSpec {
    std::string type = "sbm"; // sbm | dir | sbm_set
    // sbm
    std::int64_t n = 300;
    int classes = 3;
    double p_in = 0.10;
    double p_out = 0.01;
    std::int64_t features = 10;
    double signal = 2.0;
    // dir
    std::string path;
    // sbm_set
    SbmSetParams set_params;
};

struct RequestSpec {
    RequestKind kind = RequestKind::Node;
    double ratio = 0.10;              // ignored when explicit targets given
    std::vector<NodeId> target_nodes; // optional explicit targets
    std::vector<Edge> target_edges;
};

struct SplitSpec {
    double train_ratio = 0.8;
    SplitMode mode = SplitMode::Transductive;
};

struct MethodParams {
    int k = 8;                    // eraser
    InfluenceOptions influence;   // gif / ceu
    GnnDeleteOptions gnndelete;   // gnndelete
};

struct AttackSpec {
    bool mia = false;
    bool poison = false;
    std::string mia_members = "unlearned"; // unlearned | train
    double poison_ratio = 0.10;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    Task task = Task::Node;
    BackboneSpec backbone;
    Hyper hyper;
    Method method = Method::Retrain;
    MethodParams method_params;
    RequestSpec request;
    SplitSpec split;
    AttackSpec attacks;
    std::uint64_t seed = 1;
};

/// Parses and validates a config file. Unknown keys are errors; defaults
/// follow the standard protocol (0.8/0.2 split, request ratio 0.10).
ExperimentConfig load_config(const std::string& path);

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

/// Stable hex digest of the canonical serialized config.
std::string config_digest(const ExperimentConfig& cfg);

/// Enforces the supported (method, task, request) matrix; throws
/// UnsupportedCombination otherwise.
void validate_combination(const ExperimentConfig& cfg);

} // namespace gu
