#pragma once

#include "gu/graph.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace gu {

/// Flips `ratio` of train labels to a uniformly drawn different class.
struct LabelNoise {
    double ratio = 0.0;
};

/// Adds N(0, (sigma_rel * per-dimension std)^2) to every feature entry.
/// Dimensions with zero spread receive no noise.
struct FeatureNoise {
    double sigma_rel = 0.0;
};

/// Keeps `keep_ratio` of train labels; the returned mask marks retained ones.
struct LabelSparsity {
    double keep_ratio = 1.0;
};

/// Zeroes `drop_ratio` of all feature entries uniformly.
struct FeatureSparsity {
    double drop_ratio = 0.0;
};

using PerturbSpec = std::variant<LabelNoise, FeatureNoise, LabelSparsity, FeatureSparsity>;

struct PerturbResult {
    Graph graph;
    /// Present for label sparsity: per-node flag, true when the train
    /// label survives (test nodes keep their flag true; they are unused
    /// during training either way).
    std::optional<std::vector<bool>> label_mask;
};

PerturbResult perturb(const Graph& g, const DataSplit& split, const PerturbSpec& spec,
                      std::uint64_t seed);

} // namespace gu
