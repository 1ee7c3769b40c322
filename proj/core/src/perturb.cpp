#include "gu/perturb.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

#include <cmath>

namespace gu {

namespace {

std::size_t count_of(double ratio, std::size_t total) {
    return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));
}

PerturbResult apply_label_noise(const Graph& g, const DataSplit& split, double ratio,
                                std::uint64_t seed) {
    require(ratio >= 0.0 && ratio <= 1.0, ErrorCode::InvalidRatio, "label noise ratio outside [0,1]");
    require(g.labels.has_value(), ErrorCode::MissingLabels, "label noise needs labels");
    require(g.num_classes >= 2, ErrorCode::OutOfRange, "label noise needs >= 2 classes");

    PerturbResult out{g, std::nullopt};
    Rng rng(derive_seed(seed, "label_noise"));
    std::size_t flips = count_of(ratio, split.train_ids.size());
    auto picked = rng.sample_without_replacement(split.train_ids.size(), flips);
    for (std::size_t idx : picked) {
        NodeId v = split.train_ids[idx];
        int old_label = (*out.graph.labels)(v);
        // uniform over the c-1 wrong classes, never the true one
        int draw = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(g.num_classes - 1)));
        (*out.graph.labels)(v) = draw >= old_label ? draw + 1 : draw;
    }
    return out;
}

PerturbResult apply_feature_noise(const Graph& g, double sigma_rel, std::uint64_t seed) {
    require(sigma_rel >= 0.0, ErrorCode::InvalidRatio, "sigma_rel must be >= 0");
    PerturbResult out{g, std::nullopt};
    if (sigma_rel == 0.0) return out;

    Eigen::VectorXd mean = g.features.colwise().mean();
    Eigen::VectorXd std_dev(g.feature_dim());
    for (std::int64_t j = 0; j < g.feature_dim(); ++j) {
        double var = (g.features.col(j).array() - mean(j)).square().sum() /
                     static_cast<double>(g.node_count);
        std_dev(j) = std::sqrt(var);
    }

    Rng rng(derive_seed(seed, "feature_noise"));
    for (std::int64_t i = 0; i < g.node_count; ++i)
        for (std::int64_t j = 0; j < g.feature_dim(); ++j) {
            double sigma = sigma_rel * std_dev(j);
            double draw = rng.normal(); // drawn unconditionally: noise pattern
                                        // does not depend on which dims are flat
            if (sigma > 0.0) out.graph.features(i, j) += sigma * draw;
        }
    return out;
}

PerturbResult apply_label_sparsity(const Graph& g, const DataSplit& split, double keep_ratio,
                                   std::uint64_t seed) {
    require(keep_ratio >= 0.0 && keep_ratio <= 1.0, ErrorCode::InvalidRatio,
            "keep_ratio outside [0,1]");
    require(g.labels.has_value(), ErrorCode::MissingLabels, "label sparsity needs labels");

    PerturbResult out{g, std::vector<bool>(static_cast<std::size_t>(g.node_count), true)};
    Rng rng(derive_seed(seed, "label_sparsity"));
    std::size_t kept = count_of(keep_ratio, split.train_ids.size());
    auto keep_idx = rng.sample_without_replacement(split.train_ids.size(), kept);
    std::vector<bool> keep_train(split.train_ids.size(), false);
    for (std::size_t idx : keep_idx) keep_train[idx] = true;
    for (std::size_t i = 0; i < split.train_ids.size(); ++i)
        if (!keep_train[i]) (*out.label_mask)[static_cast<std::size_t>(split.train_ids[i])] = false;
    return out;
}

PerturbResult apply_feature_sparsity(const Graph& g, double drop_ratio, std::uint64_t seed) {
    require(drop_ratio >= 0.0 && drop_ratio <= 1.0, ErrorCode::InvalidRatio,
            "drop_ratio outside [0,1]");
    PerturbResult out{g, std::nullopt};
    std::size_t total = static_cast<std::size_t>(g.node_count * g.feature_dim());
    Rng rng(derive_seed(seed, "feature_sparsity"));
    auto dropped = rng.sample_without_replacement(total, count_of(drop_ratio, total));
    for (std::size_t flat : dropped) {
        std::int64_t i = static_cast<std::int64_t>(flat) / g.feature_dim();
        std::int64_t j = static_cast<std::int64_t>(flat) % g.feature_dim();
        out.graph.features(i, j) = 0.0;
    }
    return out;
}

} // namespace

PerturbResult perturb(const Graph& g, const DataSplit& split, const PerturbSpec& spec,
                      std::uint64_t seed) {
    return std::visit(
        [&](const auto& s) -> PerturbResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LabelNoise>)
                return apply_label_noise(g, split, s.ratio, seed);
            else if constexpr (std::is_same_v<T, FeatureNoise>)
                return apply_feature_noise(g, s.sigma_rel, seed);
            else if constexpr (std::is_same_v<T, LabelSparsity>)
                return apply_label_sparsity(g, split, s.keep_ratio, seed);
            else
                return apply_feature_sparsity(g, s.drop_ratio, seed);
        },
        spec);
}

} // namespace gu
