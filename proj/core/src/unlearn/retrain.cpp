#include "gu/unlearn/retrain.hpp"

namespace gu {

RetrainResult retrain_oracle(const TrainConfig& cfg, const Graph& g, const DataSplit& split,
                             const UnlearnRequest& request, std::uint64_t seed) {
    RetrainResult out;
    out.residual = apply_request(g, request);
    out.residual_split = remap_split(split, out.residual.id_map);
    out.params = train(cfg, out.residual.graph, out.residual_split, seed);
    return out;
}

} // namespace gu
