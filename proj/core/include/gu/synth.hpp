#pragma once

#include "gu/graph.hpp"

#include <cstdint>

namespace gu {

/// Stochastic block model generator with class-prototype features.
/// Classes are assigned round-robin (balanced); each intra-class pair is
/// an edge with probability p_in, inter-class pairs with p_out. Features
/// are `signal` times the one-hot class prototype plus unit Gaussian noise.
Graph synth_sbm(std::int64_t n, int num_classes, double p_in, double p_out, std::int64_t f,
                double signal, std::uint64_t seed);

struct SbmSetParams {
    std::int64_t graphs_per_class = 30;
    int graph_classes = 2;
    std::int64_t nodes_min = 20;
    std::int64_t nodes_max = 32;
    int node_classes = 2;
    std::int64_t f = 8;
    double signal = 1.0;
    /// Intra-class edge probability for graph class 0; class c uses
    /// p_in_base + c * p_in_step so graph labels are structurally encoded.
    double p_in_base = 0.10;
    double p_in_step = 0.20;
    double p_out = 0.02;
};

/// Collection of SBM graphs whose label is encoded in connectivity and
/// feature scale; stand-in corpus for graph classification runs.
GraphSet synth_graph_set(const SbmSetParams& params, std::uint64_t seed);

} // namespace gu
