#pragma once

#include "gu/graph.hpp"

#include <string>
#include <vector>

namespace gu {

/// Dataset directory layout: `nodes.csv` with header
/// `id,label,f0,...,f{f-1}` (label -1 marks an unlabeled node) and
/// `edges.csv` with header `src,dst`. Ids must be 0..n-1 contiguous.
struct LoadedDataset {
    Graph graph;
    /// Per node; false where the label column was -1. Unlabeled nodes
    /// carry a placeholder label of 0 inside the graph.
    std::vector<bool> labeled;
};

LoadedDataset load_dataset(const std::string& dir);

void save_dataset(const std::string& dir, const Graph& g);

} // namespace gu
