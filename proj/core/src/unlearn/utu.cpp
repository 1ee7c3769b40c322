#include "gu/unlearn/utu.hpp"

#include "gu/error.hpp"

#include <algorithm>

namespace gu {

Graph utu_unlearn(const Graph& g, const std::vector<Edge>& edges) {
    if (edges.empty()) return g;
    UnlearnRequest r = make_request(RequestKind::Edge, {.nodes = {}, .edges = edges, .features = {}});
    return apply_request(g, r).graph;
}

Graph utu_apply(const Graph& g, const UnlearnRequest& request) {
    validate_request(g, request);
    switch (request.kind) {
        case RequestKind::Edge:
            return utu_unlearn(g, request.delta_e);
        case RequestKind::Node: {
            std::vector<Edge> incident;
            for (const Edge& e : g.edges)
                if (std::binary_search(request.delta_v.begin(), request.delta_v.end(), e.u) ||
                    std::binary_search(request.delta_v.begin(), request.delta_v.end(), e.v))
                    incident.push_back(e);
            return utu_unlearn(g, incident);
        }
        case RequestKind::Feature:
            return apply_request(g, request).graph;
    }
    fail(ErrorCode::KindMismatch, "unreachable request kind");
}

} // namespace gu
