#include "gu/synth.hpp"

#include "gu/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace gu;

TEST_CASE("p_out=0 keeps every edge intra-class") {
    Graph g = synth_sbm(60, 3, 0.3, 0.0, 6, 1.0, 5);
    for (const Edge& e : g.edges) CHECK((*g.labels)(e.u) == (*g.labels)(e.v));
}

TEST_CASE("edge count sits within four sigma of the binomial expectation") {
    // n=100, 2 balanced classes, p_in=0.2, p_out=0:
    // intra pairs = 2 * C(50,2) = 2450, so E[m] = 2450 * 0.2 and
    // Var[m] = 2450 * 0.2 * 0.8
    Graph g = synth_sbm(100, 2, 0.2, 0.0, 4, 1.0, 9);
    double pairs = 2.0 * (50.0 * 49.0 / 2.0);
    double expected = pairs * 0.2;
    double sigma = std::sqrt(pairs * 0.2 * 0.8);
    CHECK(std::abs(static_cast<double>(g.edge_count()) - expected) <= 4.0 * sigma);
}

TEST_CASE("same seed reproduces the graph exactly") {
    Graph a = synth_sbm(50, 2, 0.2, 0.05, 6, 2.0, 31);
    Graph b = synth_sbm(50, 2, 0.2, 0.05, 6, 2.0, 31);
    CHECK(a.edges == b.edges);
    CHECK((a.features - b.features).norm() == 0.0);
    CHECK((*a.labels - *b.labels).norm() == 0);
}

TEST_CASE("classes are balanced round-robin") {
    Graph g = synth_sbm(90, 3, 0.1, 0.0, 4, 1.0, 2);
    std::vector<int> counts(3, 0);
    for (NodeId v = 0; v < g.node_count; ++v) ++counts[(*g.labels)(v)];
    for (int c = 0; c < 3; ++c) CHECK(counts[c] == 30);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_WITH_AS(synth_sbm(10, 2, 0.1, 0.2, 4, 1.0, 1),
                         doctest::Contains("InvalidProbability"), Error);
    CHECK_THROWS_WITH_AS(synth_sbm(10, 2, 1.5, 0.0, 4, 1.0, 1),
                         doctest::Contains("InvalidProbability"), Error);
    CHECK_THROWS_AS(synth_sbm(10, 5, 0.2, 0.1, 3, 1.0, 1), Error); // f < classes
}

TEST_CASE("synth_graph_set wires labels to structure") {
    SbmSetParams spec;
    spec.graphs_per_class = 5;
    spec.graph_classes = 2;
    spec.nodes_min = 10;
    spec.nodes_max = 14;
    GraphSet gs = synth_graph_set(spec, 3);
    CHECK(gs.size() == 10);
    CHECK(gs.graph_labels.size() == 10);
    for (std::int64_t i = 0; i < gs.size(); ++i) {
        CHECK(gs.graphs[static_cast<std::size_t>(i)].node_count >= spec.nodes_min);
        CHECK(gs.graphs[static_cast<std::size_t>(i)].node_count <= spec.nodes_max);
        CHECK(gs.graph_labels(i) == (i < 5 ? 0 : 1));
    }
    // class-1 graphs are denser by construction
    double mean_m0 = 0.0, mean_m1 = 0.0;
    for (std::int64_t i = 0; i < 5; ++i) {
        mean_m0 += static_cast<double>(gs.graphs[static_cast<std::size_t>(i)].edge_count()) / 5.0;
        mean_m1 +=
            static_cast<double>(gs.graphs[static_cast<std::size_t>(i + 5)].edge_count()) / 5.0;
    }
    CHECK(mean_m1 > mean_m0);
}
