#include "gu/unlearn/projector.hpp"
#include "gu/unlearn/retrain.hpp"
#include "gu/unlearn/utu.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"
#include "gu/synth.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace gu;

namespace {

TrainConfig node_cfg(Backbone backbone = Backbone::SGC) {
    return TrainConfig{BackboneSpec{backbone, 2, 8}, Hyper{0.2, 30, 1e-3}, Task::Node};
}

} // namespace

TEST_CASE("retrain oracle") {
    Graph g = synth_sbm(50, 2, 0.2, 0.05, 6, 2.0, 3);
    DataSplit split = split_dataset(g, 0.8, SplitMode::Transductive, 3);

    SUBCASE("empty-effect feature request equals plain training") {
        // mask dimensions that are already zero on an all-zero feature row
        Graph zeroed = g;
        zeroed.features.row(split.train_ids[0]).setZero();
        UnlearnRequest r = make_request(
            RequestKind::Feature,
            {.nodes = {}, .edges = {}, .features = {{split.train_ids[0], {}}}});
        RetrainResult oracle = retrain_oracle(node_cfg(), zeroed, split, r, 7);
        ModelParams plain = train(node_cfg(), zeroed, split, 7);
        CHECK(params_to_json(oracle.params) == params_to_json(plain));
    }
    SUBCASE("node request removes the node from the training view") {
        NodeId victim = split.train_ids[2];
        UnlearnRequest r =
            make_request(RequestKind::Node, {.nodes = {victim}, .edges = {}, .features = {}});
        RetrainResult oracle = retrain_oracle(node_cfg(), g, split, r, 7);
        CHECK(oracle.residual.graph.node_count == g.node_count - 1);
        CHECK(oracle.residual.remap(victim) == -1);
        CHECK(oracle.residual_split.train_ids.size() == split.train_ids.size() - 1);
    }
    SUBCASE("bit-identical per seed") {
        UnlearnRequest r = make_request(
            RequestKind::Node, {.nodes = {split.train_ids[0]}, .edges = {}, .features = {}});
        RetrainResult a = retrain_oracle(node_cfg(), g, split, r, 11);
        RetrainResult b = retrain_oracle(node_cfg(), g, split, r, 11);
        CHECK(params_to_json(a.params) == params_to_json(b.params));
    }
}

TEST_CASE("utu removes exactly the requested edges") {
    Graph g = synth_sbm(40, 2, 0.25, 0.05, 5, 1.0, 9);
    std::vector<Edge> victims = {g.edges[0], g.edges[5], g.edges[9]};
    Graph pruned = utu_unlearn(g, victims);
    CHECK(pruned.edge_count() == g.edge_count() - 3);
    for (const Edge& e : victims) CHECK(!pruned.has_edge(e.u, e.v));

    SUBCASE("degrees drop by one per incident removal") {
        auto before = g.degrees();
        auto after = pruned.degrees();
        std::vector<int> expected_drop(static_cast<std::size_t>(g.node_count), 0);
        for (const Edge& e : victims) {
            ++expected_drop[static_cast<std::size_t>(e.u)];
            ++expected_drop[static_cast<std::size_t>(e.v)];
        }
        for (NodeId v = 0; v < g.node_count; ++v)
            CHECK(after[static_cast<std::size_t>(v)] ==
                  before[static_cast<std::size_t>(v)] - expected_drop[static_cast<std::size_t>(v)]);
    }
    SUBCASE("re-applying to disjoint edges is independent") {
        Graph again = utu_unlearn(pruned, {pruned.edges[0]});
        CHECK(again.edge_count() == pruned.edge_count() - 1);
    }
    SUBCASE("missing edge is an error") {
        CHECK_THROWS_WITH_AS(utu_unlearn(pruned, {victims[0]}), doctest::Contains("MissingTarget"),
                             Error);
    }
}

TEST_CASE("utu leaves out-of-range receptive fields bit-identical") {
    // path 0-1-2-3-4-5-6, remove edge (0,1); nodes at distance > L from
    // the endpoints must see identical predictions
    Graph g = testing::path_graph(7, 4);
    TrainConfig cfg{BackboneSpec{Backbone::GCN, 2, 6}, Hyper{0.2, 20, 1e-3}, Task::Node};
    DataSplit split = testing::all_train(g);
    ModelParams params = train(cfg, g, split, 5);

    Graph pruned = utu_unlearn(g, {Edge(0, 1)});
    EmbeddingTable before = forward(params, g);
    EmbeddingTable after = forward(params, pruned);
    // L = 2: rows 4, 5, 6 are at distance >= 3 from both endpoints
    for (NodeId v : {4, 5, 6})
        CHECK((before.row(v) - after.row(v)).norm() == 0.0);
    // node 1 lost a neighbor, its embedding must move
    CHECK((before.row(1) - after.row(1)).norm() > 0.0);
}

TEST_CASE("utu_apply generalizes node and feature requests") {
    Graph g = testing::path_graph(5, 4);
    SUBCASE("node request isolates the node") {
        UnlearnRequest r =
            make_request(RequestKind::Node, {.nodes = {2}, .edges = {}, .features = {}});
        Graph pruned = utu_apply(g, r);
        CHECK(pruned.node_count == 5);
        CHECK(pruned.degrees()[2] == 0);
        CHECK(pruned.edge_count() == g.edge_count() - 2);
    }
    SUBCASE("feature request zeroes rows") {
        UnlearnRequest r = make_request(RequestKind::Feature,
                                        {.nodes = {}, .edges = {}, .features = {{1, {}}}});
        Graph pruned = utu_apply(g, r);
        CHECK(pruned.features.row(1).norm() == 0.0);
        CHECK(pruned.edge_count() == g.edge_count());
    }
}

TEST_CASE("projector") {
    SUBCASE("full-span retained features keep W") {
        // dense random features on a sizable train set span all of R^f
        Graph g = synth_sbm(60, 2, 0.2, 0.05, 5, 1.0, 21);
        DataSplit split = split_dataset(g, 0.9, SplitMode::Transductive, 21);
        ModelParams params = train(node_cfg(), g, split, 23);
        UnlearnRequest r = make_request(
            RequestKind::Node, {.nodes = {split.train_ids[0]}, .edges = {}, .features = {}});
        ModelParams projected = projector_unlearn(params, g, split, r);
        CHECK((projected.weights[0] - params.weights[0]).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("orthogonal directions are annihilated and projection is idempotent") {
        Graph g = synth_sbm(30, 2, 0.2, 0.05, 8, 1.0, 25);
        DataSplit split = split_dataset(g, 0.5, SplitMode::Transductive, 25);
        ModelParams params = train(node_cfg(), g, split, 27);
        // remove most of the train set so the retained span is thin
        std::vector<NodeId> removed(split.train_ids.begin(), split.train_ids.end() - 3);
        UnlearnRequest r =
            make_request(RequestKind::Node, {.nodes = removed, .edges = {}, .features = {}});
        ModelParams projected = projector_unlearn(params, g, split, r);

        // retained propagated rows, and an orthonormal basis of their
        // complement computed independently via full QR
        std::vector<NodeId> retained(split.train_ids.end() - 3, split.train_ids.end());
        PropagationOperator adj = normalized_adjacency(g);
        Eigen::MatrixXd propagated = propagate(g.features, adj, params.hops);
        Eigen::MatrixXd rows(3, g.feature_dim());
        for (int i = 0; i < 3; ++i) rows.row(i) = propagated.row(retained[i]);
        Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
        Eigen::MatrixXd q = qr.matrixQ();
        for (std::int64_t c = qr.rank(); c < q.cols(); ++c) {
            Eigen::VectorXd v = q.col(c);
            CHECK((v.transpose() * projected.weights[0]).norm() <= 1e-6);
        }

        ModelParams twice = projector_unlearn(projected, g, split, r);
        CHECK((twice.weights[0] - projected.weights[0]).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("single basis row keeps only that row of W") {
        // three isolated nodes with one-hot features; retaining only node
        // 0 leaves span{e0}
        Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
        Eigen::VectorXi labels(3);
        labels << 0, 1, 0;
        Graph g = build_graph(x, labels, {}).graph;
        DataSplit split = testing::all_train(g);
        BackboneSpec spec{Backbone::SGC, 2, 0};
        ModelParams params = init_params(spec, 3, 2, 31);
        UnlearnRequest r =
            make_request(RequestKind::Node, {.nodes = {1, 2}, .edges = {}, .features = {}});
        ModelParams projected = projector_unlearn(params, g, split, r);
        CHECK((projected.weights[0].row(0) - params.weights[0].row(0)).norm() <=
              1e-10 * params.weights[0].row(0).norm());
        CHECK(projected.weights[0].row(1).norm() <= 1e-12);
        CHECK(projected.weights[0].row(2).norm() <= 1e-12);
    }
    SUBCASE("wrong backbone is rejected") {
        Graph g = synth_sbm(20, 2, 0.3, 0.1, 4, 1.0, 33);
        DataSplit split = split_dataset(g, 0.8, SplitMode::Transductive, 33);
        ModelParams params = train(node_cfg(Backbone::GCN), g, split, 35);
        UnlearnRequest r = make_request(
            RequestKind::Node, {.nodes = {split.train_ids[0]}, .edges = {}, .features = {}});
        CHECK_THROWS_WITH_AS(projector_unlearn(params, g, split, r),
                             doctest::Contains("WrongBackbone"), Error);
    }
}
