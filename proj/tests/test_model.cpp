#include "gu/model.hpp"

#include "gu/rng.hpp"
#include "gu/synth.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace gu;

TEST_CASE("forward basics") {
    SUBCASE("all-zero weights give all-zero logits") {
        Graph g = testing::path_graph(4);
        BackboneSpec spec{Backbone::GCN, 2, 8};
        ModelParams params = init_params(spec, g.feature_dim(), 3, 1);
        for (auto& w : params.weights) w.setZero();
        CHECK(forward(params, g).norm() == 0.0);
    }
    SUBCASE("1-layer GCN on an isolated node is x*W") {
        Eigen::MatrixXd x(1, 3);
        x << 1.0, -2.0, 0.5;
        Graph g = build_graph(x, std::nullopt, {}).graph;
        BackboneSpec spec{Backbone::GCN, 1, 8};
        ModelParams params = init_params(spec, 3, 2, 5);
        Eigen::MatrixXd out = forward(params, g);
        Eigen::MatrixXd expected = x * params.weights[0];
        CHECK((out - expected).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("forward is permutation equivariant") {
    Graph g = synth_sbm(8, 2, 0.6, 0.3, 4, 1.0, 3);
    BackboneSpec spec{Backbone::GCN, 2, 6};
    ModelParams params = init_params(spec, 4, 2, 9);
    Eigen::MatrixXd out = forward(params, g);

    // relabel nodes by a fixed permutation
    std::vector<NodeId> perm = {3, 6, 0, 7, 2, 5, 1, 4};
    Eigen::MatrixXd px(g.node_count, g.feature_dim());
    Eigen::VectorXi plabels(g.node_count);
    for (NodeId v = 0; v < g.node_count; ++v) {
        px.row(perm[static_cast<std::size_t>(v)]) = g.features.row(v);
        plabels(perm[static_cast<std::size_t>(v)]) = (*g.labels)(v);
    }
    std::vector<std::pair<NodeId, NodeId>> pedges;
    for (const Edge& e : g.edges)
        pedges.emplace_back(perm[static_cast<std::size_t>(e.u)],
                            perm[static_cast<std::size_t>(e.v)]);
    Graph pg = build_graph(px, plabels, pedges).graph;
    Eigen::MatrixXd pout = forward(params, pg);

    for (NodeId v = 0; v < g.node_count; ++v)
        CHECK((out.row(v) - pout.row(perm[static_cast<std::size_t>(v)])).norm() ==
              doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("SGC equals activation-free 1-layer GCN with shared weights") {
    Graph g = synth_sbm(12, 2, 0.5, 0.2, 5, 1.0, 4);
    BackboneSpec sgc_spec{Backbone::SGC, 1, 0};
    ModelParams sgc = init_params(sgc_spec, 5, 3, 21);

    BackboneSpec gcn_spec{Backbone::GCN, 1, 0};
    ModelParams gcn = init_params(gcn_spec, 5, 3, 21);
    gcn.weights[0] = sgc.weights[0]; // shared weights

    CHECK((forward(sgc, g) - forward(gcn, g)).norm() == doctest::Approx(0.0));
}

TEST_CASE("softmax rows sum to one") {
    Eigen::MatrixXd logits = Eigen::MatrixXd::Random(20, 5) * 30.0;
    Eigen::MatrixXd probs = softmax_rows(logits);
    for (int i = 0; i < probs.rows(); ++i)
        CHECK(probs.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("argmax breaks ties toward the lowest class") {
    Eigen::MatrixXd scores(2, 3);
    scores << 0.4, 0.4, 0.2, 0.1, 0.5, 0.5;
    Eigen::VectorXi picks = argmax_rows(scores);
    CHECK(picks(0) == 0);
    CHECK(picks(1) == 1);
}

TEST_CASE("score_edges") {
    Graph g = testing::path_graph(4);
    BackboneSpec spec{Backbone::GCN, 2, 4};
    ModelParams params = init_params(spec, g.feature_dim(), 4, 17);
    SUBCASE("zero weights score one half") {
        ModelParams zero = params;
        for (auto& w : zero.weights) w.setZero();
        Eigen::VectorXd scores = score_edges(zero, g, {Edge(0, 1), Edge(2, 3)});
        CHECK(scores(0) == doctest::Approx(0.5));
        CHECK(scores(1) == doctest::Approx(0.5));
    }
    SUBCASE("symmetric in pair order") {
        Eigen::VectorXd ab = score_edges(params, g, {Edge(1, 3)});
        Eigen::VectorXd ba = score_edges(params, g, {Edge(3, 1)});
        CHECK(ab(0) == doctest::Approx(ba(0)));
    }
}

TEST_CASE("params json round trip is bit exact") {
    BackboneSpec spec{Backbone::SageMean, 2, 7};
    ModelParams params = init_params(spec, 5, 3, 77);
    ModelParams back = params_from_json(params_to_json(params));
    CHECK(back.backbone == params.backbone);
    CHECK(back.hops == params.hops);
    REQUIRE(back.weights.size() == params.weights.size());
    for (std::size_t k = 0; k < params.weights.size(); ++k) {
        REQUIRE(back.weights[k].rows() == params.weights[k].rows());
        for (std::int64_t i = 0; i < params.weights[k].rows(); ++i)
            for (std::int64_t j = 0; j < params.weights[k].cols(); ++j)
                CHECK(back.weights[k](i, j) == params.weights[k](i, j)); // exact
    }
}

TEST_CASE("params json round trip survives extreme finite values") {
    BackboneSpec spec{Backbone::SGC, 1, 0};
    ModelParams params = init_params(spec, 2, 2, 1);
    params.weights[0] << 1e-308, 1.7976931348623157e308, -4.9406564584124654e-324,
        3.141592653589793;
    ModelParams back = params_from_json(params_to_json(params));
    for (std::int64_t i = 0; i < 2; ++i)
        for (std::int64_t j = 0; j < 2; ++j)
            CHECK(back.weights[0](i, j) == params.weights[0](i, j));
}

TEST_CASE("flatten/unflatten round trip") {
    BackboneSpec spec{Backbone::GCN, 2, 4};
    ModelParams params = init_params(spec, 3, 2, 13);
    Eigen::VectorXd flat = flatten_params(params);
    ModelParams copy = params;
    for (auto& w : copy.weights) w.setZero();
    unflatten_params(flat, copy);
    for (std::size_t k = 0; k < params.weights.size(); ++k)
        CHECK((copy.weights[k] - params.weights[k]).norm() == 0.0);
}
