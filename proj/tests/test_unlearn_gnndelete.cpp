#include "gu/unlearn/gnndelete.hpp"

#include "gu/error.hpp"
#include "gu/synth.hpp"
#include "gu/train.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace gu;

namespace {

struct Setup {
    Graph g;
    DataSplit split;
    ModelParams base;
};

Setup make_setup(std::uint64_t seed) {
    Setup s{synth_sbm(60, 2, 0.15, 0.03, 6, 1.5, seed), {}, {}};
    s.split = split_dataset(s.g, 0.8, SplitMode::Transductive, seed);
    TrainConfig cfg{BackboneSpec{Backbone::GCN, 2, 8}, Hyper{0.2, 60, 1e-3}, Task::Link};
    s.base = train(cfg, s.g, s.split, seed);
    return s;
}

Edge pick_train_edge(const Setup& s) {
    for (const Edge& e : s.g.edges)
        if (s.split.is_train(e.u) && s.split.is_train(e.v)) return e;
    FAIL("no train edge");
    return Edge(0, 1);
}

} // namespace

TEST_CASE("gnndelete basics") {
    Setup s = make_setup(5);
    Edge victim = pick_train_edge(s);
    UnlearnRequest r =
        make_request(RequestKind::Edge, {.nodes = {}, .edges = {victim}, .features = {}});
    GnnDeleteOptions opts{40, 0.5, 0.05};
    DeletionModel model = gnndelete_unlearn(s.base, s.g, s.split, r, opts, 7);

    SUBCASE("base parameters are frozen bit-exactly") {
        CHECK(params_to_json(model.base) == params_to_json(s.base));
    }
    SUBCASE("nodes outside the affected set keep base embeddings bit-exactly") {
        EmbeddingTable deleted = forward_deleted(model, s.g);
        EmbeddingTable original = forward(s.base, s.g);
        std::vector<bool> affected(static_cast<std::size_t>(s.g.node_count), false);
        for (NodeId v : model.affected) affected[static_cast<std::size_t>(v)] = true;
        int outside = 0;
        for (NodeId v = 0; v < s.g.node_count; ++v) {
            if (affected[static_cast<std::size_t>(v)]) continue;
            ++outside;
            CHECK((deleted.row(v) - original.row(v)).norm() == 0.0);
        }
        CHECK(outside > 0); // the 2-hop ball must not swallow the SBM
    }
    SUBCASE("deleted edge scores strictly below the base score") {
        double before = score_edges(s.base, s.g, {victim})(0);
        double after = score_edges_deleted(model, s.g, {victim})(0);
        CHECK(after < before);
    }
}

TEST_CASE("gnndelete with alpha=0 keeps deleted-edge scores near base") {
    Setup s = make_setup(11);
    Edge victim = pick_train_edge(s);
    UnlearnRequest r =
        make_request(RequestKind::Edge, {.nodes = {}, .edges = {victim}, .features = {}});
    GnnDeleteOptions opts{40, 0.0, 0.05};
    DeletionModel model = gnndelete_unlearn(s.base, s.g, s.split, r, opts, 13);
    double before = score_edges(s.base, s.g, {victim})(0);
    double after = score_edges_deleted(model, s.g, {victim})(0);
    CHECK(std::abs(after - before) <= 0.2);
}

TEST_CASE("gnndelete handles node requests by unlinking") {
    Setup s = make_setup(17);
    NodeId victim = s.split.train_ids[0];
    UnlearnRequest r =
        make_request(RequestKind::Node, {.nodes = {victim}, .edges = {}, .features = {}});
    GnnDeleteOptions opts{20, 0.5, 0.05};
    DeletionModel model = gnndelete_unlearn(s.base, s.g, s.split, r, opts, 19);
    CHECK(!model.affected.empty());
    Eigen::MatrixXd probs = predict_proba_deleted(model, s.g);
    CHECK(probs.rows() == s.g.node_count);
    for (std::int64_t i = 0; i < probs.rows(); ++i)
        CHECK(probs.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gnndelete rejects feature and empty requests") {
    Setup s = make_setup(23);
    UnlearnRequest feature = make_request(
        RequestKind::Feature, {.nodes = {}, .edges = {}, .features = {{s.split.train_ids[0], {}}}});
    CHECK_THROWS_WITH_AS(
        gnndelete_unlearn(s.base, s.g, s.split, feature, GnnDeleteOptions{}, 1),
        doctest::Contains("KindMismatch"), Error);
}

TEST_CASE("gnndelete empty-effect request leaves the model identical") {
    // a node with no incident edges: nothing to unlink, no deleted
    // pairs, no retained affected neighbors, so the operators never move
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(5, 5);
    Eigen::VectorXi labels(5);
    labels << 0, 1, 0, 1, 0;
    Graph g = build_graph(x, labels, {{0, 1}, {1, 2}, {2, 3}}).graph; // node 4 isolated
    DataSplit split = testing::all_train(g);
    TrainConfig cfg{BackboneSpec{Backbone::GCN, 2, 4}, Hyper{0.2, 30, 1e-3}, Task::Node};
    ModelParams base = train(cfg, g, split, 29);

    UnlearnRequest r = make_request(RequestKind::Node, {.nodes = {4}, .edges = {}, .features = {}});
    DeletionModel model = gnndelete_unlearn(base, g, split, r, GnnDeleteOptions{30, 0.5, 0.05}, 31);
    EmbeddingTable deleted = forward_deleted(model, g);
    EmbeddingTable original = forward(base, g);
    CHECK((deleted - original).cwiseAbs().maxCoeff() <= 1e-12);
}
