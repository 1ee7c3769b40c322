#include "gu/attack.hpp"

#include "gu/error.hpp"
#include "gu/synth.hpp"
#include "gu/unlearn/retrain.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace gu;

namespace {

// fixed per-node confidence table standing in for a model
NodeProbFn table_fn(const Eigen::VectorXd& confidence, const Eigen::VectorXi& labels) {
    return [confidence, labels](const std::vector<NodeId>& ids) {
        Eigen::MatrixXd rows(static_cast<std::int64_t>(ids.size()), 2);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            double c = confidence(ids[i]);
            int y = labels(ids[i]);
            rows(static_cast<std::int64_t>(i), y) = c;
            rows(static_cast<std::int64_t>(i), 1 - y) = 1.0 - c;
        }
        return rows;
    };
}

} // namespace

TEST_CASE("mia_auc on synthetic confidence tables") {
    std::int64_t n = 10;
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXi labels = Eigen::VectorXi::Zero(n);
    Graph g = build_graph(x, labels, {{0, 1}}).graph;

    std::vector<NodeId> members = {0, 1, 2, 3, 4};
    std::vector<NodeId> nonmembers = {5, 6, 7, 8, 9};

    SUBCASE("identical score multisets give one half") {
        Eigen::VectorXd conf(n);
        conf << 0.9, 0.8, 0.7, 0.6, 0.5, 0.9, 0.8, 0.7, 0.6, 0.5;
        AttackReport rep = mia_auc(table_fn(conf, labels), g, members, nonmembers, labels);
        CHECK(rep.auc == doctest::Approx(0.5));
        CHECK(rep.members == 5);
        CHECK(rep.nonmembers == 5);
    }
    SUBCASE("complete separation gives one") {
        Eigen::VectorXd conf(n);
        conf << 0.9, 0.9, 0.9, 0.9, 0.9, 0.1, 0.1, 0.1, 0.1, 0.1;
        AttackReport rep = mia_auc(table_fn(conf, labels), g, members, nonmembers, labels);
        CHECK(rep.auc == doctest::Approx(1.0));
    }
    SUBCASE("swapping the groups complements the AUC") {
        Eigen::VectorXd conf(n);
        conf << 0.9, 0.3, 0.8, 0.2, 0.6, 0.5, 0.4, 0.7, 0.1, 0.65;
        double forward_auc =
            mia_auc(table_fn(conf, labels), g, members, nonmembers, labels).auc;
        double swapped = mia_auc(table_fn(conf, labels), g, nonmembers, members, labels).auc;
        CHECK(forward_auc == doctest::Approx(1.0 - swapped));
    }
    SUBCASE("empty sets are rejected") {
        Eigen::VectorXd conf = Eigen::VectorXd::Constant(n, 0.5);
        CHECK_THROWS_WITH_AS(mia_auc(table_fn(conf, labels), g, {}, nonmembers, labels),
                             doctest::Contains("EmptySet"), Error);
    }
}

TEST_CASE("mia on a real retrain oracle lands near one half") {
    Graph g = synth_sbm(120, 2, 0.1, 0.02, 6, 2.0, 31);
    DataSplit split = split_dataset(g, 0.8, SplitMode::Transductive, 31);
    TrainConfig cfg{BackboneSpec{Backbone::SGC, 2, 0}, Hyper{0.3, 100, 1e-3}, Task::Node};

    std::vector<NodeId> victims(split.train_ids.begin(), split.train_ids.begin() + 10);
    UnlearnRequest r = make_request(RequestKind::Node, {.nodes = victims, .edges = {}, .features = {}});
    RetrainResult oracle = retrain_oracle(cfg, g, split, r, 31);

    AttackReport rep = mia_auc(make_prob_fn(oracle.params, g), g, victims, split.test_ids,
                               *g.labels);
    CHECK(rep.auc > 0.25);
    CHECK(rep.auc < 0.75);
}

TEST_CASE("poison injects exactly the requested heterophilic edges") {
    Graph g = synth_sbm(80, 2, 0.15, 0.02, 6, 1.5, 37);
    PoisonResult res = poison(g, 0.1, 41);
    std::int64_t wanted = static_cast<std::int64_t>(std::llround(0.1 * g.edge_count()));
    CHECK(static_cast<std::int64_t>(res.poison_set.size()) == wanted);
    CHECK(res.poisoned.edge_count() == g.edge_count() + wanted);

    SUBCASE("every poison edge crosses classes and is new") {
        for (const Edge& e : res.poison_set) {
            CHECK((*g.labels)(e.u) != (*g.labels)(e.v));
            CHECK(!g.has_edge(e.u, e.v));
            CHECK(res.poisoned.has_edge(e.u, e.v));
        }
    }
    SUBCASE("poisoned minus poison equals the clean graph") {
        std::vector<Edge> recovered;
        for (const Edge& e : res.poisoned.edges)
            if (!std::binary_search(res.poison_set.begin(), res.poison_set.end(), e))
                recovered.push_back(e);
        CHECK(recovered == g.edges);
    }
    SUBCASE("deterministic per seed") {
        PoisonResult again = poison(g, 0.1, 41);
        CHECK(again.poison_set == res.poison_set);
    }
    SUBCASE("labels are required") {
        Graph unlabeled = g;
        unlabeled.labels.reset();
        CHECK_THROWS_WITH_AS(poison(unlabeled, 0.1, 1), doctest::Contains("MissingLabels"), Error);
    }
}

TEST_CASE("poison_recovery") {
    Graph g = synth_sbm(60, 2, 0.2, 0.05, 5, 1.5, 43);
    std::vector<Edge> pos = {g.edges[0], g.edges[1], g.edges[2]};
    std::vector<Edge> neg;
    for (NodeId u = 0; u < g.node_count && neg.size() < 3; ++u)
        for (NodeId v = u + 1; v < g.node_count && neg.size() < 3; ++v)
            if (!g.has_edge(u, v)) neg.emplace_back(u, v);

    LinkScorer constant = [](const std::vector<Edge>& pairs) {
        return Eigen::VectorXd::Constant(static_cast<std::int64_t>(pairs.size()), 0.5);
    };
    SUBCASE("identical models give zero delta") {
        AttackReport rep = poison_recovery(constant, constant, g, pos, neg);
        CHECK(rep.auc_before == doctest::Approx(rep.auc_after));
        CHECK(rep.auc_after - rep.auc_before == doctest::Approx(0.0));
    }
    SUBCASE("values live in [0,1]") {
        LinkScorer better = [&](const std::vector<Edge>& pairs) {
            Eigen::VectorXd scores(static_cast<std::int64_t>(pairs.size()));
            for (std::size_t i = 0; i < pairs.size(); ++i)
                scores(static_cast<std::int64_t>(i)) =
                    g.has_edge(pairs[i].u, pairs[i].v) ? 0.9 : 0.1;
            return scores;
        };
        AttackReport rep = poison_recovery(constant, better, g, pos, neg);
        CHECK(rep.auc_before >= 0.0);
        CHECK(rep.auc_before <= 1.0);
        CHECK(rep.auc_after == doctest::Approx(1.0));
    }
    SUBCASE("evaluation pairs must avoid the poison set") {
        std::vector<Edge> poison_set = {pos[0]};
        CHECK_THROWS_AS(poison_recovery(constant, constant, g, pos, neg, &poison_set), Error);
    }
}
