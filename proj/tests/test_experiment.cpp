#include "gu/experiment.hpp"

#include "gu/error.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

using namespace gu;

namespace {

// small, fast config shared by the pipeline tests
ExperimentConfig tiny(const std::string& method, const std::string& task,
                      const std::string& kind) {
    std::string text = R"({
        "dataset": {"type": "sbm", "n": 80, "classes": 2, "p_in": 0.15, "p_out": 0.02,
                     "features": 6, "signal": 2.0},
        "backbone": {"name": "sgc", "layers": 2, "hidden": 8},
        "hyper": {"lr": 0.3, "epochs": 40, "weight_decay": 0.001},
        "method": ")" + method + R"(",
        "task": ")" + task + R"(",
        "request": {"kind": ")" + kind + R"(", "ratio": 0.1},
        "seed": 3
    })";
    return config_from_json_text(text);
}

// strips the fields the determinism contract exempts
std::string stable_part(const MetricsReport& r) {
    nlohmann::json doc = nlohmann::json::parse(report_to_json(r));
    doc.erase("unlearn_seconds");
    doc.erase("total_seconds");
    doc.erase("peak_bytes");
    return doc.dump();
}

} // namespace

TEST_CASE("run_experiment produces a complete report") {
    MetricsReport report = run_experiment(tiny("retrain", "node", "node"));
    CHECK(report.metrics.count("f1_micro") == 1);
    CHECK(report.metrics.count("accuracy") == 1);
    CHECK(report.unlearn_seconds > 0.0);
    CHECK(!report.digest.empty());
    CHECK(report.method == "retrain");
}

TEST_CASE("identical configs give identical metric fields and digest") {
    MetricsReport a = run_experiment(tiny("gif", "node", "node"));
    MetricsReport b = run_experiment(tiny("gif", "node", "node"));
    CHECK(stable_part(a) == stable_part(b));
    CHECK(a.digest == b.digest);
}

TEST_CASE("every method runs the node-node pipeline") {
    for (const char* method : {"retrain", "eraser", "gif", "gnndelete", "utu", "projector"}) {
        CAPTURE(method);
        ExperimentConfig cfg = tiny(method, "node", "node");
        cfg.method_params.k = 3;
        cfg.method_params.gnndelete.epochs = 10;
        MetricsReport report = run_experiment(cfg);
        CHECK(report.metrics.at("f1_micro") >= 0.0);
        CHECK(report.metrics.at("f1_micro") <= 1.0);
    }
}

TEST_CASE("link task with edge requests") {
    for (const char* method : {"retrain", "utu", "ceu"}) {
        CAPTURE(method);
        MetricsReport report = run_experiment(tiny(method, "link", "edge"));
        CHECK(report.metrics.count("auc") == 1);
        CHECK(report.metrics.at("auc") >= 0.0);
        CHECK(report.metrics.at("auc") <= 1.0);
    }
}

TEST_CASE("graph task feature pipeline") {
    for (const char* method : {"gif", "retrain", "eraser"}) {
        CAPTURE(method);
        ExperimentConfig cfg = config_from_json_text(R"({
            "dataset": {"type": "sbm_set", "graphs_per_class": 6, "nodes_min": 8, "nodes_max": 12,
                         "features": 4},
            "backbone": {"name": "gcn", "layers": 2, "hidden": 5},
            "hyper": {"lr": 0.2, "epochs": 20, "weight_decay": 0.001},
            "method": ")" + std::string(method) + R"(", "task": "graph",
            "request": {"kind": "feature", "ratio": 0.1},
            "method_params": {"k": 3},
            "seed": 5
        })");
        MetricsReport report = run_experiment(cfg);
        CHECK(report.metrics.count("accuracy") == 1);
        CHECK(report.task == "graph");
    }
}

TEST_CASE("mia attack attaches a report on the node task") {
    ExperimentConfig cfg = tiny("retrain", "node", "node");
    cfg.attacks.mia = true;
    MetricsReport report = run_experiment(cfg);
    REQUIRE(report.attack.has_value());
    CHECK(report.attack->kind == "mia");
    CHECK(report.attack->auc >= 0.0);
    CHECK(report.attack->auc <= 1.0);
}

TEST_CASE("poison attack reports before and after AUC") {
    ExperimentConfig cfg = tiny("retrain", "link", "edge");
    cfg.attacks.poison = true;
    MetricsReport report = run_experiment(cfg);
    REQUIRE(report.attack.has_value());
    CHECK(report.attack->kind == "poison");
    CHECK(report.attack->poison_edges > 0);
}

TEST_CASE("sweep_intensity reuses the base model and reports a series") {
    ExperimentConfig cfg = tiny("retrain", "node", "node");
    std::vector<double> ratios = {0.0, 0.1, 0.3};
    std::vector<MetricsReport> series = sweep_intensity(cfg, ratios);
    REQUIRE(series.size() == 3);
    for (std::size_t i = 0; i < series.size(); ++i) {
        CHECK(series[i].level == doctest::Approx(ratios[i]));
        CHECK(series[i].series == "ratio");
    }
    // ratio 0 must equal the plain baseline model's metric
    ExperimentConfig base = cfg;
    base.request.ratio = 0.0;
    MetricsReport baseline = run_experiment(base);
    CHECK(series[0].metrics.at("f1_micro") ==
          doctest::Approx(baseline.metrics.at("f1_micro")).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(sweep_intensity(cfg, {0.3, 0.1}), doctest::Contains("sorted"), Error);
    CHECK_THROWS_AS(sweep_intensity(cfg, {0.0, 0.7}), Error);
}

TEST_CASE("sweep_perturbation level zero equals the clean baseline") {
    ExperimentConfig cfg = tiny("retrain", "node", "node");
    std::vector<MetricsReport> series = sweep_perturbation(cfg, "label_noise", {0.0, 0.5});
    REQUIRE(series.size() == 2);
    MetricsReport clean = run_experiment(cfg);
    CHECK(series[0].metrics.at("f1_micro") ==
          doctest::Approx(clean.metrics.at("f1_micro")).epsilon(1e-12));
    CHECK(series[0].series == "label_noise");

    CHECK_THROWS_AS(sweep_perturbation(cfg, "fog", {0.1}), Error);
}

TEST_CASE("failures name their pipeline stage") {
    ExperimentConfig cfg = tiny("retrain", "node", "node");
    cfg.dataset.type = "dir";
    cfg.dataset.path = "/nonexistent/dataset";
    try {
        run_experiment(cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("dataset stage") != std::string::npos);
    }
}
