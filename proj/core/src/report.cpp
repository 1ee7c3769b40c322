#include "gu/report.hpp"

#include "gu/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace gu {

namespace {

std::string number_repr(double x) { return nlohmann::json(x).dump(); }

nlohmann::json attack_to_json(const AttackReport& attack) {
    nlohmann::json doc;
    doc["kind"] = attack.kind;
    doc["auc"] = attack.auc;
    if (attack.kind == "poison") {
        doc["auc_before"] = attack.auc_before;
        doc["auc_after"] = attack.auc_after;
        doc["delta"] = attack.auc_after - attack.auc_before;
        doc["poison_edges"] = attack.poison_edges;
    } else {
        doc["members"] = attack.members;
        doc["nonmembers"] = attack.nonmembers;
    }
    doc["seed"] = attack.seed;
    return doc;
}

AttackReport attack_from_json(const nlohmann::json& doc) {
    AttackReport attack;
    attack.kind = doc.at("kind").get<std::string>();
    attack.auc = doc.at("auc").get<double>();
    if (attack.kind == "poison") {
        attack.auc_before = doc.at("auc_before").get<double>();
        attack.auc_after = doc.at("auc_after").get<double>();
        attack.poison_edges = doc.at("poison_edges").get<std::int64_t>();
    } else {
        attack.members = doc.at("members").get<std::int64_t>();
        attack.nonmembers = doc.at("nonmembers").get<std::int64_t>();
    }
    attack.seed = doc.at("seed").get<std::uint64_t>();
    return attack;
}

} // namespace

std::string report_to_json(const MetricsReport& report) {
    nlohmann::json doc;
    doc["method"] = report.method;
    doc["backbone"] = report.backbone;
    doc["task"] = report.task;
    doc["request"] = report.request_kind;
    doc["level"] = report.level;
    if (!report.series.empty()) doc["series"] = report.series;
    doc["metrics"] = report.metrics;
    if (report.attack) doc["attack"] = attack_to_json(*report.attack);
    doc["unlearn_seconds"] = report.unlearn_seconds;
    doc["total_seconds"] = report.total_seconds;
    doc["peak_bytes"] = report.peak_bytes;
    doc["mem_probe"] = report.mem_probe;
    doc["seed"] = report.seed;
    doc["digest"] = report.digest;
    return doc.dump();
}

MetricsReport report_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("report json: ") + e.what());
    }
    MetricsReport report;
    try {
        report.method = doc.at("method").get<std::string>();
        report.backbone = doc.at("backbone").get<std::string>();
        report.task = doc.at("task").get<std::string>();
        report.request_kind = doc.at("request").get<std::string>();
        report.level = doc.at("level").get<double>();
        if (doc.contains("series")) report.series = doc.at("series").get<std::string>();
        report.metrics = doc.at("metrics").get<std::map<std::string, double>>();
        if (doc.contains("attack")) report.attack = attack_from_json(doc.at("attack"));
        report.unlearn_seconds = doc.at("unlearn_seconds").get<double>();
        report.total_seconds = doc.at("total_seconds").get<double>();
        report.peak_bytes = doc.at("peak_bytes").get<std::int64_t>();
        report.mem_probe = doc.at("mem_probe").get<std::string>();
        report.seed = doc.at("seed").get<std::uint64_t>();
        report.digest = doc.at("digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("report json: ") + e.what());
    }
    return report;
}

std::string summary_csv_header() {
    return "method,backbone,task,request,level,metric,value,unlearn_seconds,peak_bytes,seed";
}

std::vector<std::string> summary_csv_rows(const MetricsReport& report) {
    std::vector<std::string> rows;
    for (const auto& [name, value] : report.metrics) {
        rows.push_back(report.method + "," + report.backbone + "," + report.task + "," +
                       report.request_kind + "," + number_repr(report.level) + "," + name + "," +
                       number_repr(value) + "," + number_repr(report.unlearn_seconds) + "," +
                       std::to_string(report.peak_bytes) + "," + std::to_string(report.seed));
    }
    return rows;
}

std::string primary_metric_name(const std::string& task) {
    if (task == "node") return "f1_micro";
    if (task == "link") return "auc";
    if (task == "graph") return "accuracy";
    return "f1_micro";
}

void emit_report(const std::vector<MetricsReport>& reports, const std::string& out_dir) {
    require(!reports.empty(), ErrorCode::EmptySet, "no reports to emit");
    std::filesystem::path base(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(base, ec);

    {
        std::ofstream jsonl(base / "results.jsonl", std::ios::trunc);
        require(jsonl.good(), ErrorCode::IoError, "cannot write results.jsonl in " + out_dir);
        for (const MetricsReport& r : reports) jsonl << report_to_json(r) << "\n";
    }
    {
        std::ofstream csv(base / "summary.csv", std::ios::trunc);
        require(csv.good(), ErrorCode::IoError, "cannot write summary.csv in " + out_dir);
        csv << summary_csv_header() << "\n";
        for (const MetricsReport& r : reports)
            for (const std::string& row : summary_csv_rows(r)) csv << row << "\n";
    }

    // one series file per sweep, ordered as reported
    std::vector<std::string> series_names;
    for (const MetricsReport& r : reports)
        if (!r.series.empty() &&
            std::find(series_names.begin(), series_names.end(), r.series) == series_names.end())
            series_names.push_back(r.series);
    for (const std::string& name : series_names) {
        std::ofstream csv(base / ("series_" + name + ".csv"), std::ios::trunc);
        require(csv.good(), ErrorCode::IoError, "cannot write series csv in " + out_dir);
        csv << "x,y,method\n";
        for (const MetricsReport& r : reports) {
            if (r.series != name) continue;
            std::string metric = primary_metric_name(r.task);
            auto it = r.metrics.find(metric);
            double y = it == r.metrics.end() ? 0.0 : it->second;
            csv << number_repr(r.level) << "," << number_repr(y) << "," << r.method << "\n";
        }
    }
}

} // namespace gu
