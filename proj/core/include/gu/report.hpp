#pragma once

#include "gu/attack.hpp"
#include "gu/profile.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gu {

/// One experiment outcome. Metric values, timing, memory, and enough
/// identity (seed + config digest) to reproduce or deduplicate the run.
struct MetricsReport {
    std::string method;
    std::string backbone;
    std::string task;
    std::string request_kind;
    double level = 0.0;  // request ratio or perturbation level
    std::string series;  // sweep name; empty for standalone runs
    std::map<std::string, double> metrics;
    std::optional<AttackReport> attack;
    double unlearn_seconds = 0.0;
    double total_seconds = 0.0;
    std::int64_t peak_bytes = 0;
    std::string mem_probe = "none";
    std::uint64_t seed = 0;
    std::string digest;
};

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

/// results.jsonl (one report per line), summary.csv, and one
/// series_<name>.csv per sweep; byte-stable for identical inputs.
void emit_report(const std::vector<MetricsReport>& reports, const std::string& out_dir);

/// Canonical line for summary.csv, exposed for tests.
std::string summary_csv_header();
std::vector<std::string> summary_csv_rows(const MetricsReport& report);

/// Headline metric per task: node -> f1_micro, link -> auc,
/// graph -> accuracy.
std::string primary_metric_name(const std::string& task);

} // namespace gu
