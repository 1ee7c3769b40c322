#include "gu/dataset_io.hpp"

#include "gu/error.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gu {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::ParseError,
            where + ": expected integer, got '" + text + "'");
    return value;
}

double parse_real(const std::string& text, const std::string& where) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::ParseError,
            where + ": expected real, got '" + text + "'");
    return value;
}

std::ifstream open_or_fail(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

} // namespace

LoadedDataset load_dataset(const std::string& dir) {
    std::filesystem::path base(dir);
    std::ifstream nodes = open_or_fail(base / "nodes.csv");

    std::string line;
    require(static_cast<bool>(std::getline(nodes, line)), ErrorCode::ParseError,
            "nodes.csv is empty");
    std::vector<std::string> header = split_csv_line(line);
    require(header.size() >= 3 && header[0] == "id" && header[1] == "label",
            ErrorCode::ParseError, "nodes.csv header must start with id,label,f0,...");
    std::int64_t f = static_cast<std::int64_t>(header.size()) - 2;
    for (std::int64_t j = 0; j < f; ++j)
        require(header[static_cast<std::size_t>(j + 2)] == "f" + std::to_string(j),
                ErrorCode::ParseError,
                "nodes.csv header column " + std::to_string(j + 2) + " must be f" +
                    std::to_string(j));

    std::vector<std::vector<std::string>> rows;
    while (std::getline(nodes, line)) {
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
        require(rows.back().size() == header.size(), ErrorCode::ParseError,
                "nodes.csv row " + std::to_string(rows.size()) + " has " +
                    std::to_string(rows.back().size()) + " fields, expected " +
                    std::to_string(header.size()));
    }
    std::int64_t n = static_cast<std::int64_t>(rows.size());
    require(n > 0, ErrorCode::ParseError, "nodes.csv has no data rows");

    Eigen::MatrixXd features(n, f);
    Eigen::VectorXi labels(n);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<bool> labeled(static_cast<std::size_t>(n), false);
    bool any_labeled = false;
    for (const auto& row : rows) {
        std::int64_t id = parse_int(row[0], "nodes.csv id");
        require(id >= 0 && id < n, ErrorCode::ParseError,
                "node id " + std::to_string(id) + " not contiguous in [0, " + std::to_string(n) +
                    ")");
        require(!seen[static_cast<std::size_t>(id)], ErrorCode::ParseError,
                "duplicate node id " + std::to_string(id));
        seen[static_cast<std::size_t>(id)] = true;
        std::int64_t label = parse_int(row[1], "nodes.csv label");
        require(label >= -1, ErrorCode::ParseError,
                "label must be >= -1, got " + std::to_string(label));
        labeled[static_cast<std::size_t>(id)] = label >= 0;
        any_labeled = any_labeled || label >= 0;
        labels(id) = label >= 0 ? static_cast<int>(label) : 0;
        for (std::int64_t j = 0; j < f; ++j)
            features(id, j) = parse_real(row[static_cast<std::size_t>(j + 2)], "nodes.csv f" +
                                                                                  std::to_string(j));
    }

    std::ifstream edges_file = open_or_fail(base / "edges.csv");
    require(static_cast<bool>(std::getline(edges_file, line)), ErrorCode::ParseError,
            "edges.csv is empty");
    require(split_csv_line(line) == std::vector<std::string>({"src", "dst"}),
            ErrorCode::ParseError, "edges.csv header must be src,dst");
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::size_t row_no = 0;
    while (std::getline(edges_file, line)) {
        if (line.empty()) continue;
        ++row_no;
        std::vector<std::string> fields = split_csv_line(line);
        require(fields.size() == 2, ErrorCode::ParseError,
                "edges.csv row " + std::to_string(row_no) + " must have two fields");
        edges.emplace_back(parse_int(fields[0], "edges.csv src"),
                           parse_int(fields[1], "edges.csv dst"));
    }

    LoadedDataset out;
    out.graph = build_graph(features, any_labeled ? std::optional<Eigen::VectorXi>(labels)
                                                  : std::nullopt,
                            edges)
                    .graph;
    out.labeled = std::move(labeled);
    return out;
}

void save_dataset(const std::string& dir, const Graph& g) {
    std::filesystem::path base(dir);
    std::error_code ec;
    std::filesystem::create_directories(base, ec);

    std::ofstream nodes(base / "nodes.csv");
    require(nodes.good(), ErrorCode::IoError, "cannot write nodes.csv in " + dir);
    nodes << "id,label";
    for (std::int64_t j = 0; j < g.feature_dim(); ++j) nodes << ",f" << j;
    nodes << "\n";
    nodes.precision(17);
    for (NodeId v = 0; v < g.node_count; ++v) {
        nodes << v << "," << (g.labels ? (*g.labels)(v) : -1);
        for (std::int64_t j = 0; j < g.feature_dim(); ++j) nodes << "," << g.features(v, j);
        nodes << "\n";
    }

    std::ofstream edges(base / "edges.csv");
    require(edges.good(), ErrorCode::IoError, "cannot write edges.csv in " + dir);
    edges << "src,dst\n";
    for (const Edge& e : g.edges) edges << e.u << "," << e.v << "\n";
}

} // namespace gu
