#include "gu/metrics.hpp"

#include "gu/error.hpp"

#include <algorithm>
#include <numeric>

namespace gu {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    require(a == b, ErrorCode::LengthMismatch,
            "length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    require(a > 0, ErrorCode::LengthMismatch, "empty input");
}

} // namespace

double f1(const std::vector<int>& preds, const std::vector<int>& labels, F1Mode mode) {
    check_lengths(preds.size(), labels.size());
    int num_classes = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        num_classes = std::max({num_classes, preds[i] + 1, labels[i] + 1});

    std::vector<std::int64_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == labels[i]) {
            ++tp[preds[i]];
        } else {
            ++fp[preds[i]];
            ++fn[labels[i]];
        }
    }

    if (mode == F1Mode::Micro) {
        std::int64_t tp_sum = std::accumulate(tp.begin(), tp.end(), std::int64_t{0});
        std::int64_t fp_sum = std::accumulate(fp.begin(), fp.end(), std::int64_t{0});
        std::int64_t fn_sum = std::accumulate(fn.begin(), fn.end(), std::int64_t{0});
        double denom = static_cast<double>(2 * tp_sum + fp_sum + fn_sum);
        return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp_sum) / denom;
    }

    double total = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        double denom = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
        if (denom > 0.0) total += 2.0 * static_cast<double>(tp[c]) / denom;
        // zero-support classes contribute 0
    }
    return total / static_cast<double>(num_classes);
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_lengths(scores.size(), labels.size());
    std::int64_t positives = 0;
    for (int y : labels) {
        require(y == 0 || y == 1, ErrorCode::OutOfRange, "labels must be 0/1");
        positives += y;
    }
    std::int64_t negatives = static_cast<std::int64_t>(labels.size()) - positives;
    require(positives > 0 && negatives > 0, ErrorCode::SingleClass,
            "AUC needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // average ranks within tie groups, then Mann-Whitney U
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0; // ranks are 1-based
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    double u = rank_sum_pos - 0.5 * static_cast<double>(positives) *
                                  static_cast<double>(positives + 1);
    return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
    check_lengths(preds.size(), labels.size());
    std::int64_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i] == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

PrecisionResult precision(const std::vector<int>& preds, const std::vector<int>& labels,
                          int positive_class) {
    check_lengths(preds.size(), labels.size());
    std::int64_t tp = 0, predicted = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == positive_class) {
            ++predicted;
            if (labels[i] == positive_class) ++tp;
        }
    }
    if (predicted == 0) return {0.0, true};
    return {static_cast<double>(tp) / static_cast<double>(predicted), false};
}

std::vector<int> to_int_vector(const Eigen::VectorXi& v) {
    return std::vector<int>(v.data(), v.data() + v.size());
}

std::vector<double> to_double_vector(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

} // namespace gu
