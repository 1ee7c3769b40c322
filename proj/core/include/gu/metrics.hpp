#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gu {

enum class F1Mode { Micro, Macro };

/// Micro mode pools TP/FP/FN globally (identical to accuracy for
/// single-label multiclass input); macro averages per-class F1 with
/// zero-support classes contributing 0.
double f1(const std::vector<int>& preds, const std::vector<int>& labels, F1Mode mode);

/// Exact Mann-Whitney AUC: fraction of (positive, negative) pairs ranked
/// correctly, ties credited 0.5.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels);

struct PrecisionResult {
    double value = 0.0;
    bool no_predictions = false; // nothing predicted as the class; value forced to 0
};

PrecisionResult precision(const std::vector<int>& preds, const std::vector<int>& labels,
                          int positive_class);

std::vector<int> to_int_vector(const Eigen::VectorXi& v);
std::vector<double> to_double_vector(const Eigen::VectorXd& v);

} // namespace gu
