#pragma once

#include "gu/config.hpp"
#include "gu/report.hpp"

#include <string>
#include <vector>

namespace gu {

/// Full pipeline for one config: materialize data, split, train the base
/// model, draw the unlearning request, run the method under the
/// profiler, evaluate retained-data metrics on the test set, then any
/// configured attacks. Failures carry the pipeline stage in their
/// message.
MetricsReport run_experiment(const ExperimentConfig& cfg);

/// One experiment per request ratio, reusing the same seed and the same
/// pretrained base model; ratio 0 reports the no-unlearning baseline.
std::vector<MetricsReport> sweep_intensity(const ExperimentConfig& base,
                                           const std::vector<double>& ratios);

/// One experiment per perturbation level; the perturbation is applied
/// before training. Kinds: label_noise, feature_noise, label_sparsity
/// (level = dropped fraction), feature_sparsity.
std::vector<MetricsReport> sweep_perturbation(const ExperimentConfig& base,
                                              const std::string& kind,
                                              const std::vector<double>& levels);

} // namespace gu
