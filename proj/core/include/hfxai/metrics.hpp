/*
 * Copyright 2026 The hfxai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HFXAI_METRICS_HPP_
#define HFXAI_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hfxai {

// Class 1 (death event) is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix Confusion(std::span<const int> truth, std::span<const int> predicted);

struct MetricsReport {
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  // Some ratio had a zero denominator and was reported as 0.
  bool degenerate = false;
};

// Accuracy, sensitivity, specificity, balanced accuracy, precision and F1 of a
// confusion matrix. Throws ArgumentError on an empty matrix.
MetricsReport ClassificationMetrics(const ConfusionMatrix& cm);

// Field-wise unweighted mean (cross-validation aggregation). F1 is the mean
// of the per-fold F1 values, not recomputed from the mean precision/recall.
MetricsReport MeanMetrics(std::span<const MetricsReport> reports);

enum class Metric {
  kAccuracy,
  kBalancedAccuracy,
  kSensitivity,
  kSpecificity,
  kPrecision,
  kF1,
};

Metric ParseMetric(std::string_view name);
std::string_view ToString(Metric metric);
double MetricValue(const MetricsReport& report, Metric metric);

// Interpretability = masked / total, Fidelity = baseline score / model score
// and FIR = F / (F + I).
struct ExplainabilityScore {
  double interpretability = 0.0;
  double fidelity = 0.0;
  double fir = 0.0;
};

ExplainabilityScore ComputeExplainability(std::size_t selected, std::size_t total,
                                          double baseline_score, double model_score);

}  // namespace hfxai

#endif  // HFXAI_METRICS_HPP_
