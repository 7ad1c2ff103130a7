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

#include "hfxai/metrics.hpp"

#include <string>

#include "hfxai/errors.hpp"

namespace hfxai {
namespace {

double Ratio(double num, double den, bool& degenerate) {
  if (den == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return num / den;
}

}  // namespace

ConfusionMatrix Confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw ArgumentError("truth and predictions differ in length");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if ((truth[i] != 0 && truth[i] != 1) || (predicted[i] != 0 && predicted[i] != 1)) {
      throw ArgumentError("labels must be 0 or 1");
    }
    const bool pos = truth[i] == 1;
    const bool hit = predicted[i] == 1;
    if (pos && hit) ++cm.tp;
    if (pos && !hit) ++cm.fn;
    if (!pos && hit) ++cm.fp;
    if (!pos && !hit) ++cm.tn;
  }
  return cm;
}

MetricsReport ClassificationMetrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ArgumentError("confusion matrix is empty");
  const double tp = static_cast<double>(cm.tp);
  const double tn = static_cast<double>(cm.tn);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  MetricsReport m;
  m.accuracy = (tp + tn) / (tp + tn + fp + fn);
  m.sensitivity = Ratio(tp, tp + fn, m.degenerate);
  m.specificity = Ratio(tn, tn + fp, m.degenerate);
  m.balanced_accuracy = (m.sensitivity + m.specificity) / 2.0;
  m.precision = Ratio(tp, tp + fp, m.degenerate);
  m.f1 = Ratio(2.0 * m.precision * m.sensitivity, m.precision + m.sensitivity,
               m.degenerate);
  return m;
}

MetricsReport MeanMetrics(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw ArgumentError("no reports to average");
  MetricsReport out;
  for (const auto& r : reports) {
    out.accuracy += r.accuracy;
    out.balanced_accuracy += r.balanced_accuracy;
    out.sensitivity += r.sensitivity;
    out.specificity += r.specificity;
    out.precision += r.precision;
    out.f1 += r.f1;
    out.degenerate = out.degenerate || r.degenerate;
  }
  const double n = static_cast<double>(reports.size());
  out.accuracy /= n;
  out.balanced_accuracy /= n;
  out.sensitivity /= n;
  out.specificity /= n;
  out.precision /= n;
  out.f1 /= n;
  return out;
}

Metric ParseMetric(std::string_view name) {
  if (name == "accuracy") return Metric::kAccuracy;
  if (name == "balanced_accuracy") return Metric::kBalancedAccuracy;
  if (name == "sensitivity" || name == "recall") return Metric::kSensitivity;
  if (name == "specificity") return Metric::kSpecificity;
  if (name == "precision") return Metric::kPrecision;
  if (name == "f1") return Metric::kF1;
  throw ArgumentError("unknown scoring metric '" + std::string(name) + "'");
}

std::string_view ToString(Metric metric) {
  switch (metric) {
    case Metric::kAccuracy:
      return "accuracy";
    case Metric::kBalancedAccuracy:
      return "balanced_accuracy";
    case Metric::kSensitivity:
      return "sensitivity";
    case Metric::kSpecificity:
      return "specificity";
    case Metric::kPrecision:
      return "precision";
    case Metric::kF1:
      return "f1";
  }
  return "unknown";
}

double MetricValue(const MetricsReport& report, Metric metric) {
  switch (metric) {
    case Metric::kAccuracy:
      return report.accuracy;
    case Metric::kBalancedAccuracy:
      return report.balanced_accuracy;
    case Metric::kSensitivity:
      return report.sensitivity;
    case Metric::kSpecificity:
      return report.specificity;
    case Metric::kPrecision:
      return report.precision;
    case Metric::kF1:
      return report.f1;
  }
  return 0.0;
}

ExplainabilityScore ComputeExplainability(std::size_t selected, std::size_t total,
                                          double baseline_score, double model_score) {
  if (total == 0 || selected > total) {
    throw ArgumentError("selected feature count must lie in [0, total]");
  }
  if (model_score == 0.0) {
    throw ArgumentError("fidelity is undefined when the model score is 0");
  }
  ExplainabilityScore s;
  s.interpretability =
      static_cast<double>(total - selected) / static_cast<double>(total);
  s.fidelity = baseline_score / model_score;
  if (s.fidelity + s.interpretability == 0.0) {
    throw ArgumentError("FIR is undefined when fidelity and interpretability are 0");
  }
  s.fir = s.fidelity / (s.fidelity + s.interpretability);
  return s;
}

}  // namespace hfxai
