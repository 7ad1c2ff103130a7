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

#include "hfxai/pipeline.hpp"

#include <algorithm>
#include <string>

#include "hfxai/errors.hpp"

namespace hfxai {

std::string Describe(const CandidateConfig& cand) {
  std::string out(ToString(cand.classifier.kind));
  if (!cand.selection.enabled) return out + " all-features";
  out += " ";
  out += ToString(cand.selection.num_method);
  out += ":" + std::to_string(cand.selection.num_k) + " ";
  out += ToString(cand.selection.nom_method);
  out += ":" + std::to_string(cand.selection.nom_k);
  if (!cand.selection.per_fold) out += " split-ranked";
  return out;
}

void SplitGroups(const std::vector<FeatureKind>& kinds, std::vector<std::size_t>& numerical,
                 std::vector<std::size_t>& nominal) {
  numerical.clear();
  nominal.clear();
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    (kinds[j] == FeatureKind::kNumerical ? numerical : nominal).push_back(j);
  }
}

GroupRanking RankGroup(const Matrix& x, std::span<const int> y,
                       const std::vector<std::string>& names,
                       std::span<const std::size_t> columns, SelectionMethod method) {
  GroupRanking out;
  out.columns.assign(columns.begin(), columns.end());
  if (columns.empty()) return out;
  const Matrix sub = x.SelectColumns(out.columns);
  std::vector<std::string> sub_names;
  for (std::size_t c : columns) sub_names.push_back(names.at(c));
  out.scores = method == SelectionMethod::kRfe ? RfeRanking(sub, y, sub_names)
                                               : ScoreFeatures(sub, y, sub_names, method);
  return out;
}

namespace {

SelectionResult TakeGroup(const GroupRanking& group, std::size_t k, const char* label) {
  if (k > group.columns.size()) {
    throw ArgumentError(std::string(label) + " k=" + std::to_string(k) + " exceeds the " +
                        std::to_string(group.columns.size()) + " available features");
  }
  if (k == 0) {
    SelectionResult none;
    if (!group.scores.empty()) none.method = group.scores.front().method;
    for (const auto& s : group.scores) none.masked.push_back(s.feature);
    return none;
  }
  return SelectTopK(group.scores, k);
}

}  // namespace

FeatureSelection CombineSelection(const std::vector<std::string>& names,
                                  const GroupRanking& numerical, std::size_t num_k,
                                  const GroupRanking& nominal, std::size_t nom_k) {
  FeatureSelection out;
  out.n_inputs = names.size();
  out.numerical = TakeGroup(numerical, num_k, "numerical");
  out.nominal = TakeGroup(nominal, nom_k, "nominal");
  for (const auto* result : {&out.numerical, &out.nominal}) {
    for (const auto& name : result->selected) {
      const auto it = std::find(names.begin(), names.end(), name);
      out.columns.push_back(static_cast<std::size_t>(it - names.begin()));
    }
  }
  if (out.columns.empty()) throw ArgumentError("feature selection kept no features");
  std::sort(out.columns.begin(), out.columns.end());
  for (std::size_t c : out.columns) out.names.push_back(names[c]);
  return out;
}

FeatureSelection SelectFeatures(const Matrix& x, std::span<const int> y,
                                const std::vector<std::string>& names,
                                const std::vector<FeatureKind>& kinds,
                                const SelectionSpec& spec) {
  if (names.size() != x.cols() || kinds.size() != x.cols()) {
    throw ArgumentError("one name and kind per column required");
  }
  if (!spec.enabled) {
    FeatureSelection all;
    all.n_inputs = names.size();
    all.names = names;
    for (std::size_t j = 0; j < names.size(); ++j) all.columns.push_back(j);
    return all;
  }
  std::vector<std::size_t> num_cols;
  std::vector<std::size_t> nom_cols;
  SplitGroups(kinds, num_cols, nom_cols);
  return CombineSelection(names, RankGroup(x, y, names, num_cols, spec.num_method),
                          spec.num_k, RankGroup(x, y, names, nom_cols, spec.nom_method),
                          spec.nom_k);
}

FittedPipeline::FittedPipeline(PreprocessPlan plan, FeatureSelection selection,
                               FittedEnsemble model)
    : plan_(std::move(plan)), selection_(std::move(selection)), model_(std::move(model)) {
  if (model_.n_features() != selection_.columns.size()) {
    throw ArgumentError("pipeline model arity does not match the feature selection");
  }
  for (std::size_t c : selection_.columns) {
    if (c >= plan_.columns().size()) throw ArgumentError("selected column out of range");
  }
}

Matrix FittedPipeline::Transform(const Dataset& ds, std::span<const std::size_t> rows) const {
  return ApplyPlan(plan_, ds, rows).SelectColumns(selection_.columns);
}

Matrix FittedPipeline::RawFeatures(const Dataset& ds,
                                   std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), selection_.columns.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < selection_.columns.size(); ++j) {
      const ColumnTransform& col = plan_.columns()[selection_.columns[j]];
      out(i, j) = ds.is_missing(rows[i], col.source_col) ? col.fill
                                                          : ds.value(rows[i], col.source_col);
    }
  }
  return out;
}

std::vector<double> FittedPipeline::ToModelSpace(std::span<const double> raw) const {
  if (raw.size() != selection_.columns.size()) {
    throw ArgumentError("row has " + std::to_string(raw.size()) + " values, pipeline expects " +
                        std::to_string(selection_.columns.size()));
  }
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    out[j] = plan_.TransformValue(selection_.columns[j], raw[j], false);
  }
  return out;
}

std::vector<double> FittedPipeline::PredictPositive(const Dataset& ds,
                                                    std::span<const std::size_t> rows) const {
  return model_.PredictPositive(Transform(ds, rows));
}

std::vector<int> FittedPipeline::PredictClasses(const Dataset& ds,
                                                std::span<const std::size_t> rows) const {
  return model_.PredictClasses(Transform(ds, rows));
}

FittedPipeline FitPipeline(const Dataset& ds, std::span<const std::size_t> train,
                           const CandidateConfig& cand, std::uint64_t seed) {
  PreprocessPlan plan = FitPlan(ds, train, cand.preprocess);
  const Matrix x = ApplyPlan(plan, ds, train);
  const std::vector<int> all_labels = ds.labels();
  std::vector<int> y;
  y.reserve(train.size());
  for (std::size_t r : train) y.push_back(all_labels[r]);
  FeatureSelection selection =
      SelectFeatures(x, y, plan.feature_names(), plan.feature_kinds(), cand.selection);
  EnsembleConfig config = cand.classifier;
  config.seed = seed;
  FittedEnsemble model = Fit(config, x.SelectColumns(selection.columns), y, selection.names);
  return FittedPipeline(std::move(plan), std::move(selection), std::move(model));
}

double PipelinePredictor::PredictPositive(std::span<const double> x) const {
  return pipeline_.model().PredictPositive(pipeline_.ToModelSpace(x));
}

}  // namespace hfxai
