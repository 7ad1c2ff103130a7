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

#ifndef HFXAI_PIPELINE_HPP_
#define HFXAI_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfxai/dataset.hpp"
#include "hfxai/ensemble.hpp"
#include "hfxai/feature_select.hpp"
#include "hfxai/matrix.hpp"
#include "hfxai/predictor.hpp"
#include "hfxai/preprocess.hpp"

namespace hfxai {

// Numerical and categorical (nominal or ordinal) inputs are ranked
// separately and the top num_k / nom_k of each group are kept. A k of 0
// drops the whole group.
struct SelectionSpec {
  bool enabled = true;
  SelectionMethod num_method = SelectionMethod::kAnova;
  std::size_t num_k = 0;
  SelectionMethod nom_method = SelectionMethod::kChi2;
  std::size_t nom_k = 0;
  // false: rank once on the whole training split and reuse that subset in
  // every fold.
  bool per_fold = true;

  friend bool operator==(const SelectionSpec&, const SelectionSpec&) = default;
};

struct CandidateConfig {
  EnsembleConfig classifier;
  SelectionSpec selection;
  PreprocessConfig preprocess;

  friend bool operator==(const CandidateConfig&, const CandidateConfig&) = default;
};

// Compact one-line label, e.g. "extra_trees anova:4 mutual_info:1".
std::string Describe(const CandidateConfig& cand);

struct FeatureSelection {
  std::size_t n_inputs = 0;
  std::vector<std::size_t> columns;  // ascending input positions
  std::vector<std::string> names;    // names of `columns`
  // Per-group results; `selected` in rank order. Empty when disabled.
  SelectionResult numerical;
  SelectionResult nominal;
};

// Ranked scores of one feature group, reusable across k.
struct GroupRanking {
  std::vector<std::size_t> columns;  // group members, input positions
  std::vector<FeatureScore> scores;  // aligned with `columns`
};

GroupRanking RankGroup(const Matrix& x, std::span<const int> y,
                       const std::vector<std::string>& names,
                       std::span<const std::size_t> columns, SelectionMethod method);

// Builds the selection from precomputed group rankings.
FeatureSelection CombineSelection(const std::vector<std::string>& names,
                                  const GroupRanking& numerical, std::size_t num_k,
                                  const GroupRanking& nominal, std::size_t nom_k);

// Partitions input positions into (numerical, categorical).
void SplitGroups(const std::vector<FeatureKind>& kinds, std::vector<std::size_t>& numerical,
                 std::vector<std::size_t>& nominal);

// Scores preprocessed training columns and keeps the top features per group.
FeatureSelection SelectFeatures(const Matrix& x, std::span<const int> y,
                                 const std::vector<std::string>& names,
                                 const std::vector<FeatureKind>& kinds,
                                 const SelectionSpec& spec);

// Preprocessing plan, feature subset and classifier fitted together on one
// set of training rows.
class FittedPipeline {
 public:
  FittedPipeline() = default;
  FittedPipeline(PreprocessPlan plan, FeatureSelection selection, FittedEnsemble model);

  const PreprocessPlan& plan() const { return plan_; }
  const FeatureSelection& selection() const { return selection_; }
  const FittedEnsemble& model() const { return model_; }
  const std::vector<std::string>& feature_names() const { return selection_.names; }

  // Model-space matrix (preprocessed, selected columns).
  Matrix Transform(const Dataset& ds, std::span<const std::size_t> rows) const;
  // Imputed values of the selected columns in original units.
  Matrix RawFeatures(const Dataset& ds, std::span<const std::size_t> rows) const;
  // Maps a raw selected row into model space.
  std::vector<double> ToModelSpace(std::span<const double> raw) const;

  std::vector<double> PredictPositive(const Dataset& ds,
                                      std::span<const std::size_t> rows) const;
  std::vector<int> PredictClasses(const Dataset& ds, std::span<const std::size_t> rows) const;

 private:
  PreprocessPlan plan_;
  FeatureSelection selection_;
  FittedEnsemble model_;
};

FittedPipeline FitPipeline(const Dataset& ds, std::span<const std::size_t> train,
                           const CandidateConfig& cand, std::uint64_t seed);

// Predictor over raw (original-unit) selected features, so explanations and
// partial-dependence grids read in clinical units.
class PipelinePredictor final : public Predictor {
 public:
  explicit PipelinePredictor(const FittedPipeline& pipeline) : pipeline_(pipeline) {}

  const std::vector<std::string>& feature_names() const override {
    return pipeline_.feature_names();
  }
  double PredictPositive(std::span<const double> x) const override;
  using Predictor::PredictPositive;

 private:
  const FittedPipeline& pipeline_;
};

}  // namespace hfxai

#endif  // HFXAI_PIPELINE_HPP_
