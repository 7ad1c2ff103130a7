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

#ifndef HFXAI_REPORT_HPP_
#define HFXAI_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hfxai/dataset.hpp"
#include "hfxai/explain.hpp"
#include "hfxai/metrics.hpp"
#include "hfxai/model_select.hpp"
#include "hfxai/pipeline.hpp"
#include "hfxai/split.hpp"

namespace hfxai {

// Everything a run depends on. Key-value config files use the field names
// below (`key = value`, `#` comments, lists comma separated, k ranges as
// "1-7" or "1,3,5").
struct RunConfig {
  std::filesystem::path data_path;
  std::uint64_t seed = 42;
  double test_ratio = 0.3;
  std::size_t folds = 5;
  std::string scoring = "balanced_accuracy";
  bool feature_selection = true;
  std::string selection_scope = "per_fold";  // or "training_split"
  // Also evaluate every classifier on all features.
  bool compare_without_selection = true;
  std::vector<std::string> classifiers;  // empty: the six ensembles
  std::vector<std::string> drop_features;
  std::vector<std::string> num_methods{"anova", "mutual_info"};
  std::vector<std::string> nom_methods{"chi2", "mutual_info", "rfe"};
  std::vector<std::size_t> num_k;  // empty: 1..number of numerical inputs
  std::vector<std::size_t> nom_k;  // empty: 1..number of nominal inputs
  std::size_t n_estimators = 100;
  std::string impute = "mean";
  std::string normalize = "zscore";
  std::vector<std::string> explainers{"gini", "path", "permutation", "pdp", "shap"};
  std::size_t permutation_repeats = 10;
  std::size_t pdp_grid_points = 20;
  std::size_t background_rows = 100;
  std::size_t shap_rows = 0;  // 0: every test row
  std::size_t threads = 1;
  std::filesystem::path out_dir = "hfxai_out";
};

// Throws ArgumentError naming the first invalid field.
void Validate(const RunConfig& config);

// Applies `key = value` lines on top of `config`. Unknown keys and malformed
// values raise ArgumentError with the line number.
void ApplyConfigText(std::istream& in, RunConfig& config);
void ApplyConfigFile(const std::filesystem::path& path, RunConfig& config);

struct ColumnSummary {
  std::string name;
  FeatureKind kind = FeatureKind::kNumerical;
  std::size_t missing = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct DatasetSummary {
  std::size_t rows = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<ColumnSummary> columns;
};

DatasetSummary Summarize(const Dataset& ds);

struct ClassifierSummary {
  std::size_t candidate = 0;  // index into RunReport::grid.candidates
  double baseline_bacc = 0.0;
  ExplainabilityScore explainability;
  std::optional<MetricsReport> test_metrics;
};

struct Exemplar {
  std::string label;  // "true_negative" or "true_positive"
  std::size_t row = 0;
  std::optional<PathContribution> path;
  std::optional<ShapValues> shap;
};

struct ExplanationSet {
  std::optional<ImportanceRanking> gini;
  std::optional<ImportanceRanking> permutation;
  std::optional<ShapSummary> shap;
  std::optional<ImportanceRanking> shap_ranking;
  std::vector<PdpCurve> pdp;
  std::vector<PdpCurve> pdp2d;
  std::vector<Exemplar> exemplars;
  std::vector<std::string> notes;
};

struct StageFailure {
  std::string stage;
  std::string message;
};

struct RunReport {
  RunConfig config;
  DatasetSummary dataset;
  SplitIndices split;
  std::optional<GridResult> grid;
  std::vector<ClassifierSummary> per_classifier;
  std::optional<GridResult> grid_without_selection;
  // Index into per_classifier of the model whose FIR is closest to 0.5.
  std::optional<std::size_t> balanced_pick;
  std::optional<FittedPipeline> picked_model;
  ExplanationSet explanations;
  std::vector<StageFailure> failures;

  bool ok() const { return failures.empty(); }
  const CandidateResult& Candidate(const ClassifierSummary& s) const {
    return grid->candidates[s.candidate];
  }
};

// argmin |FIR - 0.5|, ties by higher CV balanced accuracy, then earlier.
std::size_t BalancedPick(const std::vector<double>& fir, const std::vector<double>& bacc);

// Loads the data (IoError/SchemaError/ParseError propagate) and runs split,
// grid search, explainability scores, test evaluation and the explainers.
// Later stage errors are recorded in `failures` and stop the run.
RunReport Run(const RunConfig& config);

// Same, on an already loaded dataset.
RunReport Run(const RunConfig& config, const Dataset& ds);

// Explainer suite on a fitted pipeline over `rows` of `ds`; the background
// is drawn from `background_rows`.
ExplanationSet Explain(const FittedPipeline& pipeline, const Dataset& ds,
                       std::span<const std::size_t> rows,
                       std::span<const std::size_t> background_rows, const RunConfig& config);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
};

// Writes report.json, CSV tables, explanation exports, model.json and
// manifest.json. Returns the manifest (sorted by path, excluding itself).
std::vector<ManifestEntry> EmitReport(const RunReport& report,
                                      const std::filesystem::path& dir);

// Explanation exports only (used by the `explain` subcommand).
std::vector<ManifestEntry> EmitExplanations(const ExplanationSet& explanations,
                                            const std::filesystem::path& dir);

// Canonical JSON of the report (sorted keys, six decimals).
std::string ReportJson(const RunReport& report);

}  // namespace hfxai

#endif  // HFXAI_REPORT_HPP_
