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

#ifndef HFXAI_MODEL_SELECT_HPP_
#define HFXAI_MODEL_SELECT_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfxai/dataset.hpp"
#include "hfxai/metrics.hpp"
#include "hfxai/pipeline.hpp"
#include "hfxai/split.hpp"

namespace hfxai {

struct CandidateResult {
  std::size_t index = 0;  // grid position
  CandidateConfig config;
  std::uint64_t seed = 0;
  bool valid = true;
  std::string invalid_reason;
  std::vector<MetricsReport> fold_metrics;
  MetricsReport cv_metrics;  // unweighted mean of fold_metrics
  // Selection refit on the whole training partition (numerical picks first,
  // then nominal picks, each in rank order).
  std::vector<std::string> selected_features;
  std::size_t n_inputs = 0;
  std::optional<MetricsReport> test_metrics;
};

// Cross-validation over fixed folds. Per-fold preprocessing and feature
// rankings are computed once and shared by every candidate. Evaluate is
// safe to call from several threads.
class CrossValidator {
 public:
  CrossValidator(const Dataset& ds, const SplitIndices& split, FoldPlan folds);
  ~CrossValidator();
  CrossValidator(const CrossValidator&) = delete;
  CrossValidator& operator=(const CrossValidator&) = delete;

  const FoldPlan& folds() const;

  // Fits preprocessing, selection and classifier inside each fold and scores
  // the held-out rows. A fold whose training rows hold a single class marks
  // the candidate invalid.
  CandidateResult Evaluate(const CandidateConfig& cand, std::uint64_t seed) const;

  // CV balanced accuracy of a plain decision tree on the candidate's own
  // preprocessing and per-fold feature selection.
  double FidelityBaseline(const CandidateConfig& cand, std::uint64_t seed) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CandidateResult EvaluateCandidate(const Dataset& ds, const SplitIndices& split,
                                  const FoldPlan& folds, const CandidateConfig& cand,
                                  std::uint64_t seed);

double FidelityBaseline(const Dataset& ds, const SplitIndices& split, const FoldPlan& folds,
                        const CandidateConfig& cand, std::uint64_t seed);

struct GridResult {
  Metric scoring = Metric::kBalancedAccuracy;
  std::vector<CandidateResult> candidates;  // grid order
  std::vector<std::size_t> ranking;         // best first; invalid last
  std::vector<std::size_t> per_classifier_best;  // first-appearance order of kinds
};

// Seed of the candidate at a grid position.
std::uint64_t CandidateSeed(std::uint64_t master_seed, std::size_t index);

// Evaluates every candidate and ranks by `scoring` (descending, ties by
// earlier grid position).
GridResult GridSearch(const CrossValidator& cv, std::span<const CandidateConfig> grid,
                      Metric scoring, std::uint64_t master_seed, std::size_t threads = 1);
GridResult GridSearch(const Dataset& ds, const SplitIndices& split, const FoldPlan& folds,
                      std::span<const CandidateConfig> grid, std::string_view scoring,
                      std::uint64_t master_seed, std::size_t threads = 1);

// Default grid: each classifier x num_method {anova,
// mutual_info} x num_k 1..n_num x nom_method {chi2, mutual_info, rfe} x
// nom_k 1..n_nom, or one all-features candidate per classifier.
std::vector<ClassifierKind> DefaultClassifiers();
std::vector<CandidateConfig> DefaultGrid(const Dataset& ds,
                                         std::span<const ClassifierKind> kinds,
                                         bool feature_selection,
                                         const PreprocessConfig& preprocess = {});

struct TestEvaluation {
  MetricsReport metrics;
  FittedPipeline pipeline;
};

// Refits the winning configuration on the whole training partition and
// scores the untouched test rows.
TestEvaluation FinalTestEval(const CandidateResult& best, const Dataset& ds,
                             const SplitIndices& split);

// Seed of the final refit for a candidate seed.
std::uint64_t FinalFitSeed(std::uint64_t candidate_seed);

}  // namespace hfxai

#endif  // HFXAI_MODEL_SELECT_HPP_
