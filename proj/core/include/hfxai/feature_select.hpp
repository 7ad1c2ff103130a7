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

#ifndef HFXAI_FEATURE_SELECT_HPP_
#define HFXAI_FEATURE_SELECT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfxai/matrix.hpp"

namespace hfxai {

enum class SelectionMethod { kAnova, kChi2, kMutualInfo, kRfe };

std::string_view ToString(SelectionMethod method);
SelectionMethod ParseSelectionMethod(std::string_view text);

// Higher score = more relevant. Ranks are 1-based; ties in score are broken
// by ascending feature name.
struct FeatureScore {
  std::string feature;
  SelectionMethod method = SelectionMethod::kAnova;
  double score = 0.0;
  std::size_t rank = 0;
};

struct SelectionResult {
  SelectionMethod method = SelectionMethod::kAnova;
  std::size_t k = 0;
  std::vector<std::string> selected;  // rank order
  std::vector<std::string> masked;    // rank order
};

// One-way ANOVA F statistic per column.
std::vector<double> AnovaF(const Matrix& x, std::span<const int> y);

// Chi-squared statistic of per-class feature sums against the totals expected
// from the class priors. Requires nonnegative values.
std::vector<double> Chi2(const Matrix& x, std::span<const int> y);

// Plug-in mutual information (nats) between each column and the label.
// Columns with more than `bins` distinct values are cut into `bins`
// equal-frequency bins fitted on the given rows.
std::vector<double> MutualInfo(const Matrix& x, std::span<const int> y,
                               std::size_t bins = 10);

// Scores every column with a filter method (not kRfe) and assigns ranks.
// Zero-variance columns score 0 and trigger a warning.
std::vector<FeatureScore> ScoreFeatures(const Matrix& x, std::span<const int> y,
                                        const std::vector<std::string>& names,
                                        SelectionMethod method);

// Fills `rank` from `score` (descending, ties by ascending name).
void AssignRanks(std::vector<FeatureScore>& scores);

SelectionResult SelectTopK(const std::vector<FeatureScore>& scores, std::size_t k);

struct RfeConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1.0;
};

// L2 logistic regression fitted by batch gradient descent on standardized
// columns. Returns coefficients (intercept excluded). Warns when the final
// gradient norm exceeds 1e-3.
std::vector<double> FitLogisticCoefficients(const Matrix& x, std::span<const int> y,
                                            const RfeConfig& config = {});

// Full recursive-elimination ranking: the feature dropped in round t
// (smallest |coefficient|, ties drop the later name) gets score t, the last
// survivor gets score m.
std::vector<FeatureScore> RfeRanking(const Matrix& x, std::span<const int> y,
                                     const std::vector<std::string>& names,
                                     const RfeConfig& config = {});

SelectionResult RfeSelect(const Matrix& x, std::span<const int> y,
                          const std::vector<std::string>& names, std::size_t k,
                          const RfeConfig& config = {});

}  // namespace hfxai

#endif  // HFXAI_FEATURE_SELECT_HPP_
