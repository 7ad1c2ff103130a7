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

#ifndef HFXAI_PREPROCESS_HPP_
#define HFXAI_PREPROCESS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfxai/dataset.hpp"
#include "hfxai/matrix.hpp"

namespace hfxai {

enum class NumericImpute { kMean, kMedian };
enum class Normalization { kZScore, kMinMax, kNone };

std::string_view ToString(NumericImpute v);
std::string_view ToString(Normalization v);
NumericImpute ParseNumericImpute(std::string_view text);
Normalization ParseNormalization(std::string_view text);

// Nominal and ordinal columns are always imputed with the training mode.
struct PreprocessConfig {
  NumericImpute impute_numerical = NumericImpute::kMean;
  Normalization normalize = Normalization::kZScore;

  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

// Learned per-column statistics. Output value = (imputed value - center) /
// scale for numerical columns; nominal and ordinal columns keep their codes.
struct ColumnTransform {
  std::string name;
  FeatureKind kind = FeatureKind::kNumerical;
  std::size_t source_col = 0;
  double fill = 0.0;
  double center = 0.0;
  double scale = 1.0;
  std::vector<double> seen_categories;  // sorted; nominal/ordinal only
};

class PreprocessPlan {
 public:
  PreprocessPlan() = default;
  PreprocessPlan(PreprocessConfig config, std::vector<ColumnTransform> columns)
      : config_(config), columns_(std::move(columns)) {}

  const PreprocessConfig& config() const { return config_; }
  const std::vector<ColumnTransform>& columns() const { return columns_; }
  std::vector<std::string> feature_names() const;
  std::vector<FeatureKind> feature_kinds() const;

  // Transforms one raw cell of output column j. `missing` selects the fill.
  // Unseen nominal categories map to the mode with a warning.
  double TransformValue(std::size_t j, double raw, bool missing) const;
  // Inverse of the numerical affine map (identity for nominal columns).
  double InverseTransform(std::size_t j, double transformed) const;

 private:
  PreprocessConfig config_;
  std::vector<ColumnTransform> columns_;
};

// Learns imputation and normalization statistics from `train` rows only.
// Standard deviations are population (1/n); a zero spread is stored as 1.
PreprocessPlan FitPlan(const Dataset& ds, std::span<const std::size_t> train,
                       const PreprocessConfig& config);

// Rows x inputs matrix, columns in the dataset's input order.
Matrix ApplyPlan(const PreprocessPlan& plan, const Dataset& ds,
                 std::span<const std::size_t> rows);

}  // namespace hfxai

#endif  // HFXAI_PREPROCESS_HPP_
