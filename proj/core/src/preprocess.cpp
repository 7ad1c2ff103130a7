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

#include "hfxai/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"

namespace hfxai {

std::string_view ToString(NumericImpute v) {
  return v == NumericImpute::kMean ? "mean" : "median";
}

std::string_view ToString(Normalization v) {
  switch (v) {
    case Normalization::kZScore:
      return "zscore";
    case Normalization::kMinMax:
      return "minmax";
    case Normalization::kNone:
      return "none";
  }
  return "none";
}

NumericImpute ParseNumericImpute(std::string_view text) {
  if (text == "mean") return NumericImpute::kMean;
  if (text == "median") return NumericImpute::kMedian;
  throw ArgumentError("unknown imputation '" + std::string(text) + "'");
}

Normalization ParseNormalization(std::string_view text) {
  if (text == "zscore") return Normalization::kZScore;
  if (text == "minmax") return Normalization::kMinMax;
  if (text == "none") return Normalization::kNone;
  throw ArgumentError("unknown normalization '" + std::string(text) + "'");
}

std::vector<std::string> PreprocessPlan::feature_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

std::vector<FeatureKind> PreprocessPlan::feature_kinds() const {
  std::vector<FeatureKind> out;
  for (const auto& c : columns_) out.push_back(c.kind);
  return out;
}

double PreprocessPlan::TransformValue(std::size_t j, double raw, bool missing) const {
  const ColumnTransform& col = columns_.at(j);
  double v = missing ? col.fill : raw;
  if (col.kind != FeatureKind::kNumerical) {
    if (!std::binary_search(col.seen_categories.begin(), col.seen_categories.end(), v)) {
      Warn("column '" + col.name + "': unseen category " + std::to_string(v) +
           " mapped to the training mode");
      v = col.fill;
    }
    return v;
  }
  return (v - col.center) / col.scale;
}

double PreprocessPlan::InverseTransform(std::size_t j, double transformed) const {
  const ColumnTransform& col = columns_.at(j);
  if (col.kind != FeatureKind::kNumerical) return transformed;
  return transformed * col.scale + col.center;
}

PreprocessPlan FitPlan(const Dataset& ds, std::span<const std::size_t> train,
                       const PreprocessConfig& config) {
  if (train.empty()) throw ArgumentError("cannot fit preprocessing on zero rows");
  std::vector<ColumnTransform> columns;
  for (std::size_t c : ds.input_columns()) {
    const FeatureSpec& spec = ds.specs()[c];
    ColumnTransform col;
    col.name = spec.name;
    col.kind = spec.kind;
    col.source_col = c;
    std::vector<double> observed;
    observed.reserve(train.size());
    for (std::size_t r : train) {
      if (!ds.is_missing(r, c)) observed.push_back(ds.value(r, c));
    }
    if (observed.empty()) {
      throw ArgumentError("column '" + spec.name +
                          "' is entirely missing in the training rows");
    }
    if (spec.kind == FeatureKind::kNumerical) {
      if (config.impute_numerical == NumericImpute::kMean) {
        double sum = 0.0;
        for (double v : observed) sum += v;
        col.fill = sum / static_cast<double>(observed.size());
      } else {
        std::vector<double> sorted = observed;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t m = sorted.size();
        col.fill = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
      }
      // Statistics are taken after imputation so the training rows come out
      // with exactly zero mean and unit spread.
      std::vector<double> imputed;
      imputed.reserve(train.size());
      for (std::size_t r : train) {
        imputed.push_back(ds.is_missing(r, c) ? col.fill : ds.value(r, c));
      }
      const double n = static_cast<double>(imputed.size());
      switch (config.normalize) {
        case Normalization::kZScore: {
          double mean = 0.0;
          for (double v : imputed) mean += v;
          mean /= n;
          double ss = 0.0;
          for (double v : imputed) ss += (v - mean) * (v - mean);
          const double sd = std::sqrt(ss / n);
          col.center = mean;
          col.scale = sd > 0.0 ? sd : 1.0;
          break;
        }
        case Normalization::kMinMax: {
          const auto [lo, hi] = std::minmax_element(imputed.begin(), imputed.end());
          col.center = *lo;
          col.scale = *hi > *lo ? *hi - *lo : 1.0;
          break;
        }
        case Normalization::kNone:
          break;
      }
    } else {
      std::map<double, std::size_t> counts;
      for (double v : observed) ++counts[v];
      std::size_t best = 0;
      for (const auto& [value, count] : counts) {
        col.seen_categories.push_back(value);
        if (count > best) {
          best = count;
          col.fill = value;
        }
      }
    }
    columns.push_back(std::move(col));
  }
  return PreprocessPlan(config, std::move(columns));
}

Matrix ApplyPlan(const PreprocessPlan& plan, const Dataset& ds,
                 std::span<const std::size_t> rows) {
  const auto& cols = plan.columns();
  for (const auto& col : cols) {
    if (col.source_col >= ds.n_cols() || ds.specs()[col.source_col].name != col.name) {
      throw SchemaError("dataset does not match the preprocessing plan (column '" +
                        col.name + "')");
    }
  }
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= ds.n_rows()) throw ArgumentError("row index out of range");
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const std::size_t c = cols[j].source_col;
      out(i, j) = plan.TransformValue(j, ds.value(r, c), ds.is_missing(r, c));
    }
  }
  return out;
}

}  // namespace hfxai
