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

#ifndef HFXAI_EXPLAIN_HPP_
#define HFXAI_EXPLAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfxai/ensemble.hpp"
#include "hfxai/matrix.hpp"
#include "hfxai/metrics.hpp"
#include "hfxai/predictor.hpp"

namespace hfxai {

struct FeatureImportance {
  std::string feature;
  double weight = 0.0;
  double std = 0.0;
};

// Entries ordered by descending weight; ties keep model input order.
struct ImportanceRanking {
  std::vector<FeatureImportance> entries;
  // No tree in the model had a split; every weight is 0.
  bool degenerate = false;

  // 1-based rank of a feature; throws ArgumentError for unknown names.
  std::size_t RankOf(std::string_view feature) const;
  const FeatureImportance& Find(std::string_view feature) const;
};

// Mean decrease in impurity. Each tree's split gains are normalized to sum
// to 1; weight is the mean over trees with at least one split and std the
// spread across those trees. Max voting averages its members' rankings.
ImportanceRanking GiniImportance(const FittedEnsemble& model);

struct PathContribution {
  std::vector<std::string> features;
  double bias = 0.0;                  // P(class 1) at the roots
  std::vector<double> contributions;  // aligned with `features`
  double probability = 0.0;           // P(class 1) of the model
  int predicted_class = 0;

  // Same decomposition for class 0 (bias and contributions mirrored).
  PathContribution ForClass(int cls) const;
};

// Decision-path attribution: every edge credits the change in node value to
// its split feature, bias = root value, averaged over trees. Boosters work in
// margin space and split the resulting probability change in proportion to
// the margin contributions. Throws UnsupportedModelError for max voting.
PathContribution PathContributions(const FittedEnsemble& model, std::span<const double> x);

// Score drop after shuffling one column, `repeats` seed-derived shuffles per
// feature. Population std over repeats.
ImportanceRanking PermutationImportance(const Predictor& model, const Matrix& x,
                                        std::span<const int> y, Metric metric,
                                        std::size_t repeats, std::uint64_t seed);
ImportanceRanking PermutationImportance(const Predictor& model, const Matrix& x,
                                        std::span<const int> y, std::string_view metric,
                                        std::size_t repeats, std::uint64_t seed);

// Grid of at most `grid_points` strictly increasing values: the distinct
// values when there are few enough, otherwise evenly spaced linear-
// interpolated quantiles with duplicates removed.
std::vector<double> QuantileGrid(std::span<const double> values, std::size_t grid_points);

struct PdpCurve {
  std::vector<std::string> features;  // 1 or 2 names
  std::vector<double> grid;           // first feature
  std::vector<double> grid_b;         // second feature (2D only)
  // Mean P(class 1) and ICE std per grid point; 2D is row-major over
  // (grid, grid_b).
  std::vector<double> mean_prediction;
  std::vector<double> band;
};

PdpCurve Pdp(const Predictor& model, const Matrix& x, std::string_view feature,
             std::size_t grid_points);
PdpCurve Pdp2d(const Predictor& model, const Matrix& x, std::string_view feature_a,
               std::string_view feature_b, std::size_t grid_points);

inline constexpr std::size_t kMaxShapleyFeatures = 20;

struct ShapValues {
  std::vector<std::string> features;
  double base_value = 0.0;     // mean P(class 1) over the background
  std::vector<double> values;  // aligned with `features`
  double output = 0.0;         // P(class 1) at x
};

// Exact interventional Shapley values by enumerating all 2^m coalitions.
ShapValues ShapleyExact(const Predictor& model, const Matrix& background,
                        std::span<const double> x, std::size_t threads = 1);

struct ShapSummary {
  std::vector<std::string> features;
  std::vector<double> mean_abs_class1;
  std::vector<double> mean_abs_class0;
  std::vector<ShapValues> rows;
};

ShapSummary SummarizeShap(const Predictor& model, const Matrix& background, const Matrix& x,
                          std::size_t threads = 1);

// Mean |phi| ordering as an importance ranking (std across rows).
ImportanceRanking ShapRanking(const ShapSummary& summary);

// Up to `max_rows` rows chosen by a seeded shuffle, kept in original order.
Matrix SampleRows(const Matrix& x, std::size_t max_rows, std::uint64_t seed);

}  // namespace hfxai

#endif  // HFXAI_EXPLAIN_HPP_
