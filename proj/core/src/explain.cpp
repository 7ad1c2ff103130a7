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

#include "hfxai/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "hfxai/errors.hpp"
#include "hfxai/parallel.hpp"
#include "hfxai/random.hpp"

namespace hfxai {
namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd Moments(std::span<const double> v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double d : v) out.mean += d;
  out.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double d : v) ss += (d - out.mean) * (d - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(v.size()));
  return out;
}

ImportanceRanking Sorted(const std::vector<std::string>& names,
                         const std::vector<double>& weights, const std::vector<double>& stds) {
  ImportanceRanking out;
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.entries.push_back({names[j], weights[j], stds[j]});
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const auto& a, const auto& b) { return a.weight > b.weight; });
  return out;
}

struct RawImportance {
  std::vector<double> weight;
  std::vector<double> std;
  bool degenerate = false;
};

RawImportance TreeImportance(const FittedEnsemble& model) {
  const std::size_t m = model.n_features();
  RawImportance out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), false};
  if (model.kind() == ClassifierKind::kMaxVoting) {
    out.degenerate = true;
    for (const auto& member : model.members()) {
      const RawImportance r = TreeImportance(member);
      for (std::size_t j = 0; j < m; ++j) {
        out.weight[j] += r.weight[j];
        out.std[j] += r.std[j];
      }
      out.degenerate = out.degenerate && r.degenerate;
    }
    const double k = static_cast<double>(model.members().size());
    for (std::size_t j = 0; j < m; ++j) {
      out.weight[j] /= k;
      out.std[j] /= k;
    }
    return out;
  }
  std::vector<std::vector<double>> per_tree;
  for (const auto& tree : model.trees()) {
    std::vector<double> imp(m, 0.0);
    double total = 0.0;
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) continue;
      imp[static_cast<std::size_t>(node.feature)] += node.gain;
      total += node.gain;
    }
    if (total <= 0.0) continue;
    for (double& v : imp) v /= total;
    per_tree.push_back(std::move(imp));
  }
  if (per_tree.empty()) {
    out.degenerate = true;
    return out;
  }
  std::vector<double> column(per_tree.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t t = 0; t < per_tree.size(); ++t) column[t] = per_tree[t][j];
    const MeanStd s = Moments(column);
    out.weight[j] = s.mean;
    out.std[j] = s.std;
  }
  return out;
}

std::size_t FeatureIndex(const Predictor& model, std::string_view feature) {
  const auto& names = model.feature_names();
  const auto it = std::find(names.begin(), names.end(), feature);
  if (it == names.end()) {
    throw ArgumentError("feature '" + std::string(feature) + "' is not a model input");
  }
  return static_cast<std::size_t>(it - names.begin());
}

void CheckArity(const Predictor& model, std::size_t n) {
  if (n != model.n_features()) {
    throw ArgumentError("data has " + std::to_string(n) + " columns, model expects " +
                        std::to_string(model.n_features()));
  }
}

// Mean and ICE std of predictions with the given columns overwritten.
MeanStd Overwritten(const Predictor& model, const Matrix& x,
                    std::initializer_list<std::pair<std::size_t, double>> cells) {
  Matrix copy = x;
  for (std::size_t r = 0; r < copy.rows(); ++r) {
    for (const auto& [c, v] : cells) copy(r, c) = v;
  }
  return Moments(model.PredictPositive(copy));
}

}  // namespace

std::size_t ImportanceRanking::RankOf(std::string_view feature) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].feature == feature) return i + 1;
  }
  throw ArgumentError("feature '" + std::string(feature) + "' not in ranking");
}

const FeatureImportance& ImportanceRanking::Find(std::string_view feature) const {
  return entries[RankOf(feature) - 1];
}

ImportanceRanking GiniImportance(const FittedEnsemble& model) {
  const RawImportance raw = TreeImportance(model);
  ImportanceRanking out = Sorted(model.feature_names(), raw.weight, raw.std);
  out.degenerate = raw.degenerate;
  return out;
}

PathContribution PathContribution::ForClass(int cls) const {
  if (cls == 1) return *this;
  if (cls != 0) throw ArgumentError("class must be 0 or 1");
  PathContribution out = *this;
  out.bias = 1.0 - bias;
  for (double& c : out.contributions) c = -c;
  out.probability = 1.0 - probability;
  return out;
}

PathContribution PathContributions(const FittedEnsemble& model, std::span<const double> x) {
  if (model.kind() == ClassifierKind::kMaxVoting) {
    throw UnsupportedModelError("path contributions need a tree ensemble, not max voting");
  }
  if (x.size() != model.n_features()) {
    throw ArgumentError("row has " + std::to_string(x.size()) + " values, model expects " +
                        std::to_string(model.n_features()));
  }
  PathContribution out;
  out.features = model.feature_names();
  out.contributions.assign(model.n_features(), 0.0);
  out.probability = model.PredictPositive(x);
  out.predicted_class = out.probability > 0.5 ? 1 : 0;

  const auto& trees = model.trees();
  if (!model.is_boosting()) {
    for (const auto& tree : trees) {
      const auto path = tree.DecisionPath(x);
      const auto& nodes = tree.nodes();
      out.bias += nodes[path.front()].value;
      for (std::size_t i = 1; i < path.size(); ++i) {
        const auto& parent = nodes[path[i - 1]];
        out.contributions[static_cast<std::size_t>(parent.feature)] +=
            nodes[path[i]].value - parent.value;
      }
    }
    const double k = static_cast<double>(trees.size());
    out.bias /= k;
    for (double& c : out.contributions) c /= k;
    return out;
  }

  // Margin-space decomposition.
  const bool ada = model.kind() == ClassifierKind::kAdaBoost;
  double bias_margin = model.base_score();
  std::vector<double> margin(model.n_features(), 0.0);
  double alpha_sum = 0.0;
  if (ada && !trees.empty()) {
    bias_margin = 0.0;
    for (double a : model.tree_weights()) alpha_sum += a;
  }
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const double scale = ada ? model.tree_weights()[t] / alpha_sum
                             : model.config().learning_rate;
    const auto node_value = [&](const TreeNode& n) {
      return ada ? (n.value > 0.5 ? 1.0 : -1.0) : n.value;
    };
    const auto path = trees[t].DecisionPath(x);
    const auto& nodes = trees[t].nodes();
    bias_margin += scale * node_value(nodes[path.front()]);
    for (std::size_t i = 1; i < path.size(); ++i) {
      const auto& parent = nodes[path[i - 1]];
      margin[static_cast<std::size_t>(parent.feature)] +=
          scale * (node_value(nodes[path[i]]) - node_value(parent));
    }
  }
  out.bias = Sigmoid(bias_margin);
  const double delta = out.probability - out.bias;
  double margin_sum = 0.0;
  for (double m : margin) margin_sum += m;
  if (std::abs(margin_sum) > 1e-12) {
    for (std::size_t j = 0; j < margin.size(); ++j) {
      out.contributions[j] = delta * margin[j] / margin_sum;
    }
  }
  return out;
}

ImportanceRanking PermutationImportance(const Predictor& model, const Matrix& x,
                                        std::span<const int> y, Metric metric,
                                        std::size_t repeats, std::uint64_t seed) {
  if (repeats < 1) throw ArgumentError("repeats must be at least 1");
  CheckArity(model, x.cols());
  if (x.rows() != y.size()) throw ArgumentError("one label per row required");
  if (x.rows() == 0) throw ArgumentError("no rows to score");
  const auto score = [&](const Matrix& m) {
    const auto p = model.PredictPositive(m);
    std::vector<int> cls(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) cls[i] = p[i] > 0.5 ? 1 : 0;
    return MetricValue(ClassificationMetrics(Confusion(y, cls)), metric);
  };
  const double baseline = score(x);
  const std::size_t m = x.cols();
  std::vector<double> weights(m);
  std::vector<double> stds(m);
  std::vector<double> drops(repeats);
  Matrix work = x;
  std::vector<std::size_t> perm(x.rows());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t r = 0; r < repeats; ++r) {
      std::iota(perm.begin(), perm.end(), 0);
      Rng rng(DeriveSeed(seed, {j, r}));
      rng.Shuffle(std::span<std::size_t>(perm));
      for (std::size_t i = 0; i < x.rows(); ++i) work(i, j) = x(perm[i], j);
      drops[r] = baseline - score(work);
    }
    for (std::size_t i = 0; i < x.rows(); ++i) work(i, j) = x(i, j);
    const MeanStd s = Moments(drops);
    weights[j] = s.mean;
    stds[j] = s.std;
  }
  return Sorted(model.feature_names(), weights, stds);
}

ImportanceRanking PermutationImportance(const Predictor& model, const Matrix& x,
                                        std::span<const int> y, std::string_view metric,
                                        std::size_t repeats, std::uint64_t seed) {
  return PermutationImportance(model, x, y, ParseMetric(metric), repeats, seed);
}

std::vector<double> QuantileGrid(std::span<const double> values, std::size_t grid_points) {
  if (grid_points < 2) throw ArgumentError("grid_points must be at least 2");
  if (values.empty()) throw ArgumentError("cannot build a grid from zero values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= grid_points) return distinct;
  std::vector<double> grid;
  const double last = static_cast<double>(sorted.size() - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double pos = last * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double v = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

PdpCurve Pdp(const Predictor& model, const Matrix& x, std::string_view feature,
             std::size_t grid_points) {
  CheckArity(model, x.cols());
  const std::size_t c = FeatureIndex(model, feature);
  PdpCurve out;
  out.features = {std::string(feature)};
  out.grid = QuantileGrid(x.column(c), grid_points);
  for (double v : out.grid) {
    const MeanStd s = Overwritten(model, x, {{c, v}});
    out.mean_prediction.push_back(s.mean);
    out.band.push_back(s.std);
  }
  return out;
}

PdpCurve Pdp2d(const Predictor& model, const Matrix& x, std::string_view feature_a,
               std::string_view feature_b, std::size_t grid_points) {
  if (feature_a == feature_b) throw ArgumentError("2D partial dependence needs two features");
  CheckArity(model, x.cols());
  const std::size_t a = FeatureIndex(model, feature_a);
  const std::size_t b = FeatureIndex(model, feature_b);
  PdpCurve out;
  out.features = {std::string(feature_a), std::string(feature_b)};
  out.grid = QuantileGrid(x.column(a), grid_points);
  out.grid_b = QuantileGrid(x.column(b), grid_points);
  for (double va : out.grid) {
    for (double vb : out.grid_b) {
      const MeanStd s = Overwritten(model, x, {{a, va}, {b, vb}});
      out.mean_prediction.push_back(s.mean);
      out.band.push_back(s.std);
    }
  }
  return out;
}

ShapValues ShapleyExact(const Predictor& model, const Matrix& background,
                        std::span<const double> x, std::size_t threads) {
  const std::size_t m = model.n_features();
  if (m > kMaxShapleyFeatures) {
    throw ArgumentError("exact Shapley enumeration supports at most " +
                        std::to_string(kMaxShapleyFeatures) + " features (model has " +
                        std::to_string(m) +
                        "); select fewer features or explain a smaller model");
  }
  CheckArity(model, x.size());
  CheckArity(model, background.cols());
  if (background.rows() == 0) throw ArgumentError("background set is empty");

  const std::size_t n_masks = std::size_t{1} << m;
  std::vector<double> v(n_masks);
  ParallelFor(n_masks, threads, [&](std::size_t mask) {
    Matrix hybrid = background;
    for (std::size_t r = 0; r < hybrid.rows(); ++r) {
      for (std::size_t j = 0; j < m; ++j) {
        if (mask >> j & 1) hybrid(r, j) = x[j];
      }
    }
    v[mask] = Moments(model.PredictPositive(hybrid)).mean;
  });

  // weight[s] = s! (m - s - 1)! / m! = 1 / (m * C(m - 1, s)).
  std::vector<double> weight(m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    double binom = 1.0;
    for (std::size_t i = 1; i <= s; ++i) {
      binom = binom * static_cast<double>(m - 1 - s + i) / static_cast<double>(i);
    }
    weight[s] = 1.0 / (static_cast<double>(m) * binom);
  }

  ShapValues out;
  out.features = model.feature_names();
  out.values.assign(m, 0.0);
  out.base_value = v[0];
  out.output = model.PredictPositive(x);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      phi += weight[size] * (v[mask | bit] - v[mask]);
    }
    out.values[i] = phi;
  }
  return out;
}

ShapSummary SummarizeShap(const Predictor& model, const Matrix& background, const Matrix& x,
                          std::size_t threads) {
  if (x.rows() == 0) throw ArgumentError("no rows to explain");
  ShapSummary out;
  out.features = model.feature_names();
  const std::size_t m = model.n_features();
  out.mean_abs_class1.assign(m, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out.rows.push_back(ShapleyExact(model, background, x.row(r), threads));
    for (std::size_t j = 0; j < m; ++j) {
      out.mean_abs_class1[j] += std::abs(out.rows.back().values[j]);
    }
  }
  for (double& v : out.mean_abs_class1) v /= static_cast<double>(x.rows());
  out.mean_abs_class0 = out.mean_abs_class1;
  return out;
}

ImportanceRanking ShapRanking(const ShapSummary& summary) {
  const std::size_t m = summary.features.size();
  std::vector<double> weights(m);
  std::vector<double> stds(m);
  std::vector<double> column(summary.rows.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
      column[r] = std::abs(summary.rows[r].values[j]);
    }
    const MeanStd s = Moments(column);
    weights[j] = s.mean;
    stds[j] = s.std;
  }
  return Sorted(summary.features, weights, stds);
}

Matrix SampleRows(const Matrix& x, std::size_t max_rows, std::uint64_t seed) {
  if (x.rows() <= max_rows) return x;
  std::vector<std::size_t> idx(x.rows());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(idx));
  idx.resize(max_rows);
  std::sort(idx.begin(), idx.end());
  return x.SelectRows(idx);
}

}  // namespace hfxai
