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

#ifndef HFXAI_TREE_HPP_
#define HFXAI_TREE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hfxai/matrix.hpp"

namespace hfxai {

// Gini impurity 1 - sum_c p_c^2. Throws ArgumentError on all-zero counts.
double Gini(std::span<const double> counts);

struct TreeParams {
  int max_depth = -1;  // negative: unlimited
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // candidate features per node; 0: all
  bool random_threshold = false;  // one uniform cut per candidate feature
  std::uint64_t seed = 0;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

// Flat node record. Internal nodes route x[feature] <= threshold to `left`.
// `value` is P(class 1) for classification trees and the Newton-step output
// for boosting trees; it is populated on internal nodes too, which is what
// path contributions walk along.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;  // sum of training weights reaching the node
  std::size_t samples = 0;
  std::array<double, 2> class_counts{0.0, 0.0};  // weighted; classification
  double value = 0.0;
  double gain = 0.0;  // weighted impurity decrease of the split

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

enum class TreeTask { kClassification, kBoosting };

// Immutable fitted tree; node 0 is the root.
class FittedTree {
 public:
  FittedTree() = default;
  FittedTree(TreeTask task, std::size_t n_features, TreeParams params,
             std::vector<TreeNode> nodes);

  TreeTask task() const { return task_; }
  std::size_t n_features() const { return n_features_; }
  const TreeParams& params() const { return params_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

  std::size_t depth() const;
  std::size_t n_leaves() const;

  // Index of the leaf reached by x.
  std::size_t Leaf(std::span<const double> x) const;
  // Root-to-leaf node indices.
  std::vector<std::size_t> DecisionPath(std::span<const double> x) const;
  // Leaf `value`.
  double PredictValue(std::span<const double> x) const {
    return nodes_[Leaf(x)].value;
  }
  // (P(class 0), P(class 1)) from the weighted leaf frequencies.
  std::array<double, 2> PredictProba(std::span<const double> x) const;

  friend bool operator==(const FittedTree&, const FittedTree&) = default;

 private:
  TreeTask task_ = TreeTask::kClassification;
  std::size_t n_features_ = 0;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

// Binary CART classifier maximizing the weighted Gini decrease. Exhaustive
// mode scans midpoints between consecutive distinct values; random mode draws
// one uniform cut in (min, max) per candidate feature. Ties in gain go to the
// lower feature index, then the lower threshold. Zero-weight rows are ignored.
FittedTree FitTree(const Matrix& x, std::span<const int> y,
                   std::span<const double> weights, const TreeParams& params);

enum class BoostingCriterion {
  kSquaredError,  // variance reduction of the residuals
  kNewton,        // regularized second-order gain
};

struct BoostingTreeParams {
  TreeParams tree;
  BoostingCriterion criterion = BoostingCriterion::kSquaredError;
  double lambda = 0.0;  // L2 penalty on leaf values
  double gamma = 0.0;   // minimum gain (Newton criterion)
};

// Regression tree on residuals r = y - p with hessians h = p(1 - p).
// Every node's value is sum(r) / (sum(h) + lambda).
FittedTree FitBoostingTree(const Matrix& x, std::span<const double> residuals,
                           std::span<const double> hessians,
                           const BoostingTreeParams& params);

}  // namespace hfxai

#endif  // HFXAI_TREE_HPP_
