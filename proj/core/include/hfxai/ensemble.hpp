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

#ifndef HFXAI_ENSEMBLE_HPP_
#define HFXAI_ENSEMBLE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfxai/matrix.hpp"
#include "hfxai/tree.hpp"

namespace hfxai {

enum class ClassifierKind {
  kDecisionTree,
  kRandomForest,
  kExtraTrees,
  kAdaBoost,
  kGradientBoosting,
  kXgbStyle,
  kMaxVoting,
};

std::string_view ToString(ClassifierKind kind);
ClassifierKind ParseClassifierKind(std::string_view text);
// Human-readable name used in report tables ("Random Forests", ...).
std::string_view DisplayName(ClassifierKind kind);

struct EnsembleConfig {
  ClassifierKind kind = ClassifierKind::kRandomForest;
  std::size_t n_estimators = 100;
  double learning_rate = 0.1;  // gradient_boosting, xgb_style
  // Candidate features per node. 0: floor(sqrt(m)) for forests, all otherwise.
  std::size_t max_features = 0;
  // Unset: unlimited for trees and forests, 1 for adaboost, 3 for the
  // gradient boosters. Negative: unlimited.
  std::optional<int> max_depth;
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;  // random_forest only
  double lambda = 1.0;    // xgb_style
  double gamma = 0.0;     // xgb_style
  // max_voting members; empty means random_forest + extra_trees +
  // gradient_boosting with this config's n_estimators.
  std::vector<EnsembleConfig> members;
  std::uint64_t seed = 0;

  friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

EnsembleConfig DefaultConfig(ClassifierKind kind);
int EffectiveMaxDepth(const EnsembleConfig& config);
std::size_t EffectiveMaxFeatures(const EnsembleConfig& config, std::size_t n_features);
std::vector<EnsembleConfig> EffectiveMembers(const EnsembleConfig& config);

// Immutable trained classifier. The positive class is 1.
class FittedEnsemble {
 public:
  FittedEnsemble() = default;
  FittedEnsemble(EnsembleConfig config, std::size_t n_features,
                 std::vector<std::string> feature_names, std::vector<FittedTree> trees,
                 std::vector<double> tree_weights, double base_score,
                 std::vector<FittedEnsemble> members);

  ClassifierKind kind() const { return config_.kind; }
  const EnsembleConfig& config() const { return config_; }
  std::size_t n_features() const { return n_features_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<FittedTree>& trees() const { return trees_; }
  // AdaBoost: per-tree alpha. Empty for the other kinds.
  const std::vector<double>& tree_weights() const { return tree_weights_; }
  // Boosting: initial log-odds.
  double base_score() const { return base_score_; }
  const std::vector<FittedEnsemble>& members() const { return members_; }

  bool is_boosting() const;

  // P(class 1) for one row.
  double PredictPositive(std::span<const double> x) const;
  std::vector<double> PredictPositive(const Matrix& x) const;
  // n x 2 matrix of (P(class 0), P(class 1)); rows sum to 1.
  Matrix PredictProba(const Matrix& x) const;
  // 1 iff P(class 1) > 0.5.
  int PredictClass(std::span<const double> x) const;
  std::vector<int> PredictClasses(const Matrix& x) const;

  // AdaBoost: sum(alpha * vote) / sum(alpha); boosters: log-odds.
  double Margin(std::span<const double> x) const;

  friend bool operator==(const FittedEnsemble&, const FittedEnsemble&) = default;

 private:
  void CheckArity(std::size_t n) const;

  EnsembleConfig config_;
  std::size_t n_features_ = 0;
  std::vector<std::string> feature_names_;
  std::vector<FittedTree> trees_;
  std::vector<double> tree_weights_;
  double base_score_ = 0.0;
  std::vector<FittedEnsemble> members_;
};

// Trains one classifier. Boosting on single-class labels yields a constant
// prior model and a warning.
FittedEnsemble Fit(const EnsembleConfig& config, const Matrix& x, std::span<const int> y,
                   std::vector<std::string> feature_names = {});

// Logistic function, evaluated without overflow.
double Sigmoid(double z);

}  // namespace hfxai

#endif  // HFXAI_ENSEMBLE_HPP_
