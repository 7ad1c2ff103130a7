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

#include "hfxai/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"
#include "hfxai/random.hpp"

namespace hfxai {
namespace {

struct KindName {
  ClassifierKind kind;
  std::string_view id;
  std::string_view display;
};

constexpr KindName kKindNames[] = {
    {ClassifierKind::kDecisionTree, "decision_tree", "Decision Tree"},
    {ClassifierKind::kRandomForest, "random_forest", "Random Forests"},
    {ClassifierKind::kExtraTrees, "extra_trees", "Extra Trees"},
    {ClassifierKind::kAdaBoost, "adaboost", "AdaBoost"},
    {ClassifierKind::kGradientBoosting, "gradient_boosting", "Gradient Boosting"},
    {ClassifierKind::kXgbStyle, "xgb_style", "XGBoost-style"},
    {ClassifierKind::kMaxVoting, "max_voting", "Max Voting"},
};

double Logit(double p) {
  p = std::clamp(p, 1e-15, 1.0 - 1e-15);
  return std::log(p / (1.0 - p));
}

std::vector<std::string> ResolveNames(std::vector<std::string> names, std::size_t m) {
  if (names.empty()) {
    for (std::size_t j = 0; j < m; ++j) names.push_back("x" + std::to_string(j));
  }
  if (names.size() != m) throw ArgumentError("one feature name per column required");
  return names;
}

TreeParams BaseTreeParams(const EnsembleConfig& config, std::size_t m) {
  TreeParams p;
  p.max_depth = EffectiveMaxDepth(config);
  p.min_samples_leaf = config.min_samples_leaf;
  p.max_features = EffectiveMaxFeatures(config, m);
  return p;
}

FittedEnsemble FitForest(const EnsembleConfig& config, const Matrix& x,
                         std::span<const int> y, std::vector<std::string> names) {
  const std::size_t n = x.rows();
  const bool extra = config.kind == ClassifierKind::kExtraTrees;
  std::vector<FittedTree> trees;
  trees.reserve(config.n_estimators);
  for (std::size_t t = 0; t < config.n_estimators; ++t) {
    TreeParams params = BaseTreeParams(config, x.cols());
    params.random_threshold = extra;
    params.seed = DeriveSeed(config.seed, {0x7EE, t});
    std::vector<double> w(n, 1.0);
    if (!extra && config.bootstrap) {
      std::fill(w.begin(), w.end(), 0.0);
      Rng rng(DeriveSeed(config.seed, {0xB007, t}));
      for (std::size_t i = 0; i < n; ++i) w[rng.Index(n)] += 1.0;
    }
    trees.push_back(FitTree(x, y, w, params));
  }
  return FittedEnsemble(config, x.cols(), std::move(names), std::move(trees), {}, 0.0,
                        {});
}

FittedEnsemble FitAdaBoost(const EnsembleConfig& config, const Matrix& x,
                           std::span<const int> y, std::vector<std::string> names,
                           double prior) {
  const std::size_t n = x.rows();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<FittedTree> trees;
  std::vector<double> alphas;
  for (std::size_t t = 0; t < config.n_estimators; ++t) {
    TreeParams params = BaseTreeParams(config, x.cols());
    params.seed = DeriveSeed(config.seed, {0xADA, t});
    FittedTree tree = FitTree(x, y, w, params);
    std::vector<bool> wrong(n);
    double eps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int h = tree.PredictValue(x.row(i)) > 0.5 ? 1 : 0;
      wrong[i] = h != y[i];
      if (wrong[i]) eps += w[i];
    }
    if (eps <= 0.0) {
      trees.push_back(std::move(tree));
      alphas.push_back(1.0);
      break;
    }
    if (eps >= 0.5) {
      if (trees.empty()) {
        Warn("adaboost: first learner is no better than chance; keeping it alone");
        trees.push_back(std::move(tree));
        alphas.push_back(1.0);
      }
      break;
    }
    const double alpha = std::log((1.0 - eps) / eps);
    const double boost = std::exp(alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i]) w[i] *= boost;
      total += w[i];
    }
    for (double& wi : w) wi /= total;
    trees.push_back(std::move(tree));
    alphas.push_back(alpha);
  }
  return FittedEnsemble(config, x.cols(), std::move(names), std::move(trees),
                        std::move(alphas), Logit(prior), {});
}

FittedEnsemble FitGradientBoosting(const EnsembleConfig& config, const Matrix& x,
                                   std::span<const int> y, std::vector<std::string> names,
                                   double prior) {
  const std::size_t n = x.rows();
  const bool newton = config.kind == ClassifierKind::kXgbStyle;
  const double base = Logit(prior);
  std::vector<double> margin(n, base);
  std::vector<double> residual(n);
  std::vector<double> hessian(n);
  std::vector<FittedTree> trees;
  trees.reserve(config.n_estimators);
  for (std::size_t t = 0; t < config.n_estimators; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      residual[i] = static_cast<double>(y[i]) - p;
      hessian[i] = p * (1.0 - p);
    }
    BoostingTreeParams params;
    params.tree = BaseTreeParams(config, x.cols());
    params.tree.seed = DeriveSeed(config.seed, {0x6B, t});
    params.criterion =
        newton ? BoostingCriterion::kNewton : BoostingCriterion::kSquaredError;
    params.lambda = newton ? config.lambda : 0.0;
    params.gamma = newton ? config.gamma : 0.0;
    FittedTree tree = FitBoostingTree(x, residual, hessian, params);
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += config.learning_rate * tree.PredictValue(x.row(i));
    }
    trees.push_back(std::move(tree));
  }
  return FittedEnsemble(config, x.cols(), std::move(names), std::move(trees), {}, base,
                        {});
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string_view ToString(ClassifierKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.id;
  }
  return "unknown";
}

std::string_view DisplayName(ClassifierKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.display;
  }
  return "unknown";
}

ClassifierKind ParseClassifierKind(std::string_view text) {
  for (const auto& k : kKindNames) {
    if (k.id == text) return k.kind;
  }
  throw ArgumentError("unknown classifier '" + std::string(text) + "'");
}

EnsembleConfig DefaultConfig(ClassifierKind kind) {
  EnsembleConfig c;
  c.kind = kind;
  if (kind == ClassifierKind::kDecisionTree) c.n_estimators = 1;
  return c;
}

int EffectiveMaxDepth(const EnsembleConfig& config) {
  if (config.max_depth) return *config.max_depth < 0 ? -1 : *config.max_depth;
  switch (config.kind) {
    case ClassifierKind::kAdaBoost:
      return 1;
    case ClassifierKind::kGradientBoosting:
    case ClassifierKind::kXgbStyle:
      return 3;
    default:
      return -1;
  }
}

std::size_t EffectiveMaxFeatures(const EnsembleConfig& config, std::size_t n_features) {
  if (config.max_features > 0) return std::min(config.max_features, n_features);
  if (config.kind == ClassifierKind::kRandomForest ||
      config.kind == ClassifierKind::kExtraTrees) {
    const auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
    return std::max<std::size_t>(1, k);
  }
  return n_features;
}

std::vector<EnsembleConfig> EffectiveMembers(const EnsembleConfig& config) {
  if (!config.members.empty()) return config.members;
  std::vector<EnsembleConfig> members;
  std::uint64_t i = 0;
  for (auto kind : {ClassifierKind::kRandomForest, ClassifierKind::kExtraTrees,
                    ClassifierKind::kGradientBoosting}) {
    EnsembleConfig m = DefaultConfig(kind);
    m.n_estimators = config.n_estimators;
    m.seed = DeriveSeed(config.seed, {0x707E, i++});
    members.push_back(m);
  }
  return members;
}

FittedEnsemble::FittedEnsemble(EnsembleConfig config, std::size_t n_features,
                               std::vector<std::string> feature_names,
                               std::vector<FittedTree> trees,
                               std::vector<double> tree_weights, double base_score,
                               std::vector<FittedEnsemble> members)
    : config_(std::move(config)),
      n_features_(n_features),
      feature_names_(std::move(feature_names)),
      trees_(std::move(trees)),
      tree_weights_(std::move(tree_weights)),
      base_score_(base_score),
      members_(std::move(members)) {
  if (feature_names_.size() != n_features_) {
    throw ArgumentError("ensemble: one feature name per input required");
  }
  if (config_.kind == ClassifierKind::kMaxVoting) {
    if (members_.empty()) throw ArgumentError("max_voting needs at least one member");
    for (const auto& m : members_) {
      if (m.n_features() != n_features_) {
        throw ArgumentError("max_voting member arity mismatch");
      }
    }
  } else if (trees_.empty() && !is_boosting()) {
    throw ArgumentError("ensemble has no trees");
  }
  if (config_.kind == ClassifierKind::kAdaBoost && tree_weights_.size() != trees_.size()) {
    throw ArgumentError("adaboost needs one weight per tree");
  }
  for (const auto& t : trees_) {
    if (t.n_features() != n_features_) throw ArgumentError("tree arity mismatch");
  }
}

bool FittedEnsemble::is_boosting() const {
  return config_.kind == ClassifierKind::kAdaBoost ||
         config_.kind == ClassifierKind::kGradientBoosting ||
         config_.kind == ClassifierKind::kXgbStyle;
}

void FittedEnsemble::CheckArity(std::size_t n) const {
  if (n != n_features_) {
    throw ArgumentError("row has " + std::to_string(n) + " values, model expects " +
                        std::to_string(n_features_));
  }
}

double FittedEnsemble::Margin(std::span<const double> x) const {
  CheckArity(x.size());
  switch (config_.kind) {
    case ClassifierKind::kAdaBoost: {
      if (trees_.empty()) return base_score_;
      double num = 0.0;
      double den = 0.0;
      for (std::size_t t = 0; t < trees_.size(); ++t) {
        const double vote = trees_[t].PredictValue(x) > 0.5 ? 1.0 : -1.0;
        num += tree_weights_[t] * vote;
        den += tree_weights_[t];
      }
      return num / den;
    }
    case ClassifierKind::kGradientBoosting:
    case ClassifierKind::kXgbStyle: {
      double f = base_score_;
      for (const auto& t : trees_) f += config_.learning_rate * t.PredictValue(x);
      return f;
    }
    default:
      throw UnsupportedModelError("margin is only defined for boosting models");
  }
}

double FittedEnsemble::PredictPositive(std::span<const double> x) const {
  CheckArity(x.size());
  switch (config_.kind) {
    case ClassifierKind::kDecisionTree:
    case ClassifierKind::kRandomForest:
    case ClassifierKind::kExtraTrees: {
      double sum = 0.0;
      for (const auto& t : trees_) sum += t.PredictValue(x);
      return sum / static_cast<double>(trees_.size());
    }
    case ClassifierKind::kAdaBoost:
    case ClassifierKind::kGradientBoosting:
    case ClassifierKind::kXgbStyle:
      return Sigmoid(Margin(x));
    case ClassifierKind::kMaxVoting: {
      std::size_t votes = 0;
      for (const auto& m : members_) votes += static_cast<std::size_t>(m.PredictClass(x));
      return static_cast<double>(votes) / static_cast<double>(members_.size());
    }
  }
  return 0.0;
}

std::vector<double> FittedEnsemble::PredictPositive(const Matrix& x) const {
  CheckArity(x.cols());
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = PredictPositive(x.row(r));
  return out;
}

Matrix FittedEnsemble::PredictProba(const Matrix& x) const {
  const auto p = PredictPositive(x);
  Matrix out(x.rows(), 2);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out(r, 0) = 1.0 - p[r];
    out(r, 1) = p[r];
  }
  return out;
}

int FittedEnsemble::PredictClass(std::span<const double> x) const {
  return PredictPositive(x) > 0.5 ? 1 : 0;
}

std::vector<int> FittedEnsemble::PredictClasses(const Matrix& x) const {
  const auto p = PredictPositive(x);
  std::vector<int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] > 0.5 ? 1 : 0;
  return out;
}

FittedEnsemble Fit(const EnsembleConfig& config, const Matrix& x, std::span<const int> y,
                   std::vector<std::string> feature_names) {
  if (x.rows() == 0) throw ArgumentError("cannot fit on zero rows");
  if (y.size() != x.rows()) throw ArgumentError("X and y differ in row count");
  if (config.n_estimators < 1) throw ArgumentError("n_estimators must be >= 1");
  if (!(config.learning_rate > 0.0)) throw ArgumentError("learning_rate must be > 0");
  for (int label : y) {
    if (label != 0 && label != 1) throw ArgumentError("labels must be 0 or 1");
  }
  auto names = ResolveNames(std::move(feature_names), x.cols());
  const double positives = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const double prior = positives / static_cast<double>(y.size());

  switch (config.kind) {
    case ClassifierKind::kDecisionTree: {
      TreeParams params = BaseTreeParams(config, x.cols());
      params.seed = DeriveSeed(config.seed, {0xD7});
      std::vector<double> w(x.rows(), 1.0);
      std::vector<FittedTree> trees{FitTree(x, y, w, params)};
      return FittedEnsemble(config, x.cols(), std::move(names), std::move(trees), {}, 0.0,
                            {});
    }
    case ClassifierKind::kRandomForest:
    case ClassifierKind::kExtraTrees:
      return FitForest(config, x, y, std::move(names));
    case ClassifierKind::kAdaBoost:
    case ClassifierKind::kGradientBoosting:
    case ClassifierKind::kXgbStyle:
      if (prior == 0.0 || prior == 1.0) {
        Warn("boosting on single-class labels: returning the constant prior model");
        return FittedEnsemble(config, x.cols(), std::move(names), {}, {},
                              prior == 1.0 ? 40.0 : -40.0, {});
      }
      if (config.kind == ClassifierKind::kAdaBoost) {
        return FitAdaBoost(config, x, y, std::move(names), prior);
      }
      return FitGradientBoosting(config, x, y, std::move(names), prior);
    case ClassifierKind::kMaxVoting: {
      std::vector<FittedEnsemble> members;
      for (const auto& m : EffectiveMembers(config)) {
        if (m.kind == ClassifierKind::kMaxVoting) {
          throw ArgumentError("max_voting members cannot be max_voting");
        }
        members.push_back(Fit(m, x, y, names));
      }
      return FittedEnsemble(config, x.cols(), std::move(names), {}, {}, 0.0,
                            std::move(members));
    }
  }
  throw ArgumentError("unhandled classifier kind");
}

}  // namespace hfxai
