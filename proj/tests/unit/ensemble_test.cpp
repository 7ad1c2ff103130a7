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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"
#include "synthetic.hpp"

namespace hfxai {
namespace {

using testing::RandomProblem;

double LogLoss(const std::vector<double>& margin, const std::vector<int>& y) {
  double loss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = Sigmoid(margin[i]);
    loss -= y[i] ? std::log(p) : std::log(1 - p);
  }
  return loss / static_cast<double>(y.size());
}

EnsembleConfig Config(ClassifierKind kind, std::size_t trees, std::uint64_t seed = 1) {
  auto c = DefaultConfig(kind);
  c.n_estimators = trees;
  c.seed = seed;
  return c;
}

TEST(Ensemble, KindNamesRoundTrip) {
  for (auto kind : {ClassifierKind::kDecisionTree, ClassifierKind::kRandomForest,
                    ClassifierKind::kExtraTrees, ClassifierKind::kAdaBoost,
                    ClassifierKind::kGradientBoosting, ClassifierKind::kXgbStyle,
                    ClassifierKind::kMaxVoting}) {
    EXPECT_EQ(ParseClassifierKind(ToString(kind)), kind);
    EXPECT_NE(DisplayName(kind), "unknown");
  }
  EXPECT_THROW(ParseClassifierKind("svm"), ArgumentError);
}

TEST(Ensemble, Defaults) {
  EXPECT_EQ(EffectiveMaxDepth(Config(ClassifierKind::kAdaBoost, 1)), 1);
  EXPECT_EQ(EffectiveMaxDepth(Config(ClassifierKind::kGradientBoosting, 1)), 3);
  EXPECT_EQ(EffectiveMaxDepth(Config(ClassifierKind::kRandomForest, 1)), -1);
  EXPECT_EQ(EffectiveMaxFeatures(Config(ClassifierKind::kRandomForest, 1), 12), 3u);
  EXPECT_EQ(EffectiveMaxFeatures(Config(ClassifierKind::kExtraTrees, 1), 2), 1u);
  EXPECT_EQ(EffectiveMaxFeatures(Config(ClassifierKind::kGradientBoosting, 1), 12), 12u);
  EXPECT_EQ(EffectiveMembers(Config(ClassifierKind::kMaxVoting, 7)).size(), 3u);
}

TEST(Ensemble, ForestAveragesItsTrees) {
  const auto p = RandomProblem(1, 80, 4, 0.15);
  for (auto kind : {ClassifierKind::kRandomForest, ClassifierKind::kExtraTrees}) {
    const auto model = Fit(Config(kind, 15), p.x, p.y);
    ASSERT_EQ(model.trees().size(), 15u);
    for (std::size_t i = 0; i < p.x.rows(); ++i) {
      double sum = 0;
      for (const auto& t : model.trees()) sum += t.PredictValue(p.x.row(i));
      EXPECT_NEAR(model.PredictPositive(p.x.row(i)), sum / 15, 1e-15);
    }
    const auto proba = model.PredictProba(p.x);
    for (std::size_t i = 0; i < proba.rows(); ++i) {
      EXPECT_NEAR(proba(i, 0) + proba(i, 1), 1.0, 1e-15);
    }
  }
}

TEST(Ensemble, SameSeedSameModel) {
  const auto p = RandomProblem(2, 60, 4, 0.15);
  for (auto kind : {ClassifierKind::kRandomForest, ClassifierKind::kExtraTrees,
                    ClassifierKind::kAdaBoost, ClassifierKind::kGradientBoosting,
                    ClassifierKind::kXgbStyle, ClassifierKind::kMaxVoting}) {
    const auto a = Fit(Config(kind, 10, 5), p.x, p.y);
    EXPECT_EQ(a, Fit(Config(kind, 10, 5), p.x, p.y)) << ToString(kind);
  }
  EXPECT_NE(Fit(Config(ClassifierKind::kRandomForest, 10, 5), p.x, p.y),
            Fit(Config(ClassifierKind::kRandomForest, 10, 6), p.x, p.y));
}

TEST(Ensemble, GradientBoostingLossNeverRises) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto p = RandomProblem(10 + seed, 100, 3, 0.2);
    for (auto kind : {ClassifierKind::kGradientBoosting, ClassifierKind::kXgbStyle}) {
      const auto model = Fit(Config(kind, 30), p.x, p.y);
      std::vector<double> margin(p.y.size(), model.base_score());
      double previous = LogLoss(margin, p.y);
      for (const auto& tree : model.trees()) {
        for (std::size_t i = 0; i < margin.size(); ++i) {
          margin[i] += model.config().learning_rate * tree.PredictValue(p.x.row(i));
        }
        const double loss = LogLoss(margin, p.y);
        EXPECT_LE(loss, previous + 1e-12);
        previous = loss;
      }
      for (std::size_t i = 0; i < margin.size(); ++i) {
        EXPECT_NEAR(model.Margin(p.x.row(i)), margin[i], 1e-12);
      }
    }
  }
}

TEST(Ensemble, BoostingStartsFromThePriorLogOdds) {
  const auto p = RandomProblem(3, 50, 2, 0.2);
  double pos = 0;
  for (int v : p.y) pos += v;
  const double prior = pos / 50;
  const auto model = Fit(Config(ClassifierKind::kGradientBoosting, 3), p.x, p.y);
  EXPECT_NEAR(model.base_score(), std::log(prior / (1 - prior)), 1e-12);
}

TEST(Ensemble, XgbPenaltyShrinksLeaves) {
  const auto p = RandomProblem(4, 80, 3, 0.2);
  auto loose = Config(ClassifierKind::kXgbStyle, 1);
  loose.lambda = 0.0;
  auto tight = loose;
  tight.lambda = 1e4;
  const double lo = std::abs(Fit(loose, p.x, p.y).trees()[0].root().value);
  const double hi = std::abs(Fit(tight, p.x, p.y).trees()[0].root().value);
  EXPECT_LT(hi, lo);
  EXPECT_LT(hi, 1e-2);
}

// Replays one boosting round by hand.
TEST(Ensemble, AdaBoostWeightsAndReweighting) {
  const auto p = RandomProblem(5, 60, 3, 0.25);
  const auto model = Fit(Config(ClassifierKind::kAdaBoost, 2), p.x, p.y);
  ASSERT_EQ(model.trees().size(), 2u);
  const std::size_t n = p.y.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  double eps = 0;
  std::vector<bool> wrong(n);
  for (std::size_t i = 0; i < n; ++i) {
    wrong[i] = (model.trees()[0].PredictValue(p.x.row(i)) > 0.5 ? 1 : 0) != p.y[i];
    if (wrong[i]) eps += w[i];
  }
  const double alpha = std::log((1 - eps) / eps);
  EXPECT_NEAR(model.tree_weights()[0], alpha, 1e-12);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (wrong[i]) w[i] *= std::exp(alpha);
    total += w[i];
  }
  double err_after = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] /= total;
    if (wrong[i]) err_after += w[i];
  }
  // The previous learner is exactly at chance under the new weights.
  EXPECT_NEAR(err_after, 0.5, 1e-12);
  TreeParams stump;
  stump.max_depth = 1;
  stump.seed = model.trees()[1].params().seed;
  const auto expected = FitTree(p.x, p.y, w, stump);
  EXPECT_EQ(expected.root().feature, model.trees()[1].root().feature);
  EXPECT_EQ(expected.root().threshold, model.trees()[1].root().threshold);
}

TEST(Ensemble, AdaBoostAlphaForQuarterError) {
  // No stump on these labels gets fewer than two of eight rows wrong.
  Matrix x(8, 1);
  const std::vector<int> y{0, 0, 1, 0, 1, 0, 1, 1};
  for (std::size_t i = 0; i < 8; ++i) x(i, 0) = static_cast<double>(i);
  const auto model = Fit(Config(ClassifierKind::kAdaBoost, 1), x, y);
  EXPECT_NEAR(model.tree_weights()[0], std::log(3.0), 1e-12);
}

TEST(Ensemble, AdaBoostStopsOnPerfectLearner) {
  Matrix x(6, 1);
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i);
  const auto model = Fit(Config(ClassifierKind::kAdaBoost, 50), x, y);
  EXPECT_EQ(model.trees().size(), 1u);
  EXPECT_EQ(model.PredictClasses(x), y);
}

TEST(Ensemble, MaxVotingIsTheVoteShare) {
  const auto p = RandomProblem(6, 60, 3, 0.2);
  const auto model = Fit(Config(ClassifierKind::kMaxVoting, 8), p.x, p.y);
  ASSERT_EQ(model.members().size(), 3u);
  for (std::size_t i = 0; i < p.x.rows(); ++i) {
    double votes = 0;
    for (const auto& m : model.members()) votes += m.PredictClass(p.x.row(i));
    EXPECT_DOUBLE_EQ(model.PredictPositive(p.x.row(i)), votes / 3);
  }
  EXPECT_THROW(model.Margin(p.x.row(0)), UnsupportedModelError);
}

TEST(Ensemble, SingleClassBoostingIsConstant) {
  ScopedWarningCapture warnings;
  const auto p = RandomProblem(7, 20, 2, 0.0);
  const std::vector<int> ones(20, 1);
  const auto model = Fit(Config(ClassifierKind::kGradientBoosting, 5), p.x, ones);
  EXPECT_TRUE(model.trees().empty());
  EXPECT_GT(model.PredictPositive(p.x.row(0)), 0.999);
  EXPECT_TRUE(warnings.Contains("single-class"));
}

TEST(Ensemble, RejectsBadInput) {
  const auto p = RandomProblem(8, 20, 2, 0.1);
  auto c = Config(ClassifierKind::kRandomForest, 0);
  EXPECT_THROW(Fit(c, p.x, p.y), ArgumentError);
  c.n_estimators = 2;
  EXPECT_THROW(Fit(c, p.x, p.y, {"only_one"}), ArgumentError);
  const auto model = Fit(c, p.x, p.y);
  const double row[] = {0.1};
  EXPECT_THROW(model.PredictPositive(row), ArgumentError);
  EXPECT_EQ(model.feature_names()[1], "x1");
}

}  // namespace
}  // namespace hfxai
