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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hfxai/ensemble.hpp"
#include "hfxai/errors.hpp"
#include "hfxai/predictor.hpp"
#include "hfxai/random.hpp"
#include "synthetic.hpp"

namespace hfxai {
namespace {

using testing::RandomProblem;

// v(S): mean prediction with the coalition's columns copied from x.
double CoalitionValue(const Predictor& f, const Matrix& background, std::span<const double> x,
                      const std::vector<bool>& in) {
  double sum = 0;
  for (std::size_t r = 0; r < background.rows(); ++r) {
    std::vector<double> row(background.row(r).begin(), background.row(r).end());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (in[j]) row[j] = x[j];
    }
    sum += f.PredictPositive(row);
  }
  return sum / static_cast<double>(background.rows());
}

// Shapley values as the average marginal contribution over all m! orderings.
std::vector<double> AllOrderings(const Predictor& f, const Matrix& background,
                                 std::span<const double> x) {
  const std::size_t m = f.n_features();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(m, 0.0);
  double count = 0;
  do {
    std::vector<bool> in(m, false);
    double before = CoalitionValue(f, background, x, in);
    for (std::size_t j : order) {
      in[j] = true;
      const double after = CoalitionValue(f, background, x, in);
      phi[j] += after - before;
      before = after;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi) v /= count;
  return phi;
}

std::vector<std::string> Names(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < m; ++j) out.push_back("f" + std::to_string(j));
  return out;
}

EnsembleConfig Small(ClassifierKind kind, std::size_t trees, std::uint64_t seed) {
  auto c = DefaultConfig(kind);
  c.n_estimators = trees;
  c.seed = seed;
  return c;
}

TEST(Shapley, MatchesAllOrderingsOnSmallModels) {
  const ClassifierKind kinds[] = {ClassifierKind::kRandomForest, ClassifierKind::kExtraTrees,
                                  ClassifierKind::kGradientBoosting,
                                  ClassifierKind::kAdaBoost, ClassifierKind::kXgbStyle};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const std::size_t m = 2 + rng.Index(3);
    const auto p = RandomProblem(40 + seed, 60, m, 0.15);
    const auto model = Fit(Small(kinds[seed % 5], 1 + seed % 3, seed), p.x, p.y, Names(m));
    const EnsemblePredictor f(model);
    const Matrix background = SampleRows(p.x, 12, seed);
    for (std::size_t r = 0; r < 20; ++r) {
      const auto shap = ShapleyExact(f, background, p.x.row(r));
      const auto oracle = AllOrderings(f, background, p.x.row(r));
      double total = shap.base_value;
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_NEAR(shap.values[j], oracle[j], 1e-9) << "seed " << seed << " row " << r;
        total += shap.values[j];
      }
      EXPECT_NEAR(total, shap.output, 1e-9);
      EXPECT_DOUBLE_EQ(shap.output, model.PredictPositive(p.x.row(r)));
    }
  }
}

TEST(Shapley, DummyAndSymmetry) {
  const FunctionPredictor f(Names(3), [](std::span<const double> x) {
    return 0.2 * x[0] + 0.2 * x[1] + 0.3 * x[0] * x[1];
  });
  Matrix background(4, 3);
  const double col[] = {0.1, 0.4, 0.6, 0.9};
  for (std::size_t r = 0; r < 4; ++r) {
    background(r, 0) = col[r];
    background(r, 1) = col[r];
    background(r, 2) = col[3 - r];
  }
  const double x[] = {0.7, 0.7, 0.2};
  const auto shap = ShapleyExact(f, background, x, 2);
  EXPECT_EQ(shap.values[2], 0.0);
  EXPECT_NEAR(shap.values[0], shap.values[1], 1e-15);
}

TEST(Shapley, LinearModelHasClosedForm) {
  const double w[] = {0.3, -0.2, 0.05};
  const FunctionPredictor f(Names(3), [&](std::span<const double> x) {
    return 0.4 + w[0] * x[0] + w[1] * x[1] + w[2] * x[2];
  });
  const auto p = RandomProblem(3, 10, 3);
  const double x[] = {0.9, 0.1, 0.5};
  const auto shap = ShapleyExact(f, p.x, x);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0;
    for (std::size_t r = 0; r < 10; ++r) mean += p.x(r, j);
    EXPECT_NEAR(shap.values[j], w[j] * (x[j] - mean / 10), 1e-12);
  }
}

TEST(Shapley, Limits) {
  const FunctionPredictor wide(Names(21), [](std::span<const double>) { return 0.5; });
  const Matrix bg(2, 21);
  const std::vector<double> x(21, 0.0);
  EXPECT_THROW(ShapleyExact(wide, bg, x), ArgumentError);
  const FunctionPredictor narrow(Names(2), [](std::span<const double>) { return 0.5; });
  const double row[] = {0, 0};
  EXPECT_THROW(ShapleyExact(narrow, Matrix(0, 2), row), ArgumentError);
  EXPECT_THROW(ShapleyExact(narrow, Matrix(2, 3), row), ArgumentError);
}

TEST(Shapley, SummaryAndRanking) {
  const FunctionPredictor f(Names(3), [](std::span<const double> x) {
    return 0.1 + 0.6 * x[0] + 0.2 * x[1];
  });
  const auto p = RandomProblem(4, 30, 3);
  const auto summary = SummarizeShap(f, SampleRows(p.x, 10, 1), p.x);
  ASSERT_EQ(summary.rows.size(), 30u);
  EXPECT_EQ(summary.mean_abs_class0, summary.mean_abs_class1);
  const auto ranking = ShapRanking(summary);
  EXPECT_EQ(ranking.RankOf("f0"), 1u);
  EXPECT_EQ(ranking.RankOf("f1"), 2u);
  EXPECT_EQ(ranking.Find("f2").weight, 0.0);
  EXPECT_THROW(ranking.RankOf("nope"), ArgumentError);
}

TEST(GiniImportance, SumsToOneAndIgnoresDummies) {
  auto p = RandomProblem(5, 120, 4, 0.1);
  for (std::size_t r = 0; r < p.x.rows(); ++r) p.x(r, 3) = 1.0;
  for (auto kind : {ClassifierKind::kRandomForest, ClassifierKind::kExtraTrees,
                    ClassifierKind::kAdaBoost, ClassifierKind::kGradientBoosting,
                    ClassifierKind::kXgbStyle, ClassifierKind::kMaxVoting,
                    ClassifierKind::kDecisionTree}) {
    const auto model = Fit(Small(kind, 10, 3), p.x, p.y, Names(4));
    const auto ranking = GiniImportance(model);
    double total = 0;
    for (const auto& e : ranking.entries) total += e.weight;
    EXPECT_NEAR(total, 1.0, 1e-9) << ToString(kind);
    EXPECT_EQ(ranking.Find("f3").weight, 0.0) << ToString(kind);
    EXPECT_FALSE(ranking.degenerate);
    for (std::size_t i = 1; i < ranking.entries.size(); ++i) {
      EXPECT_GE(ranking.entries[i - 1].weight, ranking.entries[i].weight);
    }
  }
}

TEST(GiniImportance, SingleStump) {
  Matrix x(6, 2);
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = static_cast<double>(i % 2);
    x(i, 1) = static_cast<double>(i);
  }
  const auto model = Fit(Small(ClassifierKind::kDecisionTree, 1, 0), x, y, Names(2));
  const auto ranking = GiniImportance(model);
  EXPECT_EQ(ranking.entries[0].feature, "f1");
  EXPECT_DOUBLE_EQ(ranking.entries[0].weight, 1.0);
  EXPECT_EQ(ranking.entries[1].weight, 0.0);
}

TEST(GiniImportance, NoSplitsIsDegenerate) {
  Matrix x(4, 2, 1.0);
  const std::vector<int> y{0, 1, 0, 1};
  const auto model = Fit(Small(ClassifierKind::kRandomForest, 3, 0), x, y, Names(2));
  const auto ranking = GiniImportance(model);
  EXPECT_TRUE(ranking.degenerate);
  for (const auto& e : ranking.entries) EXPECT_EQ(e.weight, 0.0);
}

TEST(PathContributions, AddUpToThePrediction) {
  const auto p = RandomProblem(6, 80, 4, 0.15);
  for (auto kind : {ClassifierKind::kDecisionTree, ClassifierKind::kRandomForest,
                    ClassifierKind::kExtraTrees, ClassifierKind::kAdaBoost,
                    ClassifierKind::kGradientBoosting, ClassifierKind::kXgbStyle}) {
    const auto model = Fit(Small(kind, 12, 2), p.x, p.y, Names(4));
    for (std::size_t r = 0; r < p.x.rows(); ++r) {
      const auto pc = PathContributions(model, p.x.row(r));
      for (int cls : {0, 1}) {
        const auto c = pc.ForClass(cls);
        const double total =
            std::accumulate(c.contributions.begin(), c.contributions.end(), c.bias);
        EXPECT_NEAR(total, c.probability, 1e-9) << ToString(kind) << " row " << r;
      }
      EXPECT_EQ(pc.predicted_class, model.PredictClass(p.x.row(r)));
    }
  }
}

TEST(PathContributions, ForestBiasIsTheRootValue) {
  const auto p = RandomProblem(7, 50, 3, 0.15);
  const auto model = Fit(Small(ClassifierKind::kExtraTrees, 5, 1), p.x, p.y, Names(3));
  double positives = 0;
  for (int v : p.y) positives += v;
  EXPECT_NEAR(PathContributions(model, p.x.row(0)).bias, positives / 50, 1e-12);
}

TEST(PathContributions, UnusedFeatureGetsNothing) {
  auto p = RandomProblem(8, 60, 3, 0.1);
  for (std::size_t r = 0; r < p.x.rows(); ++r) p.x(r, 2) = 0.0;
  const auto model = Fit(Small(ClassifierKind::kRandomForest, 8, 1), p.x, p.y, Names(3));
  for (std::size_t r = 0; r < 10; ++r) {
    EXPECT_EQ(PathContributions(model, p.x.row(r)).contributions[2], 0.0);
  }
}

TEST(PathContributions, MaxVotingIsUnsupported) {
  const auto p = RandomProblem(9, 40, 2, 0.1);
  const auto model = Fit(Small(ClassifierKind::kMaxVoting, 3, 1), p.x, p.y);
  EXPECT_THROW(PathContributions(model, p.x.row(0)), UnsupportedModelError);
  const auto tree = Fit(Small(ClassifierKind::kDecisionTree, 1, 1), p.x, p.y);
  EXPECT_THROW(PathContributions(tree, p.x.row(0)).ForClass(2), ArgumentError);
}

TEST(Permutation, DummyScoresZero) {
  const FunctionPredictor f(Names(3), [](std::span<const double> x) { return x[0]; });
  const auto p = RandomProblem(10, 60, 3, 0.0);
  std::vector<int> y(60);
  for (std::size_t r = 0; r < 60; ++r) y[r] = p.x(r, 0) > 0.5 ? 1 : 0;
  const auto ranking = PermutationImportance(f, p.x, y, "accuracy", 5, 3);
  EXPECT_EQ(ranking.entries[0].feature, "f0");
  EXPECT_GT(ranking.entries[0].weight, 0.2);
  for (const char* name : {"f1", "f2"}) {
    EXPECT_EQ(ranking.Find(name).weight, 0.0);
    EXPECT_EQ(ranking.Find(name).std, 0.0);
  }
  EXPECT_EQ(ranking.Find("f0").weight,
            PermutationImportance(f, p.x, y, Metric::kAccuracy, 5, 3).Find("f0").weight);
  EXPECT_THROW(PermutationImportance(f, p.x, y, "accuracy", 0, 3), ArgumentError);
}

TEST(Permutation, MeanAndStdOfDrops) {
  // Replays the seeded shuffles of feature 1.
  const FunctionPredictor f(Names(2), [](std::span<const double> x) { return x[1]; });
  const auto p = RandomProblem(11, 40, 2, 0.0);
  std::vector<int> y(40);
  for (std::size_t r = 0; r < 40; ++r) y[r] = p.x(r, 1) > 0.5 ? 1 : 0;
  const std::size_t repeats = 4;
  const auto ranking = PermutationImportance(f, p.x, y, Metric::kBalancedAccuracy, repeats, 9);
  std::vector<double> drops;
  for (std::size_t r = 0; r < repeats; ++r) {
    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(DeriveSeed(9, {1, r}));
    rng.Shuffle(std::span<std::size_t>(perm));
    std::vector<int> pred(40);
    for (std::size_t i = 0; i < 40; ++i) pred[i] = p.x(perm[i], 1) > 0.5 ? 1 : 0;
    drops.push_back(1.0 - ClassificationMetrics(Confusion(y, pred)).balanced_accuracy);
  }
  const double mean = std::accumulate(drops.begin(), drops.end(), 0.0) / repeats;
  double var = 0;
  for (double d : drops) var += (d - mean) * (d - mean);
  EXPECT_NEAR(ranking.Find("f1").weight, mean, 1e-12);
  EXPECT_NEAR(ranking.Find("f1").std, std::sqrt(var / repeats), 1e-12);
}

TEST(QuantileGrid, DistinctValuesWhenFew) {
  const std::vector<double> v{3, 1, 2, 2, 3, 1};
  EXPECT_EQ(QuantileGrid(v, 5), (std::vector<double>{1, 2, 3}));
  EXPECT_THROW(QuantileGrid(v, 1), ArgumentError);
  EXPECT_THROW(QuantileGrid(std::vector<double>{}, 4), ArgumentError);
}

TEST(QuantileGrid, InterpolatedQuantilesWhenMany) {
  std::vector<double> v(101);
  for (std::size_t i = 0; i <= 100; ++i) v[i] = static_cast<double>(100 - i);
  const auto grid = QuantileGrid(v, 5);
  EXPECT_EQ(grid, (std::vector<double>{0, 25, 50, 75, 100}));
  const auto p = RandomProblem(12, 200, 1);
  const auto g = QuantileGrid(p.x.column(0), 20);
  EXPECT_EQ(g.size(), 20u);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i - 1], g[i]);
}

TEST(Pdp, EqualsOverwriteAndAverage) {
  const auto p = RandomProblem(13, 70, 3, 0.15);
  const auto model = Fit(Small(ClassifierKind::kGradientBoosting, 10, 1), p.x, p.y, Names(3));
  const EnsemblePredictor f(model);
  for (const char* name : {"f0", "f2"}) {
    const std::size_t c = name[1] - '0';
    const auto curve = Pdp(f, p.x, name, 8);
    ASSERT_EQ(curve.grid.size(), 8u);
    for (std::size_t g = 0; g < curve.grid.size(); ++g) {
      Matrix work = p.x;
      double sum = 0;
      for (std::size_t r = 0; r < work.rows(); ++r) {
        work(r, c) = curve.grid[g];
        sum += model.PredictPositive(work.row(r));
      }
      const double mean = sum / static_cast<double>(work.rows());
      double var = 0;
      for (std::size_t r = 0; r < work.rows(); ++r) {
        const double d = model.PredictPositive(work.row(r)) - mean;
        var += d * d;
      }
      EXPECT_NEAR(curve.mean_prediction[g], mean, 1e-12);
      EXPECT_NEAR(curve.band[g], std::sqrt(var / static_cast<double>(work.rows())), 1e-12);
    }
  }
  EXPECT_THROW(Pdp(f, p.x, "missing", 5), ArgumentError);
}

TEST(Pdp, TwoWayOnAnAdditiveModel) {
  const FunctionPredictor f(Names(3), [](std::span<const double> x) {
    return 0.1 + 0.5 * x[0] * x[0] + 0.3 * x[1] + 0.05 * x[2];
  });
  const auto p = RandomProblem(14, 50, 3);
  const auto a = Pdp(f, p.x, "f0", 6);
  const auto b = Pdp(f, p.x, "f1", 6);
  const auto ab = Pdp2d(f, p.x, "f0", "f1", 6);
  const double overall = [&] {
    double s = 0;
    for (std::size_t r = 0; r < 50; ++r) s += f.PredictPositive(p.x.row(r));
    return s / 50;
  }();
  ASSERT_EQ(ab.grid, a.grid);
  ASSERT_EQ(ab.grid_b, b.grid);
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    for (std::size_t j = 0; j < b.grid.size(); ++j) {
      EXPECT_NEAR(ab.mean_prediction[i * b.grid.size() + j],
                  a.mean_prediction[i] + b.mean_prediction[j] - overall, 1e-12);
    }
  }
  EXPECT_THROW(Pdp2d(f, p.x, "f0", "f0", 6), ArgumentError);
}

TEST(Pdp, FlatForAnUnusedFeature) {
  const FunctionPredictor f(Names(2), [](std::span<const double> x) { return x[0]; });
  const auto p = RandomProblem(15, 30, 2);
  const auto curve = Pdp(f, p.x, "f1", 10);
  for (double v : curve.mean_prediction) EXPECT_NEAR(v, curve.mean_prediction[0], 1e-15);
}

TEST(SampleRows, SubsetInOriginalOrder) {
  const auto p = RandomProblem(16, 30, 2);
  const Matrix s = SampleRows(p.x, 10, 4);
  ASSERT_EQ(s.rows(), 10u);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    while (cursor < 30 && p.x(cursor, 0) != s(i, 0)) ++cursor;
    ASSERT_LT(cursor, 30u);
  }
  EXPECT_EQ(s, SampleRows(p.x, 10, 4));
  EXPECT_EQ(SampleRows(p.x, 100, 4), p.x);
}

}  // namespace
}  // namespace hfxai
