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

#include "hfxai/feature_select.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"
#include "hfxai/pipeline.hpp"
#include "hfxai/preprocess.hpp"
#include "hfxai/split.hpp"
#include "synthetic.hpp"

namespace hfxai {
namespace {

using testing::RandomProblem;

// Two-group F statistic from group sums of squares.
double TwoGroupF(const std::vector<double>& a, const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double ma = mean(a), mb = mean(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double grand = (ma * na + mb * nb) / (na + nb);
  const double ssb = na * (ma - grand) * (ma - grand) + nb * (mb - grand) * (mb - grand);
  double ssw = 0;
  for (double x : a) ssw += (x - ma) * (x - ma);
  for (double x : b) ssw += (x - mb) * (x - mb);
  return ssb / (ssw / (na + nb - 2));
}

TEST(Anova, MatchesTwoGroupFormula) {
  const auto p = RandomProblem(1, 50, 3, 0.2);
  const auto f = AnovaF(p.x, p.y);
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> a, b;
    for (std::size_t r = 0; r < 50; ++r) (p.y[r] ? b : a).push_back(p.x(r, c));
    EXPECT_NEAR(f[c], TwoGroupF(a, b), 1e-9 * std::max(1.0, f[c]));
  }
}

TEST(Anova, TextbookExample) {
  // Groups {1, 2, 3} and {4, 5, 6}: SSB = 13.5, SSW = 4, F = 13.5 / 1 = 13.5.
  Matrix x(6, 1, std::vector<double>{1, 2, 3, 4, 5, 6});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  EXPECT_NEAR(AnovaF(x, y)[0], 13.5, 1e-12);
}

TEST(Chi2, CountTable) {
  // Column sums per class: class 0 -> 1, class 1 -> 3; expected 2 and 2.
  Matrix x(6, 1, std::vector<double>{1, 0, 0, 1, 1, 1});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  EXPECT_NEAR(Chi2(x, y)[0], 1.0, 1e-12);
  Matrix neg(2, 1, std::vector<double>{-1, 1});
  EXPECT_THROW(Chi2(neg, std::vector<int>{0, 1}), ArgumentError);
}

TEST(MutualInfo, PerfectAndIndependent) {
  Matrix x(8, 2);
  const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
  for (std::size_t r = 0; r < 8; ++r) {
    x(r, 0) = y[r];
    x(r, 1) = static_cast<double>(r % 2);
  }
  const auto mi = MutualInfo(x, y);
  EXPECT_NEAR(mi[0], std::log(2.0), 1e-12);
  EXPECT_NEAR(mi[1], 0.0, 1e-12);
}

TEST(Ranking, TiesGoToTheEarlierName) {
  std::vector<FeatureScore> s{{"b", SelectionMethod::kAnova, 2.0, 0},
                              {"a", SelectionMethod::kAnova, 2.0, 0},
                              {"c", SelectionMethod::kAnova, 5.0, 0}};
  AssignRanks(s);
  EXPECT_EQ(s[2].rank, 1u);
  EXPECT_EQ(s[1].rank, 2u);
  EXPECT_EQ(s[0].rank, 3u);
  const auto top = SelectTopK(s, 2);
  EXPECT_EQ(top.selected, (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(top.masked, (std::vector<std::string>{"b"}));
  EXPECT_THROW(SelectTopK(s, 0), ArgumentError);
  EXPECT_THROW(SelectTopK(s, 4), ArgumentError);
}

TEST(Ranking, ZeroVarianceWarns) {
  Matrix x(4, 2, std::vector<double>{1, 0, 1, 1, 1, 2, 1, 3});
  ScopedWarningCapture warnings;
  const auto s = ScoreFeatures(x, std::vector<int>{0, 0, 1, 1}, {"flat", "ramp"},
                               SelectionMethod::kAnova);
  EXPECT_EQ(s[0].score, 0.0);
  EXPECT_TRUE(warnings.Contains("flat"));
  EXPECT_THROW(ScoreFeatures(x, std::vector<int>{0, 0, 1, 1}, {"flat", "ramp"},
                             SelectionMethod::kRfe),
               ArgumentError);
}

TEST(Rfe, EliminatesTheWeakestFirst) {
  auto p = RandomProblem(2, 200, 3, 0.05);
  // Column 2 is noise; column 0 decides the label.
  for (std::size_t r = 0; r < 200; ++r) p.y[r] = p.x(r, 0) > 0.5 ? 1 : 0;
  ScopedWarningCapture separable;
  const auto ranking = RfeRanking(p.x, p.y, {"x0", "x1", "x2"});
  std::size_t best = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (ranking[i].rank == 1) best = i;
  }
  EXPECT_EQ(best, 0u);
  const auto all = RfeSelect(p.x, p.y, {"x0", "x1", "x2"}, 3);
  EXPECT_EQ(all.selected.size(), 3u);
  EXPECT_TRUE(all.masked.empty());
}

TEST(Rfe, KEqualsMKeepsEveryNominal) {
  const auto ds = testing::SyntheticHeartFailure(4);
  const auto labels = ds.labels();
  const auto split = StratifiedSplit(labels, 0.3, 4);
  const auto plan = FitPlan(ds, split.train, {});
  const Matrix x = ApplyPlan(plan, ds, split.train);
  std::vector<int> y;
  for (auto r : split.train) y.push_back(labels[r]);
  std::vector<std::size_t> num, nom;
  SplitGroups(plan.feature_kinds(), num, nom);
  const auto names = plan.feature_names();
  std::vector<std::string> nom_names;
  for (auto c : nom) nom_names.push_back(names[c]);
  const auto r = RfeSelect(x.SelectColumns(nom), y, nom_names, 5);
  EXPECT_EQ(r.selected.size(), 5u);
}

TEST(Logistic, SeparatesAnObviousSignal) {
  Matrix x(40, 1);
  std::vector<int> y(40);
  for (std::size_t r = 0; r < 40; ++r) {
    x(r, 0) = static_cast<double>(r);
    y[r] = r >= 20;
  }
  ScopedWarningCapture quiet;
  EXPECT_GT(FitLogisticCoefficients(x, y)[0], 0.5);
}

TEST(Methods, NamesRoundTrip) {
  for (auto m : {SelectionMethod::kAnova, SelectionMethod::kChi2, SelectionMethod::kMutualInfo,
                 SelectionMethod::kRfe}) {
    EXPECT_EQ(ParseSelectionMethod(ToString(m)), m);
  }
  EXPECT_THROW(ParseSelectionMethod("lasso"), ArgumentError);
}

TEST(SelectFeatures, GroupsAreRankedSeparately) {
  const auto ds = testing::SyntheticHeartFailure(5);
  const auto labels = ds.labels();
  std::vector<std::size_t> rows(ds.n_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const auto fitted = FitPlan(ds, rows, {});
  const Matrix x = ApplyPlan(fitted, ds, rows);
  SelectionSpec spec;
  spec.num_k = 4;
  spec.nom_method = SelectionMethod::kMutualInfo;
  spec.nom_k = 1;
  const auto sel = SelectFeatures(x, labels, fitted.feature_names(), fitted.feature_kinds(), spec);
  EXPECT_EQ(sel.columns.size(), 5u);
  EXPECT_TRUE(std::is_sorted(sel.columns.begin(), sel.columns.end()));
  EXPECT_EQ(sel.numerical.selected.size(), 4u);
  EXPECT_EQ(sel.nominal.selected.size(), 1u);
  EXPECT_EQ(sel.numerical.masked.size(), 3u);
  for (std::size_t i = 0; i < sel.columns.size(); ++i) {
    EXPECT_EQ(sel.names[i], fitted.feature_names()[sel.columns[i]]);
  }
  spec.nom_k = 0;
  EXPECT_EQ(SelectFeatures(x, labels, fitted.feature_names(), fitted.feature_kinds(), spec)
                .columns.size(),
            4u);
  spec.enabled = false;
  EXPECT_EQ(SelectFeatures(x, labels, fitted.feature_names(), fitted.feature_kinds(), spec)
                .columns.size(),
            12u);
}

}  // namespace
}  // namespace hfxai
