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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "hfxai/dataset.hpp"
#include "hfxai/explain.hpp"
#include "hfxai/logging.hpp"
#include "hfxai/predictor.hpp"
#include "hfxai/report.hpp"
#include "hfxai/serialize.hpp"
#include "synthetic.hpp"

namespace hfxai {
namespace {

namespace fs = std::filesystem;

RunConfig Config(const fs::path& data, const fs::path& out) {
  RunConfig c;
  c.data_path = data;
  c.out_dir = out;
  c.seed = 13;
  c.classifiers = {"extra_trees", "gradient_boosting", "max_voting"};
  c.num_methods = {"anova", "mutual_info"};
  c.nom_methods = {"chi2", "rfe"};
  c.num_k = {2, 4, 6};
  c.nom_k = {1, 3};
  c.n_estimators = 15;
  c.permutation_repeats = 3;
  c.pdp_grid_points = 6;
  c.background_rows = 30;
  c.shap_rows = 5;
  return c;
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "hfxai_pipeline_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    testing::WriteSyntheticCsv(dir_ / "hf.csv", 31);
    ScopedWarningCapture quiet;
    report_ = new RunReport(hfxai::Run(Config(dir_ / "hf.csv", dir_ / "out")));
    EmitReport(*report_, dir_ / "out");
  }
  static void TearDownTestSuite() {
    delete report_;
    fs::remove_all(dir_);
  }

  static fs::path dir_;
  static RunReport* report_;
};

fs::path PipelineTest::dir_;
RunReport* PipelineTest::report_ = nullptr;

TEST_F(PipelineTest, EndToEndFromAFile) {
  const auto& r = *report_;
  ASSERT_TRUE(r.ok()) << r.failures.front().stage << ": " << r.failures.front().message;
  EXPECT_EQ(r.dataset.rows, 299u);
  EXPECT_EQ(r.dataset.positives, 96u);
  EXPECT_EQ(r.grid->candidates.size(), 3u * 2 * 3 * 2 * 2);
  ASSERT_EQ(r.per_classifier.size(), 3u);
  for (const auto& s : r.per_classifier) {
    const auto& c = r.Candidate(s);
    EXPECT_TRUE(c.valid);
    EXPECT_GT(c.cv_metrics.balanced_accuracy, 0.6);
    ASSERT_TRUE(s.test_metrics.has_value());
    EXPECT_NEAR(s.explainability.fir,
                s.explainability.fidelity /
                    (s.explainability.fidelity + s.explainability.interpretability),
                1e-9);
  }
  ASSERT_TRUE(r.grid_without_selection.has_value());
  EXPECT_EQ(r.grid_without_selection->candidates.size(), 3u);
}

TEST_F(PipelineTest, SavedModelPredictsLikeTheFittedOne) {
  const auto ds = LoadCsv(dir_ / "hf.csv", HeartFailureSchema(), kHeartFailureTarget);
  const auto loaded = LoadPipeline(dir_ / "out" / "model.json");
  const auto& fitted = *report_->picked_model;
  EXPECT_EQ(loaded.PredictPositive(ds, report_->split.test),
            fitted.PredictPositive(ds, report_->split.test));
}

TEST_F(PipelineTest, ExplanationsOfThePickedModel) {
  const auto& e = report_->explanations;
  ASSERT_TRUE(e.gini && e.permutation && e.shap && e.shap_ranking);
  const auto names = report_->picked_model->feature_names();
  EXPECT_EQ(e.gini->entries.size(), names.size());
  double total = 0;
  for (const auto& f : e.gini->entries) total += f.weight;
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(e.pdp.size(), names.size());
  for (const auto& ex : e.exemplars) {
    ASSERT_TRUE(ex.shap.has_value());
    double sum = ex.shap->base_value;
    for (double v : ex.shap->values) sum += v;
    EXPECT_NEAR(sum, ex.shap->output, 1e-9);
  }
}

TEST_F(PipelineTest, RerunIsIdentical) {
  ScopedWarningCapture quiet;
  const auto again = hfxai::Run(Config(dir_ / "hf.csv", dir_ / "out"));
  EXPECT_EQ(ReportJson(again), ReportJson(*report_));
}

}  // namespace
}  // namespace hfxai
