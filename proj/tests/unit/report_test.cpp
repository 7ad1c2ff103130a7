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

#include "hfxai/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"
#include "synthetic.hpp"

namespace hfxai {
namespace {

namespace fs = std::filesystem;

RunConfig SmallConfig() {
  RunConfig c;
  c.data_path = "synthetic.csv";
  c.seed = 5;
  c.classifiers = {"random_forest", "adaboost"};
  c.num_methods = {"anova"};
  c.nom_methods = {"chi2"};
  c.num_k = {3, 4};
  c.nom_k = {1};
  c.n_estimators = 10;
  c.permutation_repeats = 3;
  c.pdp_grid_points = 5;
  c.background_rows = 20;
  c.shap_rows = 4;
  return c;
}

const RunReport& SmallRun() {
  static const RunReport report = [] {
    ScopedWarningCapture quiet;
    return hfxai::Run(SmallConfig(), testing::SyntheticHeartFailure(21));
  }();
  return report;
}

fs::path TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hfxai_report_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Config, TextKeysAndRanges) {
  RunConfig c;
  std::istringstream in(
      "# comment\n"
      "data = /tmp/hf.csv\n"
      "seed = 7\n"
      "num_k = 1-3, 6\n"
      "classifiers = adaboost, xgb_style\n"
      "feature_selection = false\n"
      "selection_scope = training_split\n"
      "\n"
      "out = reports\n");
  ApplyConfigText(in, c);
  EXPECT_EQ(c.data_path, fs::path("/tmp/hf.csv"));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.num_k, (std::vector<std::size_t>{1, 2, 3, 6}));
  EXPECT_EQ(c.classifiers, (std::vector<std::string>{"adaboost", "xgb_style"}));
  EXPECT_FALSE(c.feature_selection);
  EXPECT_EQ(c.selection_scope, "training_split");
  EXPECT_EQ(c.out_dir, fs::path("reports"));
  EXPECT_NO_THROW(Validate(c));
}

TEST(Config, Errors) {
  RunConfig c;
  std::istringstream unknown("learning_rate = 0.1\n");
  EXPECT_THROW(ApplyConfigText(unknown, c), ArgumentError);
  std::istringstream range("num_k = 4-2\n");
  EXPECT_THROW(ApplyConfigText(range, c), ArgumentError);
  EXPECT_THROW(ApplyConfigFile("/nonexistent/hfxai.cfg", c), IoError);

  EXPECT_THROW(Validate(RunConfig{}), ArgumentError);
  auto bad = SmallConfig();
  bad.folds = 1;
  EXPECT_THROW(Validate(bad), ArgumentError);
  bad = SmallConfig();
  bad.test_ratio = 1.0;
  EXPECT_THROW(Validate(bad), ArgumentError);
  bad = SmallConfig();
  bad.nom_methods = {"anova"};
  EXPECT_THROW(Validate(bad), ArgumentError);
  bad = SmallConfig();
  bad.selection_scope = "nested";
  EXPECT_THROW(Validate(bad), ArgumentError);
  bad = SmallConfig();
  bad.explainers = {"lime"};
  EXPECT_THROW(Validate(bad), ArgumentError);
}

TEST(BalancedPick, ClosestToHalfThenScore) {
  EXPECT_EQ(BalancedPick({0.3, 0.55, 0.45}, {0.9, 0.7, 0.8}), 2u);
  EXPECT_EQ(BalancedPick({0.6, 0.4}, {0.7, 0.8}), 1u);
  EXPECT_EQ(BalancedPick({0.5}, {0.1}), 0u);
  EXPECT_THROW(BalancedPick({}, {}), ArgumentError);
  EXPECT_THROW(BalancedPick({0.5}, {0.1, 0.2}), ArgumentError);
}

TEST(Run, SmallGridCompletes) {
  const auto& r = SmallRun();
  ASSERT_TRUE(r.ok()) << r.failures.front().stage << ": " << r.failures.front().message;
  ASSERT_TRUE(r.grid.has_value());
  EXPECT_EQ(r.grid->candidates.size(), 2u * 2 * 1);
  ASSERT_EQ(r.per_classifier.size(), 2u);
  EXPECT_EQ(r.split.train.size(), 209u);
  EXPECT_EQ(r.split.test.size(), 90u);
  ASSERT_TRUE(r.balanced_pick.has_value());
  ASSERT_TRUE(r.picked_model.has_value());
  EXPECT_TRUE(r.grid_without_selection.has_value());
  EXPECT_TRUE(r.explanations.gini.has_value());
  EXPECT_TRUE(r.explanations.shap.has_value());
  EXPECT_EQ(r.explanations.exemplars.size(), 2u);
}

TEST(Run, FirFollowsFromItsOwnColumns) {
  const auto& r = SmallRun();
  std::vector<double> fir, bacc;
  for (const auto& s : r.per_classifier) {
    const auto& e = s.explainability;
    const auto& cand = r.Candidate(s);
    EXPECT_NEAR(e.fir, e.fidelity / (e.fidelity + e.interpretability), 1e-9);
    EXPECT_NEAR(e.fidelity, s.baseline_bacc / cand.cv_metrics.balanced_accuracy, 1e-9);
    EXPECT_NEAR(e.interpretability,
                (12.0 - static_cast<double>(cand.selected_features.size())) / 12.0, 1e-9);
    fir.push_back(e.fir);
    bacc.push_back(cand.cv_metrics.balanced_accuracy);
    ASSERT_TRUE(s.test_metrics.has_value());
  }
  EXPECT_EQ(*r.balanced_pick, BalancedPick(fir, bacc));
}

TEST(Run, ReportIsByteIdenticalAcrossRuns) {
  ScopedWarningCapture quiet;
  const auto again = hfxai::Run(SmallConfig(), testing::SyntheticHeartFailure(21));
  EXPECT_EQ(ReportJson(again), ReportJson(SmallRun()));
  const auto a = TempDir("a");
  const auto b = TempDir("b");
  const auto ma = EmitReport(SmallRun(), a);
  const auto mb = EmitReport(again, b);
  ASSERT_EQ(ma.size(), mb.size());
  for (std::size_t i = 0; i < ma.size(); ++i) {
    EXPECT_EQ(ma[i].path, mb[i].path);
    EXPECT_EQ(ReadFile(a / ma[i].path), ReadFile(b / mb[i].path)) << ma[i].path;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Emit, ManifestListsEveryFile) {
  const auto dir = TempDir("manifest");
  const auto manifest = EmitReport(SmallRun(), dir);
  std::size_t on_disk = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) ++on_disk;
  }
  // The manifest does not list itself.
  EXPECT_EQ(on_disk, manifest.size() + 1);
  for (const auto& m : manifest) {
    ASSERT_TRUE(fs::exists(dir / m.path)) << m.path;
    EXPECT_EQ(fs::file_size(dir / m.path), m.bytes) << m.path;
  }
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "model.json"));
  fs::remove_all(dir);
}

TEST(Emit, PdpGridIsStrictlyIncreasing) {
  const auto dir = TempDir("pdp");
  EmitReport(SmallRun(), dir);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "explanations")) {
    const auto name = entry.path().filename().string();
    if (name.rfind("pdp_", 0) != 0) continue;
    ++files;
    std::ifstream in(entry.path());
    std::string line;
    std::getline(in, line);
    double prev = -1e300;
    std::size_t points = 0;
    while (std::getline(in, line)) {
      const double v = std::stod(line.substr(0, line.find(',')));
      EXPECT_GT(v, prev) << name;
      prev = v;
      ++points;
    }
    EXPECT_GE(points, 2u) << name;
  }
  EXPECT_GT(files, 0u);
  fs::remove_all(dir);
}

TEST(Emit, UnwritableDirectory) {
  const auto blocker = TempDir("blocker");
  std::ofstream(blocker) << "file";
  EXPECT_THROW(EmitReport(SmallRun(), blocker / "out"), IoError);
  fs::remove(blocker);
}

TEST(Run, StageFailureGivesAPartialReport) {
  auto config = SmallConfig();
  config.test_ratio = 0.0;
  ScopedWarningCapture quiet;
  // One positive row: every training fold without it is single-class.
  const auto r = hfxai::Run(config, testing::SyntheticHeartFailure(3, 40, 1));
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.failures.empty());
  EXPECT_EQ(r.failures.front().stage, "grid_search");
  EXPECT_EQ(r.dataset.rows, 40u);
  const auto json = ReportJson(r);
  EXPECT_NE(json.find("grid_search"), std::string::npos);
  EXPECT_NE(json.find("\"ok\": false"), std::string::npos);
}

}  // namespace
}  // namespace hfxai
