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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hfxai/dataset.hpp"
#include "hfxai/errors.hpp"
#include "hfxai/metrics.hpp"
#include "hfxai/report.hpp"
#include "hfxai/serialize.hpp"
#include "json.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;

struct Flags {
  std::string data;
  std::string config;
  std::string out;
  std::uint64_t seed = 42;
  double test_ratio = 0.3;
  std::size_t folds = 5;
  std::string scoring = "balanced_accuracy";
  bool no_feature_selection = false;
  std::string selection_scope = "per_fold";
  std::vector<std::string> drop;
  std::size_t threads = 1;
};

void AddCommon(CLI::App* cmd, Flags& f) {
  cmd->add_option("--data", f.data, "Heart-failure CSV file");
  cmd->add_option("--config", f.config, "key = value run config; overrides flags");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)");
}

hfxai::RunConfig ResolveConfig(const Flags& f) {
  hfxai::RunConfig c;
  c.data_path = f.data;
  c.seed = f.seed;
  c.test_ratio = f.test_ratio;
  c.folds = f.folds;
  c.scoring = f.scoring;
  c.feature_selection = !f.no_feature_selection;
  c.selection_scope = f.selection_scope;
  c.drop_features = f.drop;
  c.threads = f.threads;
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.config.empty()) hfxai::ApplyConfigFile(f.config, c);
  return c;
}

int PrintFailures(const hfxai::RunReport& report) {
  for (const auto& f : report.failures) {
    std::cerr << "hfxai: stage '" << f.stage << "' failed: " << f.message << "\n";
  }
  return report.ok() ? kOk : kInternal;
}

int RunCommand(const Flags& f) {
  hfxai::RunConfig config;
  try {
    config = ResolveConfig(f);
    hfxai::Validate(config);
  } catch (const hfxai::Error& e) {
    std::cerr << "hfxai: " << e.what() << "\n";
    return kUsage;
  }
  hfxai::RunReport report;
  try {
    report = hfxai::Run(config);
  } catch (const hfxai::Error& e) {
    // Unreadable or malformed data: nothing has been computed yet.
    std::cerr << "hfxai: " << e.what() << "\n";
    return kUsage;
  }
  const auto manifest = hfxai::EmitReport(report, config.out_dir);
  std::cout << "wrote " << manifest.size() + 1 << " files to " << config.out_dir.string()
            << "\n";
  if (report.balanced_pick) {
    const auto& s = report.per_classifier[*report.balanced_pick];
    const auto& c = report.Candidate(s);
    std::printf("balanced pick: %s (FIR %.3f, CV balanced accuracy %.3f)\n",
                std::string(hfxai::DisplayName(c.config.classifier.kind)).c_str(),
                s.explainability.fir, c.cv_metrics.balanced_accuracy);
  }
  return PrintFailures(report);
}

int ExplainCommand(const Flags& f, const std::string& model_path) {
  hfxai::RunConfig config;
  hfxai::FittedPipeline pipeline;
  std::optional<hfxai::Dataset> ds;
  try {
    config = ResolveConfig(f);
    if (config.data_path.empty()) throw hfxai::ArgumentError("--data is required");
    pipeline = hfxai::LoadPipeline(model_path);
    ds.emplace(hfxai::LoadCsv(config.data_path, hfxai::HeartFailureSchema(),
                            hfxai::kHeartFailureTarget));
  } catch (const hfxai::Error& e) {
    std::cerr << "hfxai: " << e.what() << "\n";
    return kUsage;
  }
  std::vector<std::size_t> rows(ds->n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  const auto explanations = hfxai::Explain(pipeline, *ds, rows, rows, config);
  const auto manifest = hfxai::EmitExplanations(explanations, config.out_dir);
  std::cout << "wrote " << manifest.size() + 1 << " files to " << config.out_dir.string()
            << "\n";
  return kOk;
}

void PrintMetrics(const hfxai::MetricsReport& m) {
  std::printf("accuracy           %.6f\n", m.accuracy);
  std::printf("balanced_accuracy  %.6f\n", m.balanced_accuracy);
  std::printf("sensitivity        %.6f\n", m.sensitivity);
  std::printf("specificity        %.6f\n", m.specificity);
  std::printf("precision          %.6f\n", m.precision);
  std::printf("f1                 %.6f\n", m.f1);
  if (m.degenerate) std::printf("(degenerate: a ratio had a zero denominator)\n");
}

// Recomputes I, F and FIR for every classifier in a report and compares them
// with the stored values (which carry six decimals).
int CheckReport(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "hfxai: cannot open " << path << "\n";
    return kUsage;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "hfxai: " << path << " is not JSON: " << e.what() << "\n";
    return kUsage;
  }
  const auto num = [](const nlohmann::json& v) {
    return v.is_string() ? std::nan("") : v.get<double>();
  };
  int mismatches = 0;
  std::printf("%-20s %8s %8s %8s %8s\n", "classifier", "I", "F", "FIR", "check");
  for (const auto& row : doc.value("per_classifier", nlohmann::json::array())) {
    const auto s = hfxai::ComputeExplainability(
        row.at("selected").get<std::size_t>(), row.at("total").get<std::size_t>(),
        num(row.at("baseline_balanced_accuracy")),
        num(row.at("candidate").at("cv_metrics").at("balanced_accuracy")));
    const bool ok = std::abs(s.interpretability - num(row.at("interpretability"))) < 1e-6 &&
                    std::abs(s.fidelity - num(row.at("fidelity"))) < 1e-5 &&
                    std::abs(s.fir - num(row.at("fir"))) < 1e-5;
    if (!ok) ++mismatches;
    std::printf("%-20s %8.4f %8.4f %8.4f %8s\n",
                row.at("classifier").get<std::string>().c_str(), s.interpretability,
                s.fidelity, s.fir, ok ? "ok" : "MISMATCH");
  }
  return mismatches ? kInternal : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable tree-ensemble pipeline for heart-failure survival data"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "Split, grid search, scoring, test evaluation, explainers");
  AddCommon(run, run_flags);
  run->add_option("--test-ratio", run_flags.test_ratio, "Held-out fraction");
  run->add_option("--folds", run_flags.folds, "Cross-validation folds");
  run->add_option("--scoring", run_flags.scoring, "Grid-search metric");
  run->add_flag("--no-feature-selection", run_flags.no_feature_selection,
                "Evaluate every classifier on all features");
  run->add_option("--selection-scope", run_flags.selection_scope,
                  "Rank features per_fold or once on the training_split");
  run->add_option("--drop-feature", run_flags.drop, "Remove an input column (repeatable)");

  Flags explain_flags;
  std::string model_path;
  auto* explain = app.add_subcommand("explain", "Explainers on a saved model and a data file");
  AddCommon(explain, explain_flags);
  explain->add_option("--model", model_path, "model.json written by `run`")->required();

  std::string report_path;
  std::vector<std::size_t> confusion;
  std::vector<double> fir_inputs;
  auto* metrics = app.add_subcommand("metrics", "Recompute classification and FIR metrics");
  metrics->add_option("--report", report_path, "report.json to re-check");
  metrics->add_option("--confusion", confusion, "tp tn fp fn")->expected(4);
  metrics->add_option("--fir", fir_inputs, "selected total baseline_score model_score")
      ->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return RunCommand(run_flags);
    if (*explain) return ExplainCommand(explain_flags, model_path);
    if (*metrics) {
      if (report_path.empty() && confusion.empty() && fir_inputs.empty()) {
        std::cerr << "hfxai: metrics needs --report, --confusion or --fir\n";
        return kUsage;
      }
      int status = kOk;
      if (!confusion.empty()) {
        PrintMetrics(hfxai::ClassificationMetrics(
            {confusion[0], confusion[1], confusion[2], confusion[3]}));
      }
      if (!fir_inputs.empty()) {
        const auto s = hfxai::ComputeExplainability(
            static_cast<std::size_t>(fir_inputs[0]), static_cast<std::size_t>(fir_inputs[1]),
            fir_inputs[2], fir_inputs[3]);
        std::printf("interpretability   %.6f\nfidelity           %.6f\nfir                %.6f\n",
                    s.interpretability, s.fidelity, s.fir);
      }
      if (!report_path.empty()) status = CheckReport(report_path);
      return status;
    }
  } catch (const hfxai::ArgumentError& e) {
    std::cerr << "hfxai: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "hfxai: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
