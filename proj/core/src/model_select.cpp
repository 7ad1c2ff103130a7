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

#include "hfxai/model_select.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "hfxai/errors.hpp"
#include "hfxai/parallel.hpp"
#include "hfxai/random.hpp"

namespace hfxai {
namespace {

struct FoldData {
  Matrix train_x;
  Matrix hold_x;
  std::vector<int> train_y;
  std::vector<int> hold_y;
  bool single_class = false;
  std::map<SelectionMethod, GroupRanking> num_rankings;
  std::map<SelectionMethod, GroupRanking> nom_rankings;
};

// Everything derived from one preprocessing config: k folds plus the full
// training partition at index k.
struct PrepSlot {
  PreprocessConfig config;
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
  std::vector<std::size_t> num_cols;
  std::vector<std::size_t> nom_cols;
  std::vector<FoldData> folds;
};

std::vector<int> Gather(const std::vector<int>& labels, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(labels[r]);
  return out;
}

bool SingleClass(const std::vector<int>& y) {
  return std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
}

}  // namespace

struct CrossValidator::Impl {
  const Dataset& ds;
  SplitIndices split;
  FoldPlan folds;
  std::vector<int> labels;
  mutable std::mutex mu;
  mutable std::vector<std::unique_ptr<PrepSlot>> slots;

  Impl(const Dataset& d, const SplitIndices& s, FoldPlan f)
      : ds(d), split(s), folds(std::move(f)), labels(d.labels()) {}

  FoldData BuildFold(const PreprocessConfig& config, std::span<const std::size_t> train,
                     std::span<const std::size_t> hold) const {
    FoldData fd;
    const PreprocessPlan plan = FitPlan(ds, train, config);
    fd.train_x = ApplyPlan(plan, ds, train);
    fd.hold_x = ApplyPlan(plan, ds, hold);
    fd.train_y = Gather(labels, train);
    fd.hold_y = Gather(labels, hold);
    fd.single_class = SingleClass(fd.train_y);
    return fd;
  }

  // Caller holds `mu`.
  PrepSlot& Slot(const PreprocessConfig& config) const {
    for (auto& slot : slots) {
      if (slot->config == config) return *slot;
    }
    auto slot = std::make_unique<PrepSlot>();
    slot->config = config;
    const PreprocessPlan probe = FitPlan(ds, split.train, config);
    slot->names = probe.feature_names();
    slot->kinds = probe.feature_kinds();
    SplitGroups(slot->kinds, slot->num_cols, slot->nom_cols);
    for (std::size_t f = 0; f < folds.k(); ++f) {
      slot->folds.push_back(BuildFold(config, folds.TrainRows(f), folds.HoldoutRows(f)));
    }
    slot->folds.push_back(BuildFold(config, split.train, {}));
    slots.push_back(std::move(slot));
    return *slots.back();
  }

  // Caller holds `mu`.
  const GroupRanking& Ranking(PrepSlot& slot, std::size_t fold, bool numerical,
                              SelectionMethod method) const {
    FoldData& fd = slot.folds[fold];
    auto& cache = numerical ? fd.num_rankings : fd.nom_rankings;
    auto it = cache.find(method);
    if (it == cache.end()) {
      it = cache
               .emplace(method, RankGroup(fd.train_x, fd.train_y, slot.names,
                                          numerical ? slot.num_cols : slot.nom_cols, method))
               .first;
    }
    return it->second;
  }

  struct Prepared {
    const FoldData* data;
    FeatureSelection selection;
  };

  Prepared Prepare(const CandidateConfig& cand, std::size_t fold) const {
    std::lock_guard<std::mutex> lock(mu);
    PrepSlot& slot = Slot(cand.preprocess);
    const FoldData& fd = slot.folds[fold];
    if (fd.single_class) return {&fd, {}};
    const SelectionSpec& spec = cand.selection;
    if (!spec.enabled) {
      return {&fd, SelectFeatures(fd.train_x, fd.train_y, slot.names, slot.kinds, spec)};
    }
    const std::size_t source = spec.per_fold ? fold : folds.k();
    if (slot.folds[source].single_class) return {&fd, {}};
    return {&fd, CombineSelection(slot.names, Ranking(slot, source, true, spec.num_method),
                                  spec.num_k, Ranking(slot, source, false, spec.nom_method),
                                  spec.nom_k)};
  }
};

CrossValidator::CrossValidator(const Dataset& ds, const SplitIndices& split, FoldPlan folds)
    : impl_(std::make_unique<Impl>(ds, split, std::move(folds))) {
  for (std::size_t r : impl_->folds.rows()) {
    if (!std::binary_search(split.train.begin(), split.train.end(), r)) {
      throw ArgumentError("folds must cover training rows only");
    }
  }
}

CrossValidator::~CrossValidator() = default;

const FoldPlan& CrossValidator::folds() const { return impl_->folds; }

CandidateResult CrossValidator::Evaluate(const CandidateConfig& cand,
                                         std::uint64_t seed) const {
  CandidateResult result;
  result.config = cand;
  result.seed = seed;
  const std::size_t k = impl_->folds.k();
  for (std::size_t f = 0; f < k; ++f) {
    const auto prepared = impl_->Prepare(cand, f);
    const FoldData& fd = *prepared.data;
    if (fd.single_class) {
      result.valid = false;
      result.invalid_reason =
          "fold " + std::to_string(f) + " training rows hold a single class";
      result.fold_metrics.clear();
      return result;
    }
    const auto& cols = prepared.selection.columns;
    EnsembleConfig config = cand.classifier;
    config.seed = DeriveSeed(seed, {f});
    const FittedEnsemble model =
        Fit(config, fd.train_x.SelectColumns(cols), fd.train_y, prepared.selection.names);
    const auto predicted = model.PredictClasses(fd.hold_x.SelectColumns(cols));
    result.fold_metrics.push_back(ClassificationMetrics(Confusion(fd.hold_y, predicted)));
  }
  result.cv_metrics = MeanMetrics(result.fold_metrics);
  const auto full = impl_->Prepare(cand, k);
  result.n_inputs = full.data->train_x.cols();
  if (full.data->single_class) {
    result.valid = false;
    result.invalid_reason = "training partition holds a single class";
    return result;
  }
  if (cand.selection.enabled) {
    for (const auto* group : {&full.selection.numerical, &full.selection.nominal}) {
      result.selected_features.insert(result.selected_features.end(),
                                      group->selected.begin(), group->selected.end());
    }
  } else {
    result.selected_features = full.selection.names;
  }
  return result;
}

double CrossValidator::FidelityBaseline(const CandidateConfig& cand,
                                        std::uint64_t seed) const {
  CandidateConfig tree = cand;
  if (tree.classifier.kind != ClassifierKind::kDecisionTree) {
    tree.classifier = DefaultConfig(ClassifierKind::kDecisionTree);
  }
  const CandidateResult r = Evaluate(tree, seed);
  if (!r.valid) throw ArgumentError("fidelity baseline is invalid: " + r.invalid_reason);
  return r.cv_metrics.balanced_accuracy;
}

CandidateResult EvaluateCandidate(const Dataset& ds, const SplitIndices& split,
                                  const FoldPlan& folds, const CandidateConfig& cand,
                                  std::uint64_t seed) {
  return CrossValidator(ds, split, folds).Evaluate(cand, seed);
}

double FidelityBaseline(const Dataset& ds, const SplitIndices& split, const FoldPlan& folds,
                        const CandidateConfig& cand, std::uint64_t seed) {
  return CrossValidator(ds, split, folds).FidelityBaseline(cand, seed);
}

std::uint64_t CandidateSeed(std::uint64_t master_seed, std::size_t index) {
  return DeriveSeed(master_seed, {0xCA4D, index});
}

GridResult GridSearch(const CrossValidator& cv, std::span<const CandidateConfig> grid,
                      Metric scoring, std::uint64_t master_seed, std::size_t threads) {
  if (grid.empty()) throw ArgumentError("grid is empty");
  GridResult out;
  out.scoring = scoring;
  out.candidates.resize(grid.size());
  ParallelFor(grid.size(), threads, [&](std::size_t i) {
    out.candidates[i] = cv.Evaluate(grid[i], CandidateSeed(master_seed, i));
    out.candidates[i].index = i;
  });
  out.ranking.resize(grid.size());
  std::iota(out.ranking.begin(), out.ranking.end(), 0);
  std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = out.candidates[a];
    const auto& rb = out.candidates[b];
    if (ra.valid != rb.valid) return ra.valid;
    if (!ra.valid) return false;
    return MetricValue(ra.cv_metrics, scoring) > MetricValue(rb.cv_metrics, scoring);
  });
  std::vector<ClassifierKind> kinds;
  for (const auto& cand : grid) {
    if (std::find(kinds.begin(), kinds.end(), cand.classifier.kind) == kinds.end()) {
      kinds.push_back(cand.classifier.kind);
    }
  }
  for (ClassifierKind kind : kinds) {
    for (std::size_t i : out.ranking) {
      const auto& r = out.candidates[i];
      if (r.valid && r.config.classifier.kind == kind) {
        out.per_classifier_best.push_back(i);
        break;
      }
    }
  }
  return out;
}

GridResult GridSearch(const Dataset& ds, const SplitIndices& split, const FoldPlan& folds,
                      std::span<const CandidateConfig> grid, std::string_view scoring,
                      std::uint64_t master_seed, std::size_t threads) {
  const Metric metric = ParseMetric(scoring);
  const CrossValidator cv(ds, split, folds);
  return GridSearch(cv, grid, metric, master_seed, threads);
}

std::vector<ClassifierKind> DefaultClassifiers() {
  return {ClassifierKind::kRandomForest,     ClassifierKind::kExtraTrees,
          ClassifierKind::kAdaBoost,         ClassifierKind::kGradientBoosting,
          ClassifierKind::kXgbStyle,         ClassifierKind::kMaxVoting};
}

std::vector<CandidateConfig> DefaultGrid(const Dataset& ds,
                                         std::span<const ClassifierKind> kinds,
                                         bool feature_selection,
                                         const PreprocessConfig& preprocess) {
  std::size_t n_num = 0;
  std::size_t n_nom = 0;
  for (std::size_t c : ds.input_columns()) {
    ++(ds.specs()[c].kind == FeatureKind::kNumerical ? n_num : n_nom);
  }
  const auto ks = [](std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k <= n; ++k) out.push_back(k);
    if (out.empty()) out.push_back(0);
    return out;
  };
  std::vector<CandidateConfig> grid;
  for (ClassifierKind kind : kinds) {
    CandidateConfig base;
    base.classifier = DefaultConfig(kind);
    base.preprocess = preprocess;
    if (!feature_selection) {
      base.selection.enabled = false;
      grid.push_back(base);
      continue;
    }
    for (SelectionMethod num : {SelectionMethod::kAnova, SelectionMethod::kMutualInfo}) {
      for (std::size_t num_k : ks(n_num)) {
        for (SelectionMethod nom :
             {SelectionMethod::kChi2, SelectionMethod::kMutualInfo, SelectionMethod::kRfe}) {
          for (std::size_t nom_k : ks(n_nom)) {
            CandidateConfig cand = base;
            cand.selection = {true, num, num_k, nom, nom_k};
            grid.push_back(cand);
          }
        }
      }
    }
  }
  return grid;
}

std::uint64_t FinalFitSeed(std::uint64_t candidate_seed) {
  return DeriveSeed(candidate_seed, {0xF1A1});
}

TestEvaluation FinalTestEval(const CandidateResult& best, const Dataset& ds,
                             const SplitIndices& split) {
  if (split.test.empty()) throw ArgumentError("no test rows");
  if (!best.valid) throw ArgumentError("cannot evaluate an invalid candidate");
  TestEvaluation out;
  out.pipeline = FitPipeline(ds, split.train, best.config, FinalFitSeed(best.seed));
  const auto predicted = out.pipeline.PredictClasses(ds, split.test);
  out.metrics = ClassificationMetrics(Confusion(Gather(ds.labels(), split.test), predicted));
  return out;
}

}  // namespace hfxai
