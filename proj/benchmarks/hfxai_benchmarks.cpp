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

#include <benchmark/benchmark.h>

#include <numeric>
#include <sstream>

#include "hfxai/dataset.hpp"
#include "hfxai/ensemble.hpp"
#include "hfxai/explain.hpp"
#include "hfxai/model_select.hpp"
#include "hfxai/predictor.hpp"
#include "hfxai/random.hpp"
#include "hfxai/split.hpp"
#include "hfxai/tree.hpp"

namespace {

using namespace hfxai;

// 209 training rows of 12 features, the size of the training split.
struct Problem {
  Matrix x{209, 12};
  std::vector<int> y = std::vector<int>(209);
  std::vector<std::string> names;

  Problem() {
    Rng rng(1);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      double s = 0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        x(r, c) = rng.Uniform();
        if (c < 3) s += x(r, c);
      }
      y[r] = s + 0.3 * rng.Uniform() > 1.6;
    }
    for (std::size_t c = 0; c < x.cols(); ++c) names.push_back("f" + std::to_string(c));
  }
};

const Problem& Data() {
  static const Problem p;
  return p;
}

void BM_FitTree(benchmark::State& state) {
  const auto& p = Data();
  const std::vector<double> w(p.x.rows(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(FitTree(p.x, p.y, w, {}));
}
BENCHMARK(BM_FitTree);

void BM_FitEnsemble(benchmark::State& state) {
  const auto& p = Data();
  auto config = DefaultConfig(static_cast<ClassifierKind>(state.range(0)));
  config.seed = 3;
  state.SetLabel(std::string(ToString(config.kind)));
  for (auto _ : state) benchmark::DoNotOptimize(Fit(config, p.x, p.y, p.names));
}
BENCHMARK(BM_FitEnsemble)
    ->Arg(static_cast<int>(ClassifierKind::kRandomForest))
    ->Arg(static_cast<int>(ClassifierKind::kExtraTrees))
    ->Arg(static_cast<int>(ClassifierKind::kAdaBoost))
    ->Arg(static_cast<int>(ClassifierKind::kGradientBoosting))
    ->Arg(static_cast<int>(ClassifierKind::kXgbStyle))
    ->Unit(benchmark::kMillisecond);

void BM_ShapleyExact(benchmark::State& state) {
  const auto& p = Data();
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<std::size_t> cols(m);
  std::iota(cols.begin(), cols.end(), 0);
  const Matrix x = p.x.SelectColumns(cols);
  const std::vector<std::string> names(p.names.begin(), p.names.begin() + static_cast<long>(m));
  auto config = DefaultConfig(ClassifierKind::kRandomForest);
  config.n_estimators = 20;
  const auto model = Fit(config, x, p.y, names);
  const EnsemblePredictor f(model);
  const Matrix background = SampleRows(x, 100, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ShapleyExact(f, background, x.row(0)));
}
BENCHMARK(BM_ShapleyExact)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_EvaluateCandidate(benchmark::State& state) {
  static const Dataset ds = [] {
    // Reuse the problem matrix as a five-numerical, seven-nominal dataset
    // by thresholding the last seven columns.
    const auto& p = Data();
    std::vector<FeatureSpec> schema;
    for (std::size_t c = 0; c < 12; ++c) {
      schema.push_back({p.names[c], c < 5 ? FeatureKind::kNumerical : FeatureKind::kNominal,
                        {}, {}, {}});
    }
    schema.push_back({"DEATH_EVENT", FeatureKind::kNominal, {}, {}, {0.0, 1.0}});
    std::string csv;
    for (const auto& s : schema) csv += (csv.empty() ? "" : ",") + s.name;
    csv += "\n";
    for (std::size_t r = 0; r < p.x.rows(); ++r) {
      for (std::size_t c = 0; c < 12; ++c) {
        csv += std::to_string(c < 5 ? p.x(r, c) : static_cast<double>(p.x(r, c) > 0.5)) + ",";
      }
      csv += std::to_string(p.y[r]) + "\n";
    }
    std::istringstream in(csv);
    return ParseCsv(in, schema);
  }();
  const auto split = StratifiedSplit(ds.labels(), 0.0, 1);
  const auto folds = MakeFolds(split.train, ds.labels(), 5, 1);
  const CrossValidator cv(ds, split, folds);
  CandidateConfig cand;
  cand.classifier = DefaultConfig(ClassifierKind::kRandomForest);
  cand.selection.num_k = 3;
  cand.selection.nom_k = 2;
  for (auto _ : state) benchmark::DoNotOptimize(cv.Evaluate(cand, 5));
}
BENCHMARK(BM_EvaluateCandidate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
