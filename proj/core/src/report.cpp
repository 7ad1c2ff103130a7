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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "hfxai/errors.hpp"
#include "hfxai/random.hpp"
#include "hfxai/serialize.hpp"
#include "json_io.hpp"

namespace hfxai {
namespace {

using nlohmann::json;
using detail::FormatFixed;

// Seed tags for the run stages.
constexpr std::uint64_t kSplitTag = 0x5011;
constexpr std::uint64_t kFoldTag = 0xF01D;
constexpr std::uint64_t kAllFeaturesTag = 0xA11F;
constexpr std::uint64_t kBackgroundTag = 0xBAC6;
constexpr std::uint64_t kPermutationTag = 0x9E73;

const std::set<std::string>& KnownExplainers() {
  static const std::set<std::string> names{"gini", "path", "permutation", "pdp", "shap"};
  return names;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    std::string item = Trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& text, const std::string& key) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ArgumentError("config '" + key + "': cannot parse '" + text + "'");
  }
  return v;
}

bool ParseBool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ArgumentError("config '" + key + "': expected true or false, got '" + text + "'");
}

std::vector<std::size_t> ParseKs(const std::string& text, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& item : SplitList(text)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(ParseNumber<std::size_t>(item, key));
      continue;
    }
    const auto lo = ParseNumber<std::size_t>(Trim(item.substr(0, dash)), key);
    const auto hi = ParseNumber<std::size_t>(Trim(item.substr(dash + 1)), key);
    if (lo > hi) throw ArgumentError("config '" + key + "': empty range '" + item + "'");
    for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
  }
  return out;
}

void ApplyKey(const std::string& key, const std::string& value, RunConfig& c) {
  if (key == "data") {
    c.data_path = value;
  } else if (key == "seed") {
    c.seed = ParseNumber<std::uint64_t>(value, key);
  } else if (key == "test_ratio") {
    c.test_ratio = ParseNumber<double>(value, key);
  } else if (key == "folds") {
    c.folds = ParseNumber<std::size_t>(value, key);
  } else if (key == "scoring") {
    c.scoring = value;
  } else if (key == "feature_selection") {
    c.feature_selection = ParseBool(value, key);
  } else if (key == "selection_scope") {
    c.selection_scope = value;
  } else if (key == "compare_without_selection") {
    c.compare_without_selection = ParseBool(value, key);
  } else if (key == "classifiers") {
    c.classifiers = SplitList(value);
  } else if (key == "drop_features") {
    c.drop_features = SplitList(value);
  } else if (key == "num_methods") {
    c.num_methods = SplitList(value);
  } else if (key == "nom_methods") {
    c.nom_methods = SplitList(value);
  } else if (key == "num_k") {
    c.num_k = ParseKs(value, key);
  } else if (key == "nom_k") {
    c.nom_k = ParseKs(value, key);
  } else if (key == "n_estimators") {
    c.n_estimators = ParseNumber<std::size_t>(value, key);
  } else if (key == "impute") {
    c.impute = value;
  } else if (key == "normalize") {
    c.normalize = value;
  } else if (key == "explainers") {
    c.explainers = SplitList(value);
  } else if (key == "permutation_repeats") {
    c.permutation_repeats = ParseNumber<std::size_t>(value, key);
  } else if (key == "pdp_grid_points") {
    c.pdp_grid_points = ParseNumber<std::size_t>(value, key);
  } else if (key == "background_rows") {
    c.background_rows = ParseNumber<std::size_t>(value, key);
  } else if (key == "shap_rows") {
    c.shap_rows = ParseNumber<std::size_t>(value, key);
  } else if (key == "threads") {
    c.threads = ParseNumber<std::size_t>(value, key);
  } else if (key == "out") {
    c.out_dir = value;
  } else {
    throw ArgumentError("unknown config key '" + key + "'");
  }
}

bool Wants(const RunConfig& c, std::string_view explainer) {
  return std::find(c.explainers.begin(), c.explainers.end(), explainer) != c.explainers.end();
}

std::vector<int> Labels(const Dataset& ds, std::span<const std::size_t> rows) {
  const auto all = ds.labels();
  std::vector<int> out;
  for (std::size_t r : rows) out.push_back(all[r]);
  return out;
}

std::vector<CandidateConfig> BuildGrid(const RunConfig& c, const Dataset& ds,
                                       bool feature_selection) {
  std::vector<ClassifierKind> kinds;
  if (c.classifiers.empty()) {
    kinds = DefaultClassifiers();
  } else {
    for (const auto& name : c.classifiers) kinds.push_back(ParseClassifierKind(name));
  }
  PreprocessConfig pre{ParseNumericImpute(c.impute), ParseNormalization(c.normalize)};
  std::size_t n_num = 0;
  std::size_t n_nom = 0;
  for (std::size_t col : ds.input_columns()) {
    ++(ds.specs()[col].kind == FeatureKind::kNumerical ? n_num : n_nom);
  }
  const auto ks = [](const std::vector<std::size_t>& given, std::size_t n) {
    if (!given.empty()) return given;
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k <= n; ++k) out.push_back(k);
    if (out.empty()) out.push_back(0);
    return out;
  };
  std::vector<CandidateConfig> grid;
  for (ClassifierKind kind : kinds) {
    CandidateConfig base;
    base.classifier = DefaultConfig(kind);
    base.classifier.n_estimators = c.n_estimators;
    base.preprocess = pre;
    if (!feature_selection) {
      base.selection.enabled = false;
      grid.push_back(base);
      continue;
    }
    for (const auto& num : c.num_methods) {
      for (std::size_t num_k : ks(c.num_k, n_num)) {
        for (const auto& nom : c.nom_methods) {
          for (std::size_t nom_k : ks(c.nom_k, n_nom)) {
            CandidateConfig cand = base;
            cand.selection = {true, ParseSelectionMethod(num), num_k,
                              ParseSelectionMethod(nom), nom_k,
                              c.selection_scope == "per_fold"};
            grid.push_back(cand);
          }
        }
      }
    }
  }
  return grid;
}

// ---- JSON views -------------------------------------------------------

json ToJson(const MetricsReport& m) {
  return {{"accuracy", m.accuracy},       {"balanced_accuracy", m.balanced_accuracy},
          {"sensitivity", m.sensitivity}, {"specificity", m.specificity},
          {"precision", m.precision},     {"f1", m.f1},
          {"degenerate", m.degenerate}};
}

json ToJson(const RunConfig& c) {
  return {{"data", c.data_path.string()},
          {"seed", c.seed},
          {"test_ratio", c.test_ratio},
          {"folds", c.folds},
          {"scoring", c.scoring},
          {"feature_selection", c.feature_selection},
          {"selection_scope", c.selection_scope},
          {"compare_without_selection", c.compare_without_selection},
          {"classifiers", c.classifiers},
          {"drop_features", c.drop_features},
          {"num_methods", c.num_methods},
          {"nom_methods", c.nom_methods},
          {"num_k", c.num_k},
          {"nom_k", c.nom_k},
          {"n_estimators", c.n_estimators},
          {"impute", c.impute},
          {"normalize", c.normalize},
          {"explainers", c.explainers},
          {"permutation_repeats", c.permutation_repeats},
          {"pdp_grid_points", c.pdp_grid_points},
          {"background_rows", c.background_rows},
          {"shap_rows", c.shap_rows},
          {"threads", c.threads},
          {"out", c.out_dir.string()}};
}

json ToJson(const CandidateConfig& c) {
  json out = {{"classifier", ToString(c.classifier.kind)},
              {"feature_selection", c.selection.enabled},
              {"impute", ToString(c.preprocess.impute_numerical)},
              {"normalize", ToString(c.preprocess.normalize)},
              {"n_estimators", c.classifier.n_estimators}};
  if (c.selection.enabled) {
    out["num_method"] = ToString(c.selection.num_method);
    out["num_k"] = c.selection.num_k;
    out["nom_method"] = ToString(c.selection.nom_method);
    out["nom_k"] = c.selection.nom_k;
    out["selection_scope"] = c.selection.per_fold ? "per_fold" : "training_split";
  }
  return out;
}

json ToJson(const CandidateResult& r) {
  json folds = json::array();
  for (const auto& f : r.fold_metrics) folds.push_back(ToJson(f));
  json out = {{"index", r.index},
              {"config", ToJson(r.config)},
              {"label", Describe(r.config)},
              {"seed", r.seed},
              {"valid", r.valid},
              {"fold_metrics", std::move(folds)},
              {"selected_features", r.selected_features},
              {"n_inputs", r.n_inputs}};
  if (r.valid) out["cv_metrics"] = ToJson(r.cv_metrics);
  if (!r.valid) out["invalid_reason"] = r.invalid_reason;
  return out;
}

json ToJson(const ImportanceRanking& ranking) {
  json out = json::array();
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    out.push_back({{"rank", i + 1}, {"feature", e.feature}, {"weight", e.weight}, {"std", e.std}});
  }
  return out;
}

json ToJson(const PathContribution& p) {
  json contributions = json::array();
  for (std::size_t j = 0; j < p.features.size(); ++j) {
    contributions.push_back({{"feature", p.features[j]}, {"value", p.contributions[j]}});
  }
  return {{"bias", p.bias},
          {"contributions", std::move(contributions)},
          {"probability", p.probability},
          {"predicted_class", p.predicted_class}};
}

// Waterfall: contributions ordered by |value| descending, ties by name.
json Waterfall(const ShapValues& s) {
  std::vector<std::size_t> order(s.features.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(s.values[a]) > std::abs(s.values[b]);
  });
  json contributions = json::array();
  for (std::size_t j : order) {
    contributions.push_back({{"feature", s.features[j]}, {"value", s.values[j]}});
  }
  return {{"base_value", s.base_value},
          {"contributions", std::move(contributions)},
          {"output", s.output}};
}

std::string PdpFileName(const PdpCurve& c) {
  std::string name = "explanations/pdp_" + c.features[0];
  if (c.features.size() > 1) name = "explanations/pdp2d_" + c.features[0] + "__" + c.features[1];
  return name + ".csv";
}

json ToJson(const ExplanationSet& e) {
  json out = json::object();
  if (e.gini) out["gini_importance"] = ToJson(*e.gini);
  if (e.permutation) out["permutation_importance"] = ToJson(*e.permutation);
  if (e.shap_ranking) out["shap_importance"] = ToJson(*e.shap_ranking);
  if (e.shap) out["shap_rows"] = e.shap->rows.size();
  json pdp = json::array();
  for (const auto& c : e.pdp) pdp.push_back(PdpFileName(c));
  for (const auto& c : e.pdp2d) pdp.push_back(PdpFileName(c));
  out["pdp_files"] = std::move(pdp);
  json exemplars = json::array();
  for (const auto& ex : e.exemplars) {
    json j = {{"label", ex.label}, {"row", ex.row}};
    if (ex.path) {
      const int cls = ex.label == "true_negative" ? 0 : 1;
      j["path_contributions"] = ToJson(ex.path->ForClass(cls));
    }
    if (ex.shap) j["shap"] = Waterfall(*ex.shap);
    exemplars.push_back(std::move(j));
  }
  out["exemplars"] = std::move(exemplars);
  out["notes"] = e.notes;
  return out;
}

// ---- Files ------------------------------------------------------------

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec || !std::filesystem::is_directory(root_)) {
      throw IoError("cannot create output directory " + root_.string());
    }
  }

  void Write(const std::string& rel, const std::string& content) {
    const auto path = root_ / rel;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
    entries_.push_back({rel, static_cast<std::uintmax_t>(content.size())});
  }

  std::vector<ManifestEntry> Finish() {
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.path < b.path; });
    json files = json::array();
    for (const auto& e : entries_) files.push_back({{"path", e.path}, {"bytes", e.bytes}});
    const auto path = root_ / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << detail::CanonicalJson(json{{"files", std::move(files)}});
    if (!out) throw IoError("failed writing " + path.string());
    return entries_;
  }

 private:
  std::filesystem::path root_;
  std::vector<ManifestEntry> entries_;
};

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string Join(const std::vector<std::string>& items, const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

const char* kMetricHeader = "accuracy,balanced_accuracy,sensitivity,specificity,precision,f1";

std::string MetricCells(const MetricsReport& m) {
  return FormatFixed(m.accuracy) + "," + FormatFixed(m.balanced_accuracy) + "," +
         FormatFixed(m.sensitivity) + "," + FormatFixed(m.specificity) + "," +
         FormatFixed(m.precision) + "," + FormatFixed(m.f1);
}

std::string RankingCsv(const ImportanceRanking& r) {
  std::string out = "feature,weight,std\n";
  for (const auto& e : r.entries) {
    out += CsvField(e.feature) + "," + FormatFixed(e.weight) + "," + FormatFixed(e.std) + "\n";
  }
  return out;
}

std::string PdpCsv(const PdpCurve& c) {
  std::string out;
  if (c.features.size() == 1) {
    out = CsvField(c.features[0]) + ",mean_prediction,band\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      out += FormatFixed(c.grid[i]) + "," + FormatFixed(c.mean_prediction[i]) + "," +
             FormatFixed(c.band[i]) + "\n";
    }
    return out;
  }
  out = CsvField(c.features[0]) + "," + CsvField(c.features[1]) + ",mean_prediction,band\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    for (std::size_t j = 0; j < c.grid_b.size(); ++j) {
      const std::size_t k = i * c.grid_b.size() + j;
      out += FormatFixed(c.grid[i]) + "," + FormatFixed(c.grid_b[j]) + "," +
             FormatFixed(c.mean_prediction[k]) + "," + FormatFixed(c.band[k]) + "\n";
    }
  }
  return out;
}

void WriteExplanations(const ExplanationSet& e, OutputDir& dir) {
  if (e.gini) dir.Write("explanations/gini_importance.csv", RankingCsv(*e.gini));
  if (e.permutation) {
    dir.Write("explanations/permutation_importance.csv", RankingCsv(*e.permutation));
  }
  if (e.shap_ranking) dir.Write("explanations/shap_importance.csv", RankingCsv(*e.shap_ranking));
  if (e.shap) {
    std::string out = "feature,mean_abs_class0,mean_abs_class1\n";
    for (std::size_t j = 0; j < e.shap->features.size(); ++j) {
      out += CsvField(e.shap->features[j]) + "," + FormatFixed(e.shap->mean_abs_class0[j]) +
             "," + FormatFixed(e.shap->mean_abs_class1[j]) + "\n";
    }
    dir.Write("explanations/shap_summary.csv", out);
  }
  for (const auto& c : e.pdp) dir.Write(PdpFileName(c), PdpCsv(c));
  for (const auto& c : e.pdp2d) dir.Write(PdpFileName(c), PdpCsv(c));
  for (const auto& ex : e.exemplars) {
    if (ex.path) {
      const int cls = ex.label == "true_negative" ? 0 : 1;
      const PathContribution p = ex.path->ForClass(cls);
      std::string out = "feature,contribution\n<BIAS>," + FormatFixed(p.bias) + "\n";
      for (std::size_t j = 0; j < p.features.size(); ++j) {
        out += CsvField(p.features[j]) + "," + FormatFixed(p.contributions[j]) + "\n";
      }
      dir.Write("explanations/path_contributions_" + ex.label + ".csv", out);
    }
    if (ex.shap) {
      dir.Write("explanations/shap_waterfall_" + ex.label + ".json",
                detail::CanonicalJson(Waterfall(*ex.shap)));
    }
  }
}

}  // namespace

void Validate(const RunConfig& c) {
  if (c.data_path.empty()) throw ArgumentError("data path is required");
  if (!(c.test_ratio >= 0.0 && c.test_ratio < 1.0)) {
    throw ArgumentError("test_ratio must lie in [0, 1)");
  }
  if (c.folds < 2) throw ArgumentError("folds must be at least 2");
  if (c.selection_scope != "per_fold" && c.selection_scope != "training_split") {
    throw ArgumentError("selection_scope accepts per_fold and training_split, got '" +
                        c.selection_scope + "'");
  }
  ParseMetric(c.scoring);
  for (const auto& name : c.classifiers) ParseClassifierKind(name);
  if (c.feature_selection) {
    if (c.num_methods.empty() || c.nom_methods.empty()) {
      throw ArgumentError("feature selection needs at least one method per group");
    }
    for (const auto& m : c.num_methods) {
      const auto method = ParseSelectionMethod(m);
      if (method != SelectionMethod::kAnova && method != SelectionMethod::kMutualInfo) {
        throw ArgumentError("num_methods accepts anova and mutual_info, got '" + m + "'");
      }
    }
    for (const auto& m : c.nom_methods) {
      if (ParseSelectionMethod(m) == SelectionMethod::kAnova) {
        throw ArgumentError("nom_methods accepts chi2, mutual_info and rfe, got '" + m + "'");
      }
    }
  }
  if (c.n_estimators < 1) throw ArgumentError("n_estimators must be at least 1");
  ParseNumericImpute(c.impute);
  ParseNormalization(c.normalize);
  for (const auto& e : c.explainers) {
    if (!KnownExplainers().count(e)) throw ArgumentError("unknown explainer '" + e + "'");
  }
  if (c.permutation_repeats < 1) throw ArgumentError("permutation_repeats must be at least 1");
  if (c.pdp_grid_points < 2) throw ArgumentError("pdp_grid_points must be at least 2");
  if (c.background_rows < 1) throw ArgumentError("background_rows must be at least 1");
  if (c.out_dir.empty()) throw ArgumentError("output directory is required");
}

void ApplyConfigText(std::istream& in, RunConfig& config) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      ApplyKey(Trim(trimmed.substr(0, eq)), Trim(trimmed.substr(eq + 1)), config);
    } catch (const ArgumentError& e) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void ApplyConfigFile(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  ApplyConfigText(in, config);
}

DatasetSummary Summarize(const Dataset& ds) {
  DatasetSummary s;
  s.rows = ds.n_rows();
  s.positives = ds.CountLabel(1);
  s.negatives = ds.CountLabel(0);
  for (std::size_t c : ds.input_columns()) {
    ColumnSummary col;
    col.name = ds.specs()[c].name;
    col.kind = ds.specs()[c].kind;
    std::size_t n = 0;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
      if (ds.is_missing(r, c)) {
        ++col.missing;
        continue;
      }
      const double v = ds.value(r, c);
      col.min = n ? std::min(col.min, v) : v;
      col.max = n ? std::max(col.max, v) : v;
      col.mean += v;
      ++n;
    }
    if (n) col.mean /= static_cast<double>(n);
    s.columns.push_back(col);
  }
  return s;
}

std::size_t BalancedPick(const std::vector<double>& fir, const std::vector<double>& bacc) {
  if (fir.empty() || fir.size() != bacc.size()) {
    throw ArgumentError("balanced pick needs one FIR and one score per classifier");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < fir.size(); ++i) {
    const double d = std::abs(fir[i] - 0.5);
    const double db = std::abs(fir[best] - 0.5);
    if (d < db || (d == db && bacc[i] > bacc[best])) best = i;
  }
  return best;
}

ExplanationSet Explain(const FittedPipeline& pipeline, const Dataset& ds,
                       std::span<const std::size_t> rows,
                       std::span<const std::size_t> background_rows, const RunConfig& config) {
  if (rows.empty()) throw ArgumentError("no rows to explain");
  ExplanationSet out;
  const PipelinePredictor predictor(pipeline);
  const FittedEnsemble& model = pipeline.model();
  const Matrix x = pipeline.RawFeatures(ds, rows);
  const std::vector<int> y = Labels(ds, rows);
  const Matrix background = SampleRows(pipeline.RawFeatures(ds, background_rows),
                                       config.background_rows,
                                       DeriveSeed(config.seed, {kBackgroundTag}));
  const auto& names = pipeline.feature_names();

  if (Wants(config, "gini")) out.gini = GiniImportance(model);
  if (Wants(config, "permutation")) {
    out.permutation = PermutationImportance(predictor, x, y, Metric::kAccuracy,
                                            config.permutation_repeats,
                                            DeriveSeed(config.seed, {kPermutationTag}));
  }
  if (Wants(config, "pdp")) {
    for (const auto& name : names) {
      out.pdp.push_back(Pdp(predictor, background, name, config.pdp_grid_points));
    }
    // Top feature against the next two, by Gini order when available.
    std::vector<std::string> order;
    if (out.gini) {
      for (const auto& e : out.gini->entries) order.push_back(e.feature);
    } else {
      order = names;
    }
    for (std::size_t j = 1; j < std::min<std::size_t>(order.size(), 3); ++j) {
      out.pdp2d.push_back(
          Pdp2d(predictor, background, order[0], order[j], config.pdp_grid_points));
    }
  }
  const bool shap_ok = names.size() <= kMaxShapleyFeatures;
  if (Wants(config, "shap")) {
    if (shap_ok) {
      std::vector<std::size_t> idx;
      const std::size_t n =
          config.shap_rows ? std::min(config.shap_rows, x.rows()) : x.rows();
      for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
      out.shap = SummarizeShap(predictor, background, x.SelectRows(idx), config.threads);
      out.shap_ranking = ShapRanking(*out.shap);
    } else {
      out.notes.push_back("shap skipped: " + std::to_string(names.size()) +
                          " features exceed the exact enumeration bound");
    }
  }

  const auto predicted = pipeline.PredictClasses(ds, rows);
  for (int cls : {0, 1}) {
    std::optional<std::size_t> pos;
    for (std::size_t i = 0; i < rows.size() && !pos; ++i) {
      if (y[i] == cls && predicted[i] == cls) pos = i;
    }
    const std::string label = cls == 0 ? "true_negative" : "true_positive";
    if (!pos) {
      out.notes.push_back("no " + label + " exemplar among the explained rows");
      continue;
    }
    Exemplar ex;
    ex.label = label;
    ex.row = rows[*pos];
    if (Wants(config, "path")) {
      if (model.kind() == ClassifierKind::kMaxVoting) {
        if (cls == 0) out.notes.push_back("path contributions unsupported for max_voting");
      } else {
        ex.path = PathContributions(model, pipeline.ToModelSpace(x.row(*pos)));
      }
    }
    if (Wants(config, "shap") && shap_ok) {
      ex.shap = ShapleyExact(predictor, background, x.row(*pos), config.threads);
    }
    out.exemplars.push_back(std::move(ex));
  }
  return out;
}

RunReport Run(const RunConfig& config) {
  Validate(config);
  Dataset ds = LoadCsv(config.data_path, HeartFailureSchema(), kHeartFailureTarget);
  if (!config.drop_features.empty()) ds = ds.WithoutColumns(config.drop_features);
  return Run(config, ds);
}

RunReport Run(const RunConfig& config, const Dataset& ds) {
  Validate(config);
  RunReport report;
  report.config = config;
  report.dataset = Summarize(ds);
  std::string stage;
  try {
    stage = "split";
    const auto labels = ds.labels();
    report.split =
        StratifiedSplit(labels, config.test_ratio, DeriveSeed(config.seed, {kSplitTag}));
    FoldPlan folds = MakeFolds(report.split.train, labels, config.folds,
                               DeriveSeed(config.seed, {kFoldTag}));
    const CrossValidator cv(ds, report.split, std::move(folds));
    const Metric scoring = ParseMetric(config.scoring);

    stage = "grid_search";
    const auto grid = BuildGrid(config, ds, config.feature_selection);
    report.grid = GridSearch(cv, grid, scoring, config.seed, config.threads);
    if (report.grid->per_classifier_best.empty()) {
      throw Error("no valid candidate in the grid");
    }

    stage = "explainability";
    std::vector<double> firs;
    std::vector<double> baccs;
    for (std::size_t idx : report.grid->per_classifier_best) {
      const CandidateResult& r = report.grid->candidates[idx];
      ClassifierSummary s;
      s.candidate = idx;
      s.baseline_bacc = cv.FidelityBaseline(r.config, r.seed);
      s.explainability = ComputeExplainability(r.selected_features.size(), r.n_inputs,
                                               s.baseline_bacc,
                                               r.cv_metrics.balanced_accuracy);
      firs.push_back(s.explainability.fir);
      baccs.push_back(r.cv_metrics.balanced_accuracy);
      report.per_classifier.push_back(s);
    }
    report.balanced_pick = BalancedPick(firs, baccs);

    if (config.feature_selection && config.compare_without_selection) {
      stage = "without_selection";
      const auto all = BuildGrid(config, ds, false);
      report.grid_without_selection = GridSearch(
          cv, all, scoring, DeriveSeed(config.seed, {kAllFeaturesTag}), config.threads);
    }

    stage = "test_evaluation";
    for (std::size_t i = 0; i < report.per_classifier.size(); ++i) {
      auto& s = report.per_classifier[i];
      TestEvaluation t = FinalTestEval(report.Candidate(s), ds, report.split);
      s.test_metrics = t.metrics;
      report.grid->candidates[s.candidate].test_metrics = t.metrics;
      if (i == *report.balanced_pick) report.picked_model = std::move(t.pipeline);
    }

    stage = "explanations";
    if (!config.explainers.empty()) {
      report.explanations = Explain(*report.picked_model, ds, report.split.test,
                                    report.split.train, config);
    }
  } catch (const Error& e) {
    report.failures.push_back({stage, e.what()});
  }
  return report;
}

std::string ReportJson(const RunReport& r) {
  json doc;
  doc["config"] = ToJson(r.config);

  json columns = json::array();
  for (const auto& c : r.dataset.columns) {
    columns.push_back({{"name", c.name},
                       {"kind", ToString(c.kind)},
                       {"missing", c.missing},
                       {"min", c.min},
                       {"max", c.max},
                       {"mean", c.mean}});
  }
  doc["dataset"] = {{"rows", r.dataset.rows},
                    {"positives", r.dataset.positives},
                    {"negatives", r.dataset.negatives},
                    {"columns", std::move(columns)}};
  doc["split"] = {{"train_rows", r.split.train.size()}, {"test_rows", r.split.test.size()}};

  if (r.grid) {
    doc["grid"] = {{"scoring", ToString(r.grid->scoring)},
                   {"candidates", r.grid->candidates.size()},
                   {"best", r.grid->ranking.empty() ? json(nullptr)
                                                    : json(r.grid->ranking.front())}};
  }
  json classifiers = json::array();
  for (std::size_t i = 0; i < r.per_classifier.size(); ++i) {
    const auto& s = r.per_classifier[i];
    const CandidateResult& c = r.Candidate(s);
    json j = {{"classifier", ToString(c.config.classifier.kind)},
              {"display_name", DisplayName(c.config.classifier.kind)},
              {"candidate", ToJson(c)},
              {"baseline_balanced_accuracy", s.baseline_bacc},
              {"interpretability", s.explainability.interpretability},
              {"fidelity", s.explainability.fidelity},
              {"fir", s.explainability.fir},
              {"selected", c.selected_features.size()},
              {"total", c.n_inputs}};
    if (s.test_metrics) j["test_metrics"] = ToJson(*s.test_metrics);
    classifiers.push_back(std::move(j));
  }
  doc["per_classifier"] = std::move(classifiers);
  if (r.grid_without_selection) {
    json rows = json::array();
    for (std::size_t idx : r.grid_without_selection->per_classifier_best) {
      const auto& c = r.grid_without_selection->candidates[idx];
      rows.push_back({{"classifier", ToString(c.config.classifier.kind)},
                      {"cv_metrics", ToJson(c.cv_metrics)}});
    }
    doc["without_selection"] = std::move(rows);
  }
  if (r.balanced_pick) {
    const auto& s = r.per_classifier[*r.balanced_pick];
    doc["balanced_pick"] = {
        {"classifier", ToString(r.Candidate(s).config.classifier.kind)},
        {"fir", s.explainability.fir},
        {"features", r.Candidate(s).selected_features}};
  }
  doc["explanations"] = ToJson(r.explanations);
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"stage", f.stage}, {"message", f.message}});
  doc["failures"] = std::move(failures);
  doc["ok"] = r.ok();
  return detail::CanonicalJson(doc);
}

std::vector<ManifestEntry> EmitExplanations(const ExplanationSet& explanations,
                                            const std::filesystem::path& dir) {
  OutputDir out(dir);
  WriteExplanations(explanations, out);
  out.Write("explanations.json", detail::CanonicalJson(ToJson(explanations)));
  return out.Finish();
}

std::vector<ManifestEntry> EmitReport(const RunReport& r, const std::filesystem::path& dir) {
  OutputDir out(dir);
  out.Write("report.json", ReportJson(r));

  if (r.grid) {
    std::string ledger = "index,classifier,label,valid,n_selected,selected_features," +
                         std::string(kMetricHeader);
    for (std::size_t f = 0; f < r.config.folds; ++f) {
      ledger += ",fold" + std::to_string(f + 1) + "_balanced_accuracy";
    }
    ledger += "\n";
    json all = json::array();
    for (const auto& c : r.grid->candidates) {
      ledger += std::to_string(c.index) + "," + std::string(ToString(c.config.classifier.kind)) +
                "," + CsvField(Describe(c.config)) + "," + (c.valid ? "true" : "false") + "," +
                std::to_string(c.selected_features.size()) + "," +
                CsvField(Join(c.selected_features)) + "," + MetricCells(c.cv_metrics);
      for (std::size_t f = 0; f < r.config.folds; ++f) {
        ledger += "," + (f < c.fold_metrics.size()
                             ? FormatFixed(c.fold_metrics[f].balanced_accuracy)
                             : std::string());
      }
      ledger += "\n";
      all.push_back(ToJson(c));
    }
    out.Write("tables/candidates.csv", ledger);
    out.Write("candidates.json", detail::CanonicalJson(all));
  }

  if (!r.per_classifier.empty()) {
    std::string cv = "classifier," + std::string(kMetricHeader) + "\n";
    std::string test = cv;
    std::string features = "classifier,group,n_features,features,method\n";
    std::string expl =
        "classifier,selected,total,interpretability,baseline_balanced_accuracy,"
        "model_balanced_accuracy,fidelity,fir\n";
    for (const auto& s : r.per_classifier) {
      const CandidateResult& c = r.Candidate(s);
      const std::string name = CsvField(std::string(DisplayName(c.config.classifier.kind)));
      cv += name + "," + MetricCells(c.cv_metrics) + "\n";
      if (s.test_metrics) test += name + "," + MetricCells(*s.test_metrics) + "\n";
      expl += name + "," + std::to_string(c.selected_features.size()) + "," +
              std::to_string(c.n_inputs) + "," + FormatFixed(s.explainability.interpretability) +
              "," + FormatFixed(s.baseline_bacc) + "," +
              FormatFixed(c.cv_metrics.balanced_accuracy) + "," +
              FormatFixed(s.explainability.fidelity) + "," + FormatFixed(s.explainability.fir) +
              "\n";
    }
    for (const auto& s : r.per_classifier) {
      const CandidateResult& c = r.Candidate(s);
      const std::string name = CsvField(std::string(DisplayName(c.config.classifier.kind)));
      if (!c.config.selection.enabled) {
        features += name + ",all," + std::to_string(c.selected_features.size()) + "," +
                    CsvField(Join(c.selected_features)) + ",none\n";
        continue;
      }
      const std::size_t nk = c.config.selection.num_k;
      const std::vector<std::string> num(c.selected_features.begin(),
                                         c.selected_features.begin() +
                                             static_cast<std::ptrdiff_t>(nk));
      const std::vector<std::string> nom(
          c.selected_features.begin() + static_cast<std::ptrdiff_t>(nk),
          c.selected_features.end());
      features += name + ",numerical," + std::to_string(num.size()) + "," +
                  CsvField(Join(num)) + "," +
                  std::string(ToString(c.config.selection.num_method)) + "\n";
      features += name + ",nominal," + std::to_string(nom.size()) + "," +
                  CsvField(Join(nom)) + "," +
                  std::string(ToString(c.config.selection.nom_method)) + "\n";
    }
    out.Write("tables/cv_metrics.csv", cv);
    out.Write("tables/test_metrics.csv", test);
    out.Write("tables/selected_features.csv", features);
    out.Write("tables/explainability.csv", expl);
  }
  if (r.grid_without_selection) {
    std::string cv = "classifier," + std::string(kMetricHeader) + "\n";
    for (std::size_t idx : r.grid_without_selection->per_classifier_best) {
      const auto& c = r.grid_without_selection->candidates[idx];
      cv += CsvField(std::string(DisplayName(c.config.classifier.kind))) + "," +
            MetricCells(c.cv_metrics) + "\n";
    }
    out.Write("tables/cv_metrics_all_features.csv", cv);
  }
  WriteExplanations(r.explanations, out);
  if (r.picked_model) out.Write("model.json", PipelineToJson(*r.picked_model) + "\n");
  return out.Finish();
}

}  // namespace hfxai
