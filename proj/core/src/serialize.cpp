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

#include "hfxai/serialize.hpp"

#include <fstream>
#include <sstream>

#include "hfxai/errors.hpp"
#include "json.hpp"

namespace hfxai {
namespace {

using nlohmann::json;

constexpr const char* kEnsembleFormat = "hfxai.ensemble";
constexpr const char* kPipelineFormat = "hfxai.pipeline";

json Parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model JSON is malformed: ") + e.what());
  }
}

template <typename T>
T Get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("model JSON is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model JSON field '") + key + "': " + e.what());
  }
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("model JSON is missing '") + key + "'");
  }
  return j.at(key);
}

json ToJson(const TreeParams& p) {
  return {{"max_depth", p.max_depth},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf},
          {"max_features", p.max_features},
          {"random_threshold", p.random_threshold},
          {"seed", p.seed}};
}

TreeParams TreeParamsFrom(const json& j) {
  TreeParams p;
  p.max_depth = Get<int>(j, "max_depth");
  p.min_samples_split = Get<std::size_t>(j, "min_samples_split");
  p.min_samples_leaf = Get<std::size_t>(j, "min_samples_leaf");
  p.max_features = Get<std::size_t>(j, "max_features");
  p.random_threshold = Get<bool>(j, "random_threshold");
  p.seed = Get<std::uint64_t>(j, "seed");
  return p;
}

json ToJson(const FittedTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"weight", n.weight},
                     {"samples", n.samples},
                     {"class_counts", {n.class_counts[0], n.class_counts[1]}},
                     {"value", n.value},
                     {"gain", n.gain}});
  }
  return {{"task", tree.task() == TreeTask::kClassification ? "classification" : "boosting"},
          {"n_features", tree.n_features()},
          {"params", ToJson(tree.params())},
          {"nodes", std::move(nodes)}};
}

FittedTree TreeFrom(const json& j) {
  const auto task_name = Get<std::string>(j, "task");
  TreeTask task;
  if (task_name == "classification") {
    task = TreeTask::kClassification;
  } else if (task_name == "boosting") {
    task = TreeTask::kBoosting;
  } else {
    throw SchemaError("unknown tree task '" + task_name + "'");
  }
  std::vector<TreeNode> nodes;
  for (const auto& jn : Field(j, "nodes")) {
    TreeNode n;
    n.feature = Get<int>(jn, "feature");
    n.threshold = Get<double>(jn, "threshold");
    n.left = Get<int>(jn, "left");
    n.right = Get<int>(jn, "right");
    n.weight = Get<double>(jn, "weight");
    n.samples = Get<std::size_t>(jn, "samples");
    const auto counts = Get<std::vector<double>>(jn, "class_counts");
    if (counts.size() != 2) throw SchemaError("class_counts must hold two values");
    n.class_counts = {counts[0], counts[1]};
    n.value = Get<double>(jn, "value");
    n.gain = Get<double>(jn, "gain");
    nodes.push_back(n);
  }
  try {
    return FittedTree(task, Get<std::size_t>(j, "n_features"), TreeParamsFrom(Field(j, "params")),
                      std::move(nodes));
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("invalid tree: ") + e.what());
  }
}

json ToJson(const EnsembleConfig& c) {
  json members = json::array();
  for (const auto& m : c.members) members.push_back(ToJson(m));
  json out = {{"kind", ToString(c.kind)},
              {"n_estimators", c.n_estimators},
              {"learning_rate", c.learning_rate},
              {"max_features", c.max_features},
              {"min_samples_leaf", c.min_samples_leaf},
              {"bootstrap", c.bootstrap},
              {"lambda", c.lambda},
              {"gamma", c.gamma},
              {"members", std::move(members)},
              {"seed", c.seed}};
  out["max_depth"] = c.max_depth ? json(*c.max_depth) : json(nullptr);
  return out;
}

EnsembleConfig ConfigFrom(const json& j) {
  EnsembleConfig c;
  try {
    c.kind = ParseClassifierKind(Get<std::string>(j, "kind"));
  } catch (const ArgumentError& e) {
    throw SchemaError(e.what());
  }
  c.n_estimators = Get<std::size_t>(j, "n_estimators");
  c.learning_rate = Get<double>(j, "learning_rate");
  c.max_features = Get<std::size_t>(j, "max_features");
  c.min_samples_leaf = Get<std::size_t>(j, "min_samples_leaf");
  c.bootstrap = Get<bool>(j, "bootstrap");
  c.lambda = Get<double>(j, "lambda");
  c.gamma = Get<double>(j, "gamma");
  c.seed = Get<std::uint64_t>(j, "seed");
  const json& depth = Field(j, "max_depth");
  if (!depth.is_null()) c.max_depth = depth.get<int>();
  for (const auto& m : Field(j, "members")) c.members.push_back(ConfigFrom(m));
  return c;
}

json ToJson(const FittedEnsemble& model) {
  json trees = json::array();
  for (const auto& t : model.trees()) trees.push_back(ToJson(t));
  json members = json::array();
  for (const auto& m : model.members()) members.push_back(ToJson(m));
  return {{"format", kEnsembleFormat},
          {"kind", ToString(model.kind())},
          {"params", ToJson(model.config())},
          {"n_features", model.n_features()},
          {"feature_names", model.feature_names()},
          {"trees", std::move(trees)},
          {"weights", model.tree_weights()},
          {"base_score", model.base_score()},
          {"members", std::move(members)}};
}

FittedEnsemble EnsembleFrom(const json& j) {
  if (Get<std::string>(j, "format") != kEnsembleFormat) {
    throw SchemaError("not an hfxai ensemble document");
  }
  EnsembleConfig config = ConfigFrom(Field(j, "params"));
  if (ToString(config.kind) != Get<std::string>(j, "kind")) {
    throw SchemaError("ensemble kind disagrees with its params");
  }
  std::vector<FittedTree> trees;
  for (const auto& t : Field(j, "trees")) trees.push_back(TreeFrom(t));
  std::vector<FittedEnsemble> members;
  for (const auto& m : Field(j, "members")) members.push_back(EnsembleFrom(m));
  try {
    return FittedEnsemble(std::move(config), Get<std::size_t>(j, "n_features"),
                          Get<std::vector<std::string>>(j, "feature_names"), std::move(trees),
                          Get<std::vector<double>>(j, "weights"), Get<double>(j, "base_score"),
                          std::move(members));
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("invalid ensemble: ") + e.what());
  }
}

json ToJson(const SelectionResult& r) {
  return {{"method", ToString(r.method)},
          {"k", r.k},
          {"selected", r.selected},
          {"masked", r.masked}};
}

SelectionResult SelectionResultFrom(const json& j) {
  SelectionResult r;
  try {
    r.method = ParseSelectionMethod(Get<std::string>(j, "method"));
  } catch (const ArgumentError& e) {
    throw SchemaError(e.what());
  }
  r.k = Get<std::size_t>(j, "k");
  r.selected = Get<std::vector<std::string>>(j, "selected");
  r.masked = Get<std::vector<std::string>>(j, "masked");
  return r;
}

json ToJson(const FittedPipeline& p) {
  json columns = json::array();
  for (const auto& c : p.plan().columns()) {
    columns.push_back({{"name", c.name},
                       {"kind", ToString(c.kind)},
                       {"source_col", c.source_col},
                       {"fill", c.fill},
                       {"center", c.center},
                       {"scale", c.scale},
                       {"seen_categories", c.seen_categories}});
  }
  const auto& cfg = p.plan().config();
  const auto& sel = p.selection();
  return {{"format", kPipelineFormat},
          {"preprocess",
           {{"impute_numerical", ToString(cfg.impute_numerical)},
            {"normalize", ToString(cfg.normalize)},
            {"columns", std::move(columns)}}},
          {"selection",
           {{"n_inputs", sel.n_inputs},
            {"columns", sel.columns},
            {"names", sel.names},
            {"numerical", ToJson(sel.numerical)},
            {"nominal", ToJson(sel.nominal)}}},
          {"model", ToJson(p.model())}};
}

FittedPipeline PipelineFrom(const json& j) {
  if (Get<std::string>(j, "format") != kPipelineFormat) {
    throw SchemaError("not an hfxai pipeline document");
  }
  const json& pre = Field(j, "preprocess");
  PreprocessConfig cfg;
  std::vector<ColumnTransform> columns;
  try {
    cfg.impute_numerical = ParseNumericImpute(Get<std::string>(pre, "impute_numerical"));
    cfg.normalize = ParseNormalization(Get<std::string>(pre, "normalize"));
    for (const auto& jc : Field(pre, "columns")) {
      ColumnTransform c;
      c.name = Get<std::string>(jc, "name");
      c.kind = ParseFeatureKind(Get<std::string>(jc, "kind"));
      c.source_col = Get<std::size_t>(jc, "source_col");
      c.fill = Get<double>(jc, "fill");
      c.center = Get<double>(jc, "center");
      c.scale = Get<double>(jc, "scale");
      c.seen_categories = Get<std::vector<double>>(jc, "seen_categories");
      columns.push_back(std::move(c));
    }
  } catch (const ArgumentError& e) {
    throw SchemaError(e.what());
  }
  const json& js = Field(j, "selection");
  FeatureSelection sel;
  sel.n_inputs = Get<std::size_t>(js, "n_inputs");
  sel.columns = Get<std::vector<std::size_t>>(js, "columns");
  sel.names = Get<std::vector<std::string>>(js, "names");
  sel.numerical = SelectionResultFrom(Field(js, "numerical"));
  sel.nominal = SelectionResultFrom(Field(js, "nominal"));
  if (sel.columns.size() != sel.names.size()) {
    throw SchemaError("selection columns and names differ in length");
  }
  try {
    return FittedPipeline(PreprocessPlan(cfg, std::move(columns)), std::move(sel),
                          EnsembleFrom(Field(j, "model")));
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("invalid pipeline: ") + e.what());
  }
}

}  // namespace

std::string TreeToJson(const FittedTree& tree) { return ToJson(tree).dump(); }
FittedTree TreeFromJson(std::string_view text) { return TreeFrom(Parse(text)); }

std::string EnsembleToJson(const FittedEnsemble& model) { return ToJson(model).dump(); }
FittedEnsemble EnsembleFromJson(std::string_view text) { return EnsembleFrom(Parse(text)); }

std::string PipelineToJson(const FittedPipeline& pipeline) {
  return ToJson(pipeline).dump();
}
FittedPipeline PipelineFromJson(std::string_view text) { return PipelineFrom(Parse(text)); }

FittedPipeline LoadPipeline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return PipelineFromJson(buf.str());
}

void SavePipeline(const FittedPipeline& pipeline, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << PipelineToJson(pipeline) << "\n";
  if (!out) throw IoError("failed writing model file " + path.string());
}

}  // namespace hfxai
