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

#ifndef HFXAI_SERIALIZE_HPP_
#define HFXAI_SERIALIZE_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "hfxai/ensemble.hpp"
#include "hfxai/pipeline.hpp"
#include "hfxai/tree.hpp"

namespace hfxai {

// JSON forms. Floats keep full round-trip precision, so a model read back
// predicts bit-for-bit like the original. Malformed documents raise
// SchemaError.
//
// Tree:     {"task", "n_features", "params", "nodes": [{"feature",
//            "threshold", "left", "right", "weight", "samples",
//            "class_counts", "value", "gain"}, ...]}  (preorder, root first;
//            leaves have feature -1)
// Ensemble: {"format": "hfxai.ensemble", "kind", "params", "feature_names",
//            "trees", "weights", "base_score", "members"}
// Pipeline: {"format": "hfxai.pipeline", "preprocess", "selection", "model"}
std::string TreeToJson(const FittedTree& tree);
FittedTree TreeFromJson(std::string_view json);

std::string EnsembleToJson(const FittedEnsemble& model);
FittedEnsemble EnsembleFromJson(std::string_view json);

std::string PipelineToJson(const FittedPipeline& pipeline);
FittedPipeline PipelineFromJson(std::string_view json);

FittedPipeline LoadPipeline(const std::filesystem::path& path);
void SavePipeline(const FittedPipeline& pipeline, const std::filesystem::path& path);

}  // namespace hfxai

#endif  // HFXAI_SERIALIZE_HPP_
