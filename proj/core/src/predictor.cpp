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

#include "hfxai/predictor.hpp"

namespace hfxai {

std::vector<double> Predictor::PredictPositive(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = PredictPositive(x.row(r));
  return out;
}

EnsemblePredictor::EnsemblePredictor(const FittedEnsemble& model)
    : model_(model), names_(model.feature_names()) {}

double EnsemblePredictor::PredictPositive(std::span<const double> x) const {
  return model_.PredictPositive(x);
}

}  // namespace hfxai
