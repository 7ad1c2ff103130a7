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

#ifndef HFXAI_PREDICTOR_HPP_
#define HFXAI_PREDICTOR_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hfxai/ensemble.hpp"
#include "hfxai/matrix.hpp"

namespace hfxai {

// Black-box view of a binary classifier: P(class 1) for a row of named
// inputs. Model-agnostic explainers work against this interface.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual const std::vector<std::string>& feature_names() const = 0;
  virtual double PredictPositive(std::span<const double> x) const = 0;

  std::size_t n_features() const { return feature_names().size(); }
  std::vector<double> PredictPositive(const Matrix& x) const;
};

class EnsemblePredictor final : public Predictor {
 public:
  explicit EnsemblePredictor(const FittedEnsemble& model);

  const std::vector<std::string>& feature_names() const override { return names_; }
  double PredictPositive(std::span<const double> x) const override;
  using Predictor::PredictPositive;

 private:
  const FittedEnsemble& model_;
  std::vector<std::string> names_;
};

// Wraps an arbitrary function; handy for analytic test models.
class FunctionPredictor final : public Predictor {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  FunctionPredictor(std::vector<std::string> names, Fn fn)
      : names_(std::move(names)), fn_(std::move(fn)) {}

  const std::vector<std::string>& feature_names() const override { return names_; }
  double PredictPositive(std::span<const double> x) const override { return fn_(x); }
  using Predictor::PredictPositive;

 private:
  std::vector<std::string> names_;
  Fn fn_;
};

}  // namespace hfxai

#endif  // HFXAI_PREDICTOR_HPP_
