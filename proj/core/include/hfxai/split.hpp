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

#ifndef HFXAI_SPLIT_HPP_
#define HFXAI_SPLIT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hfxai {

// Disjoint train/test partition of row indices, each sorted ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified holdout split. The test set has ceil(n * test_ratio) rows; each
// class first receives floor(n_c * test_ratio) seats and the remaining seats
// go to the classes with the largest fractional parts (ties: lower class id).
// Rows are drawn from a seed-deterministic shuffle within each class.
SplitIndices StratifiedSplit(std::span<const int> labels, double test_ratio,
                             std::uint64_t seed);

// Stratified k-fold assignment over a list of training rows. `labels` is
// indexed by row id (not by position in `train`).
class FoldPlan {
 public:
  FoldPlan(std::size_t k, std::vector<std::size_t> rows,
           std::vector<std::size_t> assignments);

  std::size_t k() const { return k_; }
  const std::vector<std::size_t>& rows() const { return rows_; }
  // Fold id of rows()[i].
  const std::vector<std::size_t>& assignments() const { return assignments_; }

  std::vector<std::size_t> TrainRows(std::size_t fold) const;
  std::vector<std::size_t> HoldoutRows(std::size_t fold) const;
  std::size_t FoldSize(std::size_t fold) const;

 private:
  std::size_t k_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> assignments_;
};

// Rows of each class are shuffled, classes are concatenated in ascending id
// order and dealt round-robin into k folds, so fold sizes and per-class
// counts per fold both differ by at most one. Warns when a class has fewer
// than k members.
FoldPlan MakeFolds(std::span<const std::size_t> train, std::span<const int> labels,
                   std::size_t k, std::uint64_t seed);

}  // namespace hfxai

#endif  // HFXAI_SPLIT_HPP_
