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

#include "hfxai/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"
#include "hfxai/random.hpp"

namespace hfxai {
namespace {

std::map<int, std::vector<std::size_t>> GroupByClass(
    std::span<const std::size_t> rows, std::span<const int> labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t r : rows) {
    if (r >= labels.size()) throw ArgumentError("row index out of range");
    groups[labels[r]].push_back(r);
  }
  return groups;
}

}  // namespace

SplitIndices StratifiedSplit(std::span<const int> labels, double test_ratio,
                             std::uint64_t seed) {
  if (!(test_ratio >= 0.0 && test_ratio < 1.0)) {
    throw ArgumentError("test_ratio must lie in [0, 1)");
  }
  if (labels.empty()) throw ArgumentError("cannot split an empty dataset");
  std::vector<std::size_t> all(labels.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto groups = GroupByClass(all, labels);

  const double n = static_cast<double>(labels.size());
  // The epsilon absorbs products such as 10 * 0.3 = 3.0000000000000004.
  const auto total_test = static_cast<std::size_t>(std::ceil(n * test_ratio - 1e-9));

  struct Seat {
    int label;
    std::size_t count;
    double frac;
  };
  std::vector<Seat> seats;
  std::size_t assigned = 0;
  for (const auto& [label, members] : groups) {
    const double exact = static_cast<double>(members.size()) * test_ratio;
    const auto base = static_cast<std::size_t>(std::floor(exact + 1e-9));
    seats.push_back({label, base, exact - static_cast<double>(base)});
    assigned += base;
  }
  std::vector<std::size_t> order(seats.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seats[a].frac > seats[b].frac;
  });
  for (std::size_t i = 0; assigned < total_test && i < order.size(); ++i) {
    auto& s = seats[order[i]];
    if (s.count < groups[s.label].size()) {
      ++s.count;
      ++assigned;
    }
  }

  SplitIndices out;
  for (const auto& s : seats) {
    auto members = groups[s.label];
    Rng rng(DeriveSeed(seed, {0x5EED5, static_cast<std::uint64_t>(s.label)}));
    rng.Shuffle(std::span<std::size_t>(members));
    out.test.insert(out.test.end(), members.begin(), members.begin() + s.count);
    out.train.insert(out.train.end(), members.begin() + s.count, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

FoldPlan::FoldPlan(std::size_t k, std::vector<std::size_t> rows,
                   std::vector<std::size_t> assignments)
    : k_(k), rows_(std::move(rows)), assignments_(std::move(assignments)) {
  if (rows_.size() != assignments_.size()) {
    throw ArgumentError("fold plan: rows and assignments differ in length");
  }
  for (std::size_t a : assignments_) {
    if (a >= k_) throw ArgumentError("fold plan: fold id out of range");
  }
}

std::vector<std::size_t> FoldPlan::TrainRows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (assignments_[i] != fold) out.push_back(rows_[i]);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::HoldoutRows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (assignments_[i] == fold) out.push_back(rows_[i]);
  }
  return out;
}

std::size_t FoldPlan::FoldSize(std::size_t fold) const {
  return static_cast<std::size_t>(
      std::count(assignments_.begin(), assignments_.end(), fold));
}

FoldPlan MakeFolds(std::span<const std::size_t> train, std::span<const int> labels,
                   std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("k must be at least 2");
  if (k > train.size()) {
    throw ArgumentError("k (" + std::to_string(k) + ") exceeds the number of rows (" +
                        std::to_string(train.size()) + ")");
  }
  auto groups = GroupByClass(train, labels);
  std::map<std::size_t, std::size_t> fold_of;
  std::size_t counter = 0;
  for (auto& [label, members] : groups) {
    if (members.size() < k) {
      Warn("class " + std::to_string(label) + " has " +
           std::to_string(members.size()) + " members, fewer than k=" +
           std::to_string(k) + " folds");
    }
    Rng rng(DeriveSeed(seed, {0xF01D5, static_cast<std::uint64_t>(label)}));
    rng.Shuffle(std::span<std::size_t>(members));
    for (std::size_t r : members) fold_of[r] = counter++ % k;
  }
  std::vector<std::size_t> rows(train.begin(), train.end());
  std::vector<std::size_t> assignments(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) assignments[i] = fold_of.at(rows[i]);
  return FoldPlan(k, std::move(rows), std::move(assignments));
}

}  // namespace hfxai
