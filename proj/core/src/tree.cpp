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

#include "hfxai/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "hfxai/errors.hpp"
#include "hfxai/random.hpp"

namespace hfxai {
namespace {

constexpr double kMinGain = 1e-12;

// Weighted Gini criterion. Score(s) = W * gini(s).
struct GiniCriterion {
  struct Stats {
    double w0 = 0.0;
    double w1 = 0.0;
    std::size_t n = 0;
  };

  std::span<const int> y;
  std::span<const double> w;

  void Add(Stats& s, std::size_t r) const {
    (y[r] ? s.w1 : s.w0) += w[r];
    ++s.n;
  }
  static Stats Minus(const Stats& a, const Stats& b) {
    return {a.w0 - b.w0, a.w1 - b.w1, a.n - b.n};
  }
  static double Score(const Stats& s) {
    const double total = s.w0 + s.w1;
    if (total <= 0.0) return 0.0;
    return total - (s.w0 * s.w0 + s.w1 * s.w1) / total;
  }
  double Gain(const Stats& parent, const Stats& left, const Stats& right) const {
    return Score(parent) - Score(left) - Score(right);
  }
  static bool IsPure(const Stats& s) { return s.w0 <= 0.0 || s.w1 <= 0.0; }
  static double Weight(const Stats& s) { return s.w0 + s.w1; }
  void Fill(TreeNode& node, const Stats& s) const {
    node.weight = s.w0 + s.w1;
    node.samples = s.n;
    node.class_counts = {s.w0, s.w1};
    node.value = node.weight > 0.0 ? s.w1 / node.weight : 0.0;
  }
};

struct NewtonStatsCriterion {
  struct Stats {
    double r = 0.0;
    double rr = 0.0;
    double h = 0.0;
    std::size_t n = 0;
  };

  std::span<const double> residuals;
  std::span<const double> hessians;
  BoostingCriterion kind;
  double lambda;
  double gamma;

  void Add(Stats& s, std::size_t i) const {
    s.r += residuals[i];
    s.rr += residuals[i] * residuals[i];
    s.h += hessians[i];
    ++s.n;
  }
  static Stats Minus(const Stats& a, const Stats& b) {
    return {a.r - b.r, a.rr - b.rr, a.h - b.h, a.n - b.n};
  }
  double Gain(const Stats& parent, const Stats& left, const Stats& right) const {
    if (kind == BoostingCriterion::kSquaredError) {
      auto sse = [](const Stats& s) {
        return s.n ? s.rr - s.r * s.r / static_cast<double>(s.n) : 0.0;
      };
      return sse(parent) - sse(left) - sse(right);
    }
    auto term = [&](const Stats& s) {
      const double denom = s.h + lambda;
      return denom > 0.0 ? s.r * s.r / denom : 0.0;
    };
    return 0.5 * (term(left) + term(right) - term(parent)) - gamma;
  }
  static bool IsPure(const Stats&) { return false; }
  static double Weight(const Stats& s) { return static_cast<double>(s.n); }
  void Fill(TreeNode& node, const Stats& s) const {
    node.weight = static_cast<double>(s.n);
    node.samples = s.n;
    const double denom = s.h + lambda;
    node.value = std::abs(denom) > 1e-150 ? s.r / denom : 0.0;
  }
};

template <typename Criterion>
class Builder {
 public:
  using Stats = typename Criterion::Stats;

  Builder(const Matrix& x, const Criterion& criterion, const TreeParams& params)
      : x_(x), criterion_(criterion), params_(params), rng_(params.seed) {}

  std::vector<TreeNode> Run(std::vector<std::size_t> rows) {
    const std::size_t m = params_.random_threshold ? 0 : x_.cols();
    std::vector<std::vector<std::size_t>> sorted(m, rows);
    for (std::size_t f = 0; f < m; ++f) {
      std::sort(sorted[f].begin(), sorted[f].end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, f);
        const double vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
    }
    goes_left_.assign(x_.rows(), 0);
    Build(rows, sorted, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    bool found = false;
    double gain = 0.0;
    std::size_t feature = 0;
    double threshold = 0.0;
  };

  static bool Better(double gain, std::size_t f, double t, const Split& best) {
    if (!best.found) return true;
    if (gain != best.gain) return gain > best.gain;
    if (f != best.feature) return f < best.feature;
    return t < best.threshold;
  }

  // `rows` is in ascending index order; sorted[f] holds the same rows ordered
  // by (x[:, f], row). Random-threshold trees keep `sorted` empty.
  int Build(std::vector<std::size_t>& rows, std::vector<std::vector<std::size_t>>& sorted,
            int depth) {
    Stats total;
    for (std::size_t r : rows) criterion_.Add(total, r);
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    criterion_.Fill(nodes_.back(), total);

    const bool depth_limited = params_.max_depth >= 0 && depth >= params_.max_depth;
    if (depth_limited || rows.size() < params_.min_samples_split ||
        rows.size() < 2 * params_.min_samples_leaf || Criterion::IsPure(total) ||
        Criterion::Weight(total) <= 0.0) {
      return id;
    }
    const Split split = FindSplit(rows, sorted, total);
    if (!split.found) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      const bool l = x_(r, split.feature) <= split.threshold;
      goes_left_[r] = l;
      (l ? left : right).push_back(r);
    }
    std::vector<std::vector<std::size_t>> sorted_left(sorted.size());
    std::vector<std::vector<std::size_t>> sorted_right(sorted.size());
    for (std::size_t f = 0; f < sorted.size(); ++f) {
      sorted_left[f].reserve(left.size());
      sorted_right[f].reserve(right.size());
      for (std::size_t r : sorted[f]) (goes_left_[r] ? sorted_left : sorted_right)[f].push_back(r);
    }
    rows = {};
    sorted = {};
    nodes_[id].feature = static_cast<int>(split.feature);
    nodes_[id].threshold = split.threshold;
    nodes_[id].gain = split.gain;
    const int l = Build(left, sorted_left, depth + 1);
    const int r = Build(right, sorted_right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  Split FindSplit(const std::vector<std::size_t>& rows,
                  const std::vector<std::vector<std::size_t>>& sorted, const Stats& total) {
    const std::size_t m = x_.cols();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    const bool subsample = params_.max_features > 0 && params_.max_features < m;
    if (subsample) rng_.Shuffle(std::span<std::size_t>(order));

    Split best;
    std::size_t visited = 0;
    for (std::size_t f : order) {
      if (subsample && visited >= params_.max_features && best.found) break;
      double lo;
      double hi;
      if (sorted.empty()) {
        lo = hi = x_(rows.front(), f);
        for (std::size_t r : rows) {
          lo = std::min(lo, x_(r, f));
          hi = std::max(hi, x_(r, f));
        }
      } else {
        lo = x_(sorted[f].front(), f);
        hi = x_(sorted[f].back(), f);
      }
      if (lo == hi) continue;
      ++visited;
      if (params_.random_threshold) {
        RandomCut(rows, total, f, lo, hi, best);
      } else {
        ScanFeature(sorted[f], total, f, best);
      }
    }
    return best;
  }

  void ScanFeature(const std::vector<std::size_t>& sorted, const Stats& total,
                   std::size_t f, Split& best) {
    Stats left;
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      criterion_.Add(left, sorted[i]);
      const double v = x_(sorted[i], f);
      const double next = x_(sorted[i + 1], f);
      if (v == next) continue;
      if (i + 1 < params_.min_samples_leaf || n - i - 1 < params_.min_samples_leaf) {
        continue;
      }
      const Stats right = Criterion::Minus(total, left);
      const double gain = criterion_.Gain(total, left, right);
      if (!(gain > kMinGain)) continue;
      double threshold = v + (next - v) / 2.0;
      if (!(threshold < next)) threshold = v;
      if (Better(gain, f, threshold, best)) best = {true, gain, f, threshold};
    }
  }

  void RandomCut(const std::vector<std::size_t>& rows, const Stats& total,
                 std::size_t f, double lo, double hi, Split& best) {
    double threshold = lo + rng_.Uniform() * (hi - lo);
    if (!(threshold < hi)) threshold = lo;
    Stats left;
    for (std::size_t r : rows) {
      if (x_(r, f) <= threshold) criterion_.Add(left, r);
    }
    const std::size_t n_left = left.n;
    if (n_left < params_.min_samples_leaf ||
        rows.size() - n_left < params_.min_samples_leaf) {
      return;
    }
    const Stats right = Criterion::Minus(total, left);
    const double gain = criterion_.Gain(total, left, right);
    if (!(gain > kMinGain)) return;
    if (Better(gain, f, threshold, best)) best = {true, gain, f, threshold};
  }

  const Matrix& x_;
  const Criterion& criterion_;
  TreeParams params_;
  Rng rng_;
  std::vector<TreeNode> nodes_;
  std::vector<char> goes_left_;
};

void CheckParams(const TreeParams& params) {
  if (params.min_samples_leaf < 1) throw ArgumentError("min_samples_leaf must be >= 1");
  if (params.min_samples_split < 2) throw ArgumentError("min_samples_split must be >= 2");
}

}  // namespace

double Gini(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw ArgumentError("gini: negative count");
    total += c;
  }
  if (total <= 0.0) throw ArgumentError("gini: all counts are zero");
  double sq = 0.0;
  for (double c : counts) sq += (c / total) * (c / total);
  return 1.0 - sq;
}

FittedTree::FittedTree(TreeTask task, std::size_t n_features, TreeParams params,
                       std::vector<TreeNode> nodes)
    : task_(task), n_features_(n_features), params_(params), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ArgumentError("tree has no nodes");
  const int n = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    if (node.feature >= static_cast<int>(n_features_) || node.left <= 0 ||
        node.right <= 0 || node.left >= n || node.right >= n) {
      throw ArgumentError("tree node references are out of range");
    }
  }
}

std::size_t FittedTree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const auto& node = nodes_[id];
    if (!node.is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(node.left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(node.right), d + 1);
    }
  }
  return best;
}

std::size_t FittedTree::n_leaves() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t FittedTree::Leaf(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw ArgumentError("row has " + std::to_string(x.size()) + " values, tree expects " +
                        std::to_string(n_features_));
  }
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const auto& node = nodes_[id];
    id = static_cast<std::size_t>(
        x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                    : node.right);
  }
  return id;
}

std::vector<std::size_t> FittedTree::DecisionPath(std::span<const double> x) const {
  const std::size_t leaf = Leaf(x);
  std::vector<std::size_t> path{0};
  std::size_t id = 0;
  while (id != leaf) {
    const auto& node = nodes_[id];
    id = static_cast<std::size_t>(
        x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                    : node.right);
    path.push_back(id);
  }
  return path;
}

std::array<double, 2> FittedTree::PredictProba(std::span<const double> x) const {
  const double p = nodes_[Leaf(x)].value;
  return {1.0 - p, p};
}

FittedTree FitTree(const Matrix& x, std::span<const int> y,
                   std::span<const double> weights, const TreeParams& params) {
  CheckParams(params);
  if (x.rows() == 0) throw ArgumentError("cannot fit a tree on zero rows");
  if (y.size() != x.rows() || weights.size() != x.rows()) {
    throw ArgumentError("X, y and weights differ in row count");
  }
  double total = 0.0;
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (weights[r] < 0.0) throw ArgumentError("negative sample weight");
    if (y[r] != 0 && y[r] != 1) throw ArgumentError("labels must be 0 or 1");
    if (weights[r] > 0.0) rows.push_back(r);
    total += weights[r];
  }
  if (total <= 0.0) throw ArgumentError("total sample weight is zero");
  GiniCriterion criterion{y, weights};
  Builder<GiniCriterion> builder(x, criterion, params);
  return FittedTree(TreeTask::kClassification, x.cols(), params,
                    builder.Run(std::move(rows)));
}

FittedTree FitBoostingTree(const Matrix& x, std::span<const double> residuals,
                           std::span<const double> hessians,
                           const BoostingTreeParams& params) {
  CheckParams(params.tree);
  if (x.rows() == 0) throw ArgumentError("cannot fit a tree on zero rows");
  if (residuals.size() != x.rows() || hessians.size() != x.rows()) {
    throw ArgumentError("X, residuals and hessians differ in row count");
  }
  if (params.lambda < 0.0) throw ArgumentError("lambda must be nonnegative");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  NewtonStatsCriterion criterion{residuals, hessians, params.criterion, params.lambda,
                               params.gamma};
  Builder<NewtonStatsCriterion> builder(x, criterion, params.tree);
  return FittedTree(TreeTask::kBoosting, x.cols(), params.tree,
                    builder.Run(std::move(rows)));
}

}  // namespace hfxai
