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

#include "hfxai/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "hfxai/errors.hpp"
#include "hfxai/logging.hpp"

namespace hfxai {
namespace {

void CheckShape(const Matrix& x, std::span<const int> y) {
  if (x.rows() != y.size()) throw ArgumentError("X and y differ in row count");
  if (x.rows() == 0) throw ArgumentError("no rows to score");
}

bool IsConstant(const Matrix& x, std::size_t c) {
  for (std::size_t r = 1; r < x.rows(); ++r) {
    if (x(r, c) != x(0, c)) return false;
  }
  return true;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::string_view ToString(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kAnova:
      return "anova";
    case SelectionMethod::kChi2:
      return "chi2";
    case SelectionMethod::kMutualInfo:
      return "mutual_info";
    case SelectionMethod::kRfe:
      return "rfe";
  }
  return "unknown";
}

SelectionMethod ParseSelectionMethod(std::string_view text) {
  if (text == "anova") return SelectionMethod::kAnova;
  if (text == "chi2") return SelectionMethod::kChi2;
  if (text == "mutual_info") return SelectionMethod::kMutualInfo;
  if (text == "rfe") return SelectionMethod::kRfe;
  throw ArgumentError("unknown selection method '" + std::string(text) + "'");
}

std::vector<double> AnovaF(const Matrix& x, std::span<const int> y) {
  CheckShape(x, y);
  std::map<int, std::size_t> class_index;
  for (int label : y) class_index.emplace(label, 0);
  std::size_t idx = 0;
  for (auto& [label, i] : class_index) i = idx++;
  const std::size_t k = class_index.size();
  const double n = static_cast<double>(x.rows());

  std::vector<double> out(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    std::vector<double> sum(k, 0.0);
    std::vector<double> count(k, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const std::size_t g = class_index[y[r]];
      sum[g] += x(r, c);
      count[g] += 1.0;
      total += x(r, c);
    }
    const double grand = total / n;
    double between = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
      const double mean = sum[g] / count[g];
      between += count[g] * (mean - grand) * (mean - grand);
    }
    double within = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const std::size_t g = class_index[y[r]];
      const double d = x(r, c) - sum[g] / count[g];
      within += d * d;
    }
    if (k < 2 || n <= static_cast<double>(k) || between + within == 0.0) {
      out[c] = 0.0;
      continue;
    }
    const double msb = between / static_cast<double>(k - 1);
    const double msw = within / (n - static_cast<double>(k));
    out[c] = msw > 0.0 ? msb / msw : std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<double> Chi2(const Matrix& x, std::span<const int> y) {
  CheckShape(x, y);
  for (double v : x.data()) {
    if (v < 0.0) throw ArgumentError("chi2 requires nonnegative feature values");
  }
  std::map<int, double> class_count;
  for (int label : y) class_count[label] += 1.0;
  const double n = static_cast<double>(y.size());

  std::vector<double> out(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    std::map<int, double> observed;
    double total = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      observed[y[r]] += x(r, c);
      total += x(r, c);
    }
    if (total == 0.0) continue;
    double stat = 0.0;
    for (const auto& [label, nc] : class_count) {
      const double expected = nc / n * total;
      const double d = observed[label] - expected;
      stat += d * d / expected;
    }
    out[c] = stat;
  }
  return out;
}

std::vector<double> MutualInfo(const Matrix& x, std::span<const int> y,
                               std::size_t bins) {
  CheckShape(x, y);
  if (bins < 2) throw ArgumentError("mutual information needs at least 2 bins");
  const std::size_t n = x.rows();
  std::vector<double> out(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    std::vector<double> col = x.column(c);
    std::vector<double> sorted = col;
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = static_cast<std::size_t>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    sorted.assign(col.begin(), col.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<long> code(n);
    if (distinct <= bins) {
      for (std::size_t r = 0; r < n; ++r) {
        code[r] = std::lower_bound(sorted.begin(), sorted.end(), col[r]) - sorted.begin();
      }
    } else {
      std::vector<double> edges;
      for (std::size_t i = 1; i < bins; ++i) edges.push_back(sorted[i * n / bins]);
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      for (std::size_t r = 0; r < n; ++r) {
        code[r] = std::upper_bound(edges.begin(), edges.end(), col[r]) - edges.begin();
      }
    }

    std::map<std::pair<long, int>, double> joint;
    std::map<long, double> px;
    std::map<int, double> py;
    for (std::size_t r = 0; r < n; ++r) {
      joint[{code[r], y[r]}] += 1.0;
      px[code[r]] += 1.0;
      py[y[r]] += 1.0;
    }
    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
      const double pxy = count / dn;
      mi += pxy * std::log(pxy / ((px[key.first] / dn) * (py[key.second] / dn)));
    }
    out[c] = std::max(0.0, mi);
  }
  return out;
}

void AssignRanks(std::vector<FeatureScore>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = std::isnan(scores[a].score) ? 0.0 : scores[a].score;
    const double sb = std::isnan(scores[b].score) ? 0.0 : scores[b].score;
    if (sa != sb) return sa > sb;
    return scores[a].feature < scores[b].feature;
  });
  for (std::size_t i = 0; i < order.size(); ++i) scores[order[i]].rank = i + 1;
}

std::vector<FeatureScore> ScoreFeatures(const Matrix& x, std::span<const int> y,
                                        const std::vector<std::string>& names,
                                        SelectionMethod method) {
  CheckShape(x, y);
  if (names.size() != x.cols()) throw ArgumentError("one name per column required");
  std::vector<double> raw;
  switch (method) {
    case SelectionMethod::kAnova:
      raw = AnovaF(x, y);
      break;
    case SelectionMethod::kChi2:
      raw = Chi2(x, y);
      break;
    case SelectionMethod::kMutualInfo:
      raw = MutualInfo(x, y);
      break;
    case SelectionMethod::kRfe:
      throw ArgumentError("rfe is a wrapper method; use RfeRanking");
  }
  std::vector<FeatureScore> scores;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double s = raw[c];
    if (IsConstant(x, c)) {
      Warn("feature '" + names[c] + "' has zero variance; score set to 0");
      s = 0.0;
    }
    scores.push_back({names[c], method, s, 0});
  }
  AssignRanks(scores);
  return scores;
}

SelectionResult SelectTopK(const std::vector<FeatureScore>& scores, std::size_t k) {
  if (k < 1 || k > scores.size()) {
    throw ArgumentError("k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(scores.size()) + "]");
  }
  std::vector<const FeatureScore*> by_rank(scores.size());
  for (const auto& s : scores) {
    if (s.rank < 1 || s.rank > scores.size() || by_rank[s.rank - 1]) {
      throw ArgumentError("scores do not carry a valid rank permutation");
    }
    by_rank[s.rank - 1] = &s;
  }
  SelectionResult out;
  out.method = scores.front().method;
  out.k = k;
  for (std::size_t i = 0; i < by_rank.size(); ++i) {
    (i < k ? out.selected : out.masked).push_back(by_rank[i]->feature);
  }
  return out;
}

std::vector<double> FitLogisticCoefficients(const Matrix& x, std::span<const int> y,
                                            const RfeConfig& config) {
  CheckShape(x, y);
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  // Standardize internally (population spread, constant columns centered).
  Matrix z(n, m);
  for (std::size_t c = 0; c < m; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      z(r, c) = sd > 0.0 ? (x(r, c) - mean) / sd : 0.0;
    }
  }
  const double dn = static_cast<double>(n);
  std::vector<double> w(m, 0.0);
  double b = 0.0;
  std::vector<double> grad(m);
  double grad_b = 0.0;
  auto compute_gradient = [&] {
    std::fill(grad.begin(), grad.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double s = b;
      for (std::size_t c = 0; c < m; ++c) s += w[c] * z(r, c);
      const double err = Sigmoid(s) - static_cast<double>(y[r]);
      for (std::size_t c = 0; c < m; ++c) grad[c] += err * z(r, c);
      grad_b += err;
    }
    for (std::size_t c = 0; c < m; ++c) grad[c] = (grad[c] + config.l2 * w[c]) / dn;
    grad_b /= dn;
  };
  for (int it = 0; it < config.iterations; ++it) {
    compute_gradient();
    for (std::size_t c = 0; c < m; ++c) w[c] -= config.learning_rate * grad[c];
    b -= config.learning_rate * grad_b;
  }
  compute_gradient();
  double norm = grad_b * grad_b;
  for (double g : grad) norm += g * g;
  if (std::sqrt(norm) > 1e-3) {
    Warn("logistic regression did not converge within " +
         std::to_string(config.iterations) + " iterations; using last iterate");
  }
  return w;
}

std::vector<FeatureScore> RfeRanking(const Matrix& x, std::span<const int> y,
                                     const std::vector<std::string>& names,
                                     const RfeConfig& config) {
  CheckShape(x, y);
  if (names.size() != x.cols()) throw ArgumentError("one name per column required");
  const std::size_t m = x.cols();
  std::vector<std::size_t> alive(m);
  std::iota(alive.begin(), alive.end(), 0);
  std::vector<FeatureScore> scores(m);
  for (std::size_t c = 0; c < m; ++c) scores[c] = {names[c], SelectionMethod::kRfe, 0.0, 0};
  for (std::size_t round = 1; alive.size() > 1; ++round) {
    const auto coef = FitLogisticCoefficients(x.SelectColumns(alive), y, config);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < alive.size(); ++i) {
      const double a = std::abs(coef[i]);
      const double cur = std::abs(coef[worst]);
      if (a < cur || (a == cur && names[alive[i]] > names[alive[worst]])) worst = i;
    }
    scores[alive[worst]].score = static_cast<double>(round);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  scores[alive.front()].score = static_cast<double>(m);
  AssignRanks(scores);
  return scores;
}

SelectionResult RfeSelect(const Matrix& x, std::span<const int> y,
                          const std::vector<std::string>& names, std::size_t k,
                          const RfeConfig& config) {
  if (k < 1 || k > x.cols()) {
    throw ArgumentError("k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(x.cols()) + "]");
  }
  return SelectTopK(RfeRanking(x, y, names, config), k);
}

}  // namespace hfxai
