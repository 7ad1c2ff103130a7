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

#ifndef HFXAI_DATASET_HPP_
#define HFXAI_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hfxai/matrix.hpp"

namespace hfxai {

enum class FeatureKind { kNumerical, kNominal, kOrdinal };

std::string_view ToString(FeatureKind kind);
FeatureKind ParseFeatureKind(std::string_view text);

// Column description. For numerical columns `min`/`max` bound the accepted
// values when set; for nominal columns a non-empty `allowed_values` is the
// closed set of accepted codes.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumerical;
  std::optional<double> min;
  std::optional<double> max;
  std::vector<double> allowed_values;
};

inline constexpr std::string_view kHeartFailureTarget = "DEATH_EVENT";

// The 13 columns of the UCI heart-failure clinical records file: 7 numerical
// inputs, 5 binary nominal inputs and the binary DEATH_EVENT target.
std::vector<FeatureSpec> HeartFailureSchema();

// Column-typed table with a missingness mask and a binary target column.
// Immutable after construction.
class Dataset {
 public:
  // `category_labels[c]` holds the original strings of a nominal column whose
  // cells were textual (code i <-> label i); it is empty for numeric columns.
  Dataset(std::vector<FeatureSpec> specs, Matrix values,
          std::vector<std::uint8_t> missing, std::size_t target_col,
          std::vector<std::vector<std::string>> category_labels = {});

  const std::vector<FeatureSpec>& specs() const { return specs_; }
  const Matrix& values() const { return values_; }
  std::size_t n_rows() const { return values_.rows(); }
  std::size_t n_cols() const { return values_.cols(); }
  std::size_t target_col() const { return target_col_; }

  double value(std::size_t r, std::size_t c) const { return values_(r, c); }
  bool is_missing(std::size_t r, std::size_t c) const {
    return missing_[r * n_cols() + c] != 0;
  }
  const std::vector<std::uint8_t>& missing_mask() const { return missing_; }
  const std::vector<std::vector<std::string>>& category_labels() const {
    return category_labels_;
  }

  std::vector<int> labels() const;
  // Every column except the target, in schema order.
  std::vector<std::size_t> input_columns() const;
  std::vector<std::string> input_names() const;
  std::optional<std::size_t> ColumnIndex(std::string_view name) const;
  std::size_t CountLabel(int label) const;

  // Copy without the named input columns. Unknown names and the target are
  // rejected.
  Dataset WithoutColumns(const std::vector<std::string>& names) const;

 private:
  std::vector<FeatureSpec> specs_;
  Matrix values_;
  std::vector<std::uint8_t> missing_;
  std::size_t target_col_;
  std::vector<std::vector<std::string>> category_labels_;
};

// Reads a comma-separated file with a header row. Header names must match the
// schema exactly, in any order; columns are stored in schema order. Empty
// cells are recorded as missing.
Dataset LoadCsv(const std::filesystem::path& path,
                const std::vector<FeatureSpec>& schema,
                std::string_view target = kHeartFailureTarget);
Dataset ParseCsv(std::istream& in, const std::vector<FeatureSpec>& schema,
                 std::string_view target = kHeartFailureTarget);

// Writes values at round-trip precision; missing cells are left empty.
void WriteCsv(const Dataset& ds, std::ostream& out);

}  // namespace hfxai

#endif  // HFXAI_DATASET_HPP_
