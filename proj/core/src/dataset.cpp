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

#include "hfxai/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "hfxai/errors.hpp"

namespace hfxai {
namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

// Splits one CSV record. Double quotes protect separators; "" is an escaped
// quote inside a quoted field.
std::vector<std::string> SplitRecord(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(Trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(Trim(cur));
  return fields;
}

std::optional<double> ParseNumber(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view ToString(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kNumerical:
      return "numerical";
    case FeatureKind::kNominal:
      return "nominal";
    case FeatureKind::kOrdinal:
      return "ordinal";
  }
  return "unknown";
}

FeatureKind ParseFeatureKind(std::string_view text) {
  if (text == "numerical") return FeatureKind::kNumerical;
  if (text == "nominal") return FeatureKind::kNominal;
  if (text == "ordinal") return FeatureKind::kOrdinal;
  throw ArgumentError("unknown feature kind '" + std::string(text) + "'");
}

std::vector<FeatureSpec> HeartFailureSchema() {
  const std::vector<double> binary = {0.0, 1.0};
  auto num = [](std::string name) {
    return FeatureSpec{std::move(name), FeatureKind::kNumerical, {}, {}, {}};
  };
  auto nom = [&](std::string name) {
    return FeatureSpec{std::move(name), FeatureKind::kNominal, {}, {}, binary};
  };
  return {
      num("age"),
      nom("anaemia"),
      num("creatinine_phosphokinase"),
      nom("diabetes"),
      num("ejection_fraction"),
      nom("high_blood_pressure"),
      num("platelets"),
      num("serum_creatinine"),
      num("serum_sodium"),
      nom("sex"),
      nom("smoking"),
      num("time"),
      nom(std::string(kHeartFailureTarget)),
  };
}

Dataset::Dataset(std::vector<FeatureSpec> specs, Matrix values,
                 std::vector<std::uint8_t> missing, std::size_t target_col,
                 std::vector<std::vector<std::string>> category_labels)
    : specs_(std::move(specs)),
      values_(std::move(values)),
      missing_(std::move(missing)),
      target_col_(target_col),
      category_labels_(std::move(category_labels)) {
  if (specs_.size() != values_.cols()) {
    throw ArgumentError("dataset: spec count does not match column count");
  }
  if (missing_.size() != values_.rows() * values_.cols()) {
    throw ArgumentError("dataset: missing mask has the wrong shape");
  }
  if (target_col_ >= specs_.size()) {
    throw ArgumentError("dataset: target column out of range");
  }
  if (values_.rows() == 0) throw ArgumentError("dataset: no rows");
  if (category_labels_.empty()) category_labels_.resize(specs_.size());
  std::set<std::string> names;
  for (const auto& s : specs_) {
    if (!names.insert(s.name).second) {
      throw SchemaError("duplicate column name '" + s.name + "'");
    }
  }
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    if (is_missing(r, target_col_)) {
      throw SchemaError("target column has a missing value at row " +
                        std::to_string(r + 1));
    }
    const double y = values_(r, target_col_);
    if (y != 0.0 && y != 1.0) {
      throw SchemaError("target column must be binary 0/1 (row " +
                        std::to_string(r + 1) + ")");
    }
  }
}

std::vector<int> Dataset::labels() const {
  std::vector<int> y(n_rows());
  for (std::size_t r = 0; r < n_rows(); ++r) {
    y[r] = static_cast<int>(values_(r, target_col_));
  }
  return y;
}

std::vector<std::size_t> Dataset::input_columns() const {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < n_cols(); ++c) {
    if (c != target_col_) cols.push_back(c);
  }
  return cols;
}

std::vector<std::string> Dataset::input_names() const {
  std::vector<std::string> names;
  for (std::size_t c : input_columns()) names.push_back(specs_[c].name);
  return names;
}

std::optional<std::size_t> Dataset::ColumnIndex(std::string_view name) const {
  for (std::size_t c = 0; c < specs_.size(); ++c) {
    if (specs_[c].name == name) return c;
  }
  return std::nullopt;
}

std::size_t Dataset::CountLabel(int label) const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < n_rows(); ++r) {
    if (static_cast<int>(values_(r, target_col_)) == label) ++n;
  }
  return n;
}

Dataset Dataset::WithoutColumns(const std::vector<std::string>& names) const {
  std::set<std::size_t> drop;
  for (const auto& name : names) {
    auto idx = ColumnIndex(name);
    if (!idx) throw ArgumentError("cannot drop unknown column '" + name + "'");
    if (*idx == target_col_) throw ArgumentError("cannot drop the target column");
    drop.insert(*idx);
  }
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < n_cols(); ++c) {
    if (!drop.contains(c)) keep.push_back(c);
  }
  if (keep.size() < 2) throw ArgumentError("no input columns left after drop");
  std::vector<FeatureSpec> specs;
  std::vector<std::vector<std::string>> labels;
  std::size_t target = 0;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    if (keep[j] == target_col_) target = j;
    specs.push_back(specs_[keep[j]]);
    labels.push_back(category_labels_[keep[j]]);
  }
  std::vector<std::uint8_t> missing(n_rows() * keep.size());
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      missing[r * keep.size() + j] = missing_[r * n_cols() + keep[j]];
    }
  }
  return Dataset(std::move(specs), values_.SelectColumns(keep), std::move(missing),
                 target, std::move(labels));
}

Dataset LoadCsv(const std::filesystem::path& path,
                const std::vector<FeatureSpec>& schema, std::string_view target) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return ParseCsv(in, schema, target);
}

Dataset ParseCsv(std::istream& in, const std::vector<FeatureSpec>& schema,
                 std::string_view target) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty file: no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = SplitRecord(line);

  std::map<std::string, std::size_t> schema_index;
  for (std::size_t c = 0; c < schema.size(); ++c) schema_index[schema[c].name] = c;
  std::vector<std::size_t> file_to_schema(header.size());
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto it = schema_index.find(header[i]);
    if (it == schema_index.end()) {
      throw SchemaError("unexpected column '" + header[i] + "'");
    }
    if (!seen.insert(it->second).second) {
      throw SchemaError("duplicate column '" + header[i] + "'");
    }
    file_to_schema[i] = it->second;
  }
  for (const auto& spec : schema) {
    if (!seen.contains(schema_index[spec.name])) {
      throw SchemaError("missing column '" + spec.name + "'");
    }
  }
  auto target_it = schema_index.find(std::string(target));
  if (target_it == schema_index.end()) {
    throw SchemaError("target column '" + std::string(target) + "' not in schema");
  }

  const std::size_t n_cols = schema.size();
  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  std::vector<std::vector<std::string>> labels(n_cols);
  std::vector<std::map<std::string, double>> codes(n_cols);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++row;
    const auto fields = SplitRecord(line);
    if (fields.size() != header.size()) {
      throw ParseError(row, "", "expected " + std::to_string(header.size()) +
                                    " fields, found " +
                                    std::to_string(fields.size()));
    }
    const std::size_t base = values.size();
    values.resize(base + n_cols, 0.0);
    missing.resize(base + n_cols, 0);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::size_t c = file_to_schema[i];
      const FeatureSpec& spec = schema[c];
      const std::string& cell = fields[i];
      if (cell.empty()) {
        missing[base + c] = 1;
        continue;
      }
      auto number = ParseNumber(cell);
      double v = 0.0;
      if (number) {
        v = *number;
      } else if (spec.kind != FeatureKind::kNumerical && c != target_it->second) {
        // Textual category: coded by order of first appearance in the file.
        auto [it, inserted] =
            codes[c].try_emplace(cell, static_cast<double>(labels[c].size()));
        if (inserted) labels[c].push_back(cell);
        v = it->second;
      } else {
        throw ParseError(row, spec.name, "'" + cell + "' is not a number");
      }
      if (number && spec.kind == FeatureKind::kNumerical) {
        if ((spec.min && v < *spec.min) || (spec.max && v > *spec.max)) {
          throw ParseError(row, spec.name, "value " + cell + " out of range");
        }
      }
      if (number && !spec.allowed_values.empty() &&
          std::find(spec.allowed_values.begin(), spec.allowed_values.end(), v) ==
              spec.allowed_values.end()) {
        throw ParseError(row, spec.name, "value " + cell + " not an allowed category");
      }
      values[base + c] = v;
    }
  }
  if (row == 0) throw SchemaError("no data rows");
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (!labels[c].empty() && labels[c].size() != codes[c].size()) {
      throw ParseError(row, schema[c].name, "inconsistent category coding");
    }
  }
  return Dataset(schema, Matrix(row, n_cols, std::move(values)), std::move(missing),
                 target_it->second, std::move(labels));
}

void WriteCsv(const Dataset& ds, std::ostream& out) {
  for (std::size_t c = 0; c < ds.n_cols(); ++c) {
    if (c) out << ',';
    out << ds.specs()[c].name;
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < ds.n_cols(); ++c) {
      if (c) out << ',';
      if (ds.is_missing(r, c)) continue;
      const auto& labels = ds.category_labels()[c];
      if (!labels.empty()) {
        out << labels[static_cast<std::size_t>(ds.value(r, c))];
      } else {
        out << FormatNumber(ds.value(r, c));
      }
    }
    out << '\n';
  }
}

}  // namespace hfxai
