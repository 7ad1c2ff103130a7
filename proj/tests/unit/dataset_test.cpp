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

#include <gtest/gtest.h>

#include <sstream>

#include "hfxai/errors.hpp"
#include "synthetic.hpp"

namespace hfxai {
namespace {

std::vector<FeatureSpec> TinySchema() {
  return {
      {"age", FeatureKind::kNumerical, 0.0, 120.0, {}},
      {"smoker", FeatureKind::kNominal, {}, {}, {}},
      {"grade", FeatureKind::kOrdinal, {}, {}, {}},
      {"DEATH_EVENT", FeatureKind::kNominal, {}, {}, {0.0, 1.0}},
  };
}

Dataset Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseCsv(in, TinySchema());
}

TEST(Dataset, HeartFailureSchemaShape) {
  const auto schema = HeartFailureSchema();
  ASSERT_EQ(schema.size(), 13u);
  std::size_t numerical = 0, nominal = 0;
  for (const auto& s : schema) {
    (s.kind == FeatureKind::kNumerical ? numerical : nominal)++;
  }
  EXPECT_EQ(numerical, 7u);
  EXPECT_EQ(nominal, 6u);
  EXPECT_EQ(schema.back().name, kHeartFailureTarget);
}

TEST(Dataset, ParsesInSchemaOrderWithMissingCells) {
  const auto ds = Parse(
      "grade,DEATH_EVENT,age,smoker\n"
      "2,1,61.5,0\n"
      ",0,,1\n"
      "\n"
      "3,0,45,1\n");
  ASSERT_EQ(ds.n_rows(), 3u);
  EXPECT_EQ(ds.target_col(), 3u);
  EXPECT_DOUBLE_EQ(ds.value(0, 0), 61.5);
  EXPECT_DOUBLE_EQ(ds.value(0, 2), 2.0);
  EXPECT_TRUE(ds.is_missing(1, 0));
  EXPECT_TRUE(ds.is_missing(1, 2));
  EXPECT_FALSE(ds.is_missing(1, 1));
  EXPECT_EQ(ds.labels(), (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(ds.input_names(), (std::vector<std::string>{"age", "smoker", "grade"}));
  EXPECT_EQ(ds.CountLabel(0), 2u);
  EXPECT_EQ(ds.ColumnIndex("grade"), 2u);
  EXPECT_FALSE(ds.ColumnIndex("weight").has_value());
}

TEST(Dataset, TextualCategoriesAreCoded) {
  const auto ds = Parse(
      "age,smoker,grade,DEATH_EVENT\n"
      "50,yes,1,0\n"
      "51,no,1,1\n"
      "52,yes,2,0\n");
  EXPECT_EQ(ds.value(0, 1), 0.0);
  EXPECT_EQ(ds.value(1, 1), 1.0);
  EXPECT_EQ(ds.value(2, 1), 0.0);
  EXPECT_EQ(ds.category_labels()[1], (std::vector<std::string>{"yes", "no"}));
}

TEST(Dataset, SchemaErrors) {
  EXPECT_THROW(Parse(""), SchemaError);
  EXPECT_THROW(Parse("age,smoker,grade\n1,0,1\n"), SchemaError);
  EXPECT_THROW(Parse("age,smoker,grade,DEATH_EVENT,extra\n1,0,1,0,3\n"), SchemaError);
  EXPECT_THROW(Parse("age,age,grade,DEATH_EVENT\n1,0,1,0\n"), SchemaError);
  EXPECT_THROW(Parse("age,smoker,grade,DEATH_EVENT\n"), SchemaError);
  EXPECT_THROW(Parse("age,smoker,grade,DEATH_EVENT\n1,0,1,\n"), SchemaError);
}

TEST(Dataset, ParseErrorsNameTheCell) {
  try {
    Parse("age,smoker,grade,DEATH_EVENT\n50,0,1,0\nold,0,1,1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), "age");
  }
  EXPECT_THROW(Parse("age,smoker,grade,DEATH_EVENT\n150,0,1,0\n"), ParseError);
  EXPECT_THROW(Parse("age,smoker,grade,DEATH_EVENT\n50,0,1,2\n"), ParseError);
  EXPECT_THROW(Parse("age,smoker,grade,DEATH_EVENT\n50,0,1\n"), ParseError);
  EXPECT_THROW(LoadCsv("/nonexistent/file.csv", TinySchema()), IoError);
}

TEST(Dataset, DropColumns) {
  const auto ds = testing::SyntheticHeartFailure(1);
  const auto dropped = ds.WithoutColumns({"time"});
  EXPECT_EQ(dropped.n_cols(), 12u);
  EXPECT_FALSE(dropped.ColumnIndex("time").has_value());
  EXPECT_EQ(dropped.labels(), ds.labels());
  EXPECT_THROW(ds.WithoutColumns({"nope"}), ArgumentError);
  EXPECT_THROW(ds.WithoutColumns({std::string(kHeartFailureTarget)}), ArgumentError);
}

TEST(Dataset, CsvRoundTrip) {
  const auto ds = testing::SyntheticHeartFailure(2);
  std::stringstream buf;
  WriteCsv(ds, buf);
  const auto back = ParseCsv(buf, HeartFailureSchema());
  EXPECT_EQ(back.values(), ds.values());
  EXPECT_EQ(back.missing_mask(), ds.missing_mask());
}

TEST(Dataset, SyntheticMatchesClassBalance) {
  const auto ds = testing::SyntheticHeartFailure(3);
  EXPECT_EQ(ds.n_rows(), 299u);
  EXPECT_EQ(ds.CountLabel(1), 96u);
  EXPECT_EQ(ds.CountLabel(0), 203u);
}

}  // namespace
}  // namespace hfxai
