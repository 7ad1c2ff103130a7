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

#ifndef HFXAI_ERRORS_HPP_
#define HFXAI_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hfxai {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or precondition violation.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The columns of a file do not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A cell could not be parsed. Rows are 1-based data rows (header excluded).
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& detail)
      : Error("parse error at row " + std::to_string(row) + ", column '" +
              column + "': " + detail),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// The model type does not support the requested operation.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hfxai

#endif  // HFXAI_ERRORS_HPP_
