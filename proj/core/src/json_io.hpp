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

#ifndef HFXAI_SRC_JSON_IO_HPP_
#define HFXAI_SRC_JSON_IO_HPP_

#include <string>

#include "json.hpp"

namespace hfxai::detail {

// Sorted keys, two-space indent, floats printed with six decimals. Non-finite
// floats become the strings "inf", "-inf" and "nan".
std::string CanonicalJson(const nlohmann::json& value);

// Six-decimal fixed formatting shared by the JSON and CSV writers.
std::string FormatFixed(double v);

}  // namespace hfxai::detail

#endif  // HFXAI_SRC_JSON_IO_HPP_
