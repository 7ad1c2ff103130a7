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

#ifndef HFXAI_LOGGING_HPP_
#define HFXAI_LOGGING_HPP_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hfxai {

using WarningHandler = std::function<void(std::string_view)>;

// Emits a non-fatal diagnostic through the installed handler (stderr by
// default). Thread-safe.
void Warn(std::string_view message);

// Replaces the handler and returns the previous one. An empty handler
// silences warnings.
WarningHandler SetWarningHandler(WarningHandler handler);

// Collects warnings for the lifetime of the object, restoring the previous
// handler on destruction. Used by tests and by the report runner.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  std::vector<std::string> messages() const;
  bool Contains(std::string_view needle) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
  WarningHandler previous_;
};

}  // namespace hfxai

#endif  // HFXAI_LOGGING_HPP_
