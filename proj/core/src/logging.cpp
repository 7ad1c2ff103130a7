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

#include "hfxai/logging.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace hfxai {
namespace {

std::mutex& HandlerMutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& Handler() {
  static WarningHandler handler = [](std::string_view message) {
    std::cerr << "warning: " << message << '\n';
  };
  return handler;
}

}  // namespace

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  if (Handler()) Handler()(message);
}

WarningHandler SetWarningHandler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  return std::exchange(Handler(), std::move(handler));
}

struct ScopedWarningCapture::State {
  mutable std::mutex mu;
  std::vector<std::string> messages;
};

// The handler runs while HandlerMutex is held, so it must only touch state_.
ScopedWarningCapture::ScopedWarningCapture()
    : state_(std::make_unique<State>()) {
  State* state = state_.get();
  previous_ = SetWarningHandler([state](std::string_view message) {
    std::lock_guard<std::mutex> lock(state->mu);
    state->messages.emplace_back(message);
  });
}

ScopedWarningCapture::~ScopedWarningCapture() {
  SetWarningHandler(std::move(previous_));
}

std::vector<std::string> ScopedWarningCapture::messages() const {
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->messages;
}

bool ScopedWarningCapture::Contains(std::string_view needle) const {
  std::lock_guard<std::mutex> lock(state_->mu);
  for (const auto& m : state_->messages) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace hfxai
