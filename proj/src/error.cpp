// Copyright 2026 The chaidlogit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chaidlogit/error.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace chaidlogit {

Error::Error(std::string module, const std::string& message)
    : std::runtime_error(module + ": " + message),
      module_(std::move(module)),
      message_(message) {}

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& current_sink() {
  static WarningSink sink = [](std::string_view module, std::string_view message) {
    std::cerr << "warning [" << module << "]: " << message << '\n';
  };
  return sink;
}

}  // namespace

void warn(std::string_view module, std::string_view message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  if (current_sink()) current_sink()(module, message);
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  return std::exchange(current_sink(), std::move(sink));
}

}  // namespace chaidlogit
