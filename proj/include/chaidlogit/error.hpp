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

#ifndef CHAIDLOGIT_ERROR_HPP_
#define CHAIDLOGIT_ERROR_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chaidlogit {

// Every failure raised by the library carries the name of the module that
// produced it; what() renders as "<module>: <message>".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message);

  const std::string& module() const { return module_; }
  const std::string& message() const { return message_; }

 private:
  std::string module_;
  std::string message_;
};

// Non-fatal diagnostics (dropped columns, excluded constants, separation).
// Defaults to stderr; tests and the CLI may redirect.
using WarningSink = std::function<void(std::string_view module, std::string_view message)>;

void warn(std::string_view module, std::string_view message);

// Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_ERROR_HPP_
