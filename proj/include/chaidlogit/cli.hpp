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

#ifndef CHAIDLOGIT_CLI_HPP_
#define CHAIDLOGIT_CLI_HPP_

#include <iostream>

namespace chaidlogit {

// Exit status: 0 success, 1 module error, 2 unreadable input or config,
// 3 missing upstream artifact; argument errors use CLI11's codes.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_CLI_HPP_
