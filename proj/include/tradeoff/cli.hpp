// Copyright 2026 The Tradeoff Authors.
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

#ifndef TRADEOFF_CLI_HPP_
#define TRADEOFF_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace tradeoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct Io {
  std::ostream& out;
  std::ostream& err;
  /// ANSI colors in `preview`; the binary enables this only for a terminal
  /// without NO_COLOR set.
  bool color = false;
};

/// Runs one invocation; `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, Io io);

}  // namespace tradeoff::cli

#endif  // TRADEOFF_CLI_HPP_
