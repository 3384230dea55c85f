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

#ifndef TRADEOFF_ERRORS_HPP_
#define TRADEOFF_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace tradeoff {

/// Raised when an operation's precondition on its data does not hold
/// (empty dataset, score outside [0,1], metric undefined on the curve, ...).
///
/// `code()` is a stable machine-readable token; the service and CLI surface
/// it verbatim.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string code, const std::string& detail)
      : std::domain_error(detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace error_code {
inline constexpr const char* kEmptyDataset = "empty_dataset";
inline constexpr const char* kBadScore = "bad_score_range";
inline constexpr const char* kBadThreshold = "bad_threshold";
inline constexpr const char* kBadTarget = "bad_target";
inline constexpr const char* kBadObjective = "bad_objective";
inline constexpr const char* kBadIcons = "bad_icons";
inline constexpr const char* kRecallUndefined = "recall_undefined";
inline constexpr const char* kFprUndefined = "fpr_undefined";
inline constexpr const char* kInfeasible = "infeasible";
inline constexpr const char* kEmptyJoin = "empty_join";
}  // namespace error_code

}  // namespace tradeoff

#endif  // TRADEOFF_ERRORS_HPP_
