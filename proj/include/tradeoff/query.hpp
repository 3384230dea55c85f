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

// Inverse and constrained threshold queries over a ThresholdCurve.
//
// All queries select among the curve's candidate thresholds only. Bounds are
// compared exactly against the metric values (no epsilon), and a constraint
// on a metric that is undefined at a point is never satisfied there.

#ifndef TRADEOFF_QUERY_HPP_
#define TRADEOFF_QUERY_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradeoff/errors.hpp"
#include "tradeoff/metrics.hpp"

namespace tradeoff {

enum class MetricId { kRecall, kPrecision, kFpr };

std::string_view MetricName(MetricId metric);
std::optional<MetricId> ParseMetric(std::string_view token);
std::optional<double> MetricValue(const MetricSet& metrics, MetricId metric);

enum class Relation { kAtLeast, kAtMost };

struct Constraint {
  MetricId metric = MetricId::kPrecision;
  Relation relation = Relation::kAtLeast;
  double bound = 0.0;

  /// False when the metric is undefined.
  bool SatisfiedBy(const MetricSet& metrics) const;
  /// e.g. "precision>=0.9"
  std::string ToString() const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Parses "precision>=0.9" / "fpr<=0.05". Operators other than >= and <= are
/// rejected. Returns nullopt on any syntax error or bound outside [0,1].
std::optional<Constraint> ParseConstraint(std::string_view text);

struct QueryResult {
  OperatingPoint point;
  double objective_value = 0.0;
};

/// No candidate satisfies every constraint. Carries the closest candidate
/// and the first constraint it violates.
class InfeasibleError : public DomainError {
 public:
  InfeasibleError(OperatingPoint near_miss, Constraint violated);

  const OperatingPoint& near_miss() const { return near_miss_; }
  const Constraint& violated() const { return violated_; }

 private:
  OperatingPoint near_miss_;
  Constraint violated_;
};

/// Largest candidate threshold with recall >= target.
/// Throws DomainError(recall_undefined) when the dataset has no damaging
/// examples, DomainError(bad_target) for a target outside [0,1].
QueryResult ThresholdForRecall(const ThresholdCurve& curve, double target);

/// Smallest candidate threshold with fpr <= max_fpr.
/// Throws DomainError(fpr_undefined) when the dataset has no good examples.
QueryResult ThresholdForFpr(const ThresholdCurve& curve, double max_fpr);

/// Maximizes `objective` (recall or precision) over candidates where every
/// constraint holds and the objective is defined. Ties go to the largest
/// threshold. Throws InfeasibleError when nothing qualifies and
/// DomainError(bad_objective) for objective == fpr.
QueryResult Optimize(const ThresholdCurve& curve, MetricId objective,
                     std::span<const Constraint> constraints);

/// recall -> ThresholdForRecall, fpr -> ThresholdForFpr, precision ->
/// maximize recall subject to precision >= target (precision is not
/// monotone in the threshold, so there is no plain inverse).
QueryResult InverseForMetric(const ThresholdCurve& curve, MetricId metric,
                             double target);

}  // namespace tradeoff

#endif  // TRADEOFF_QUERY_HPP_
