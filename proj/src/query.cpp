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

#include "tradeoff/query.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace tradeoff {

namespace {

void CheckTarget(double target, std::string_view what) {
  if (!(target >= 0.0 && target <= 1.0)) {
    std::ostringstream msg;
    msg << what << " " << target << " outside [0,1]";
    throw DomainError(error_code::kBadTarget, msg.str());
  }
}

QueryResult ResultAt(const OperatingPoint& p, MetricId objective) {
  return QueryResult{.point = p,
                     .objective_value = *MetricValue(p.metrics, objective)};
}

// How far a point is from meeting a constraint; 0 when satisfied, 1 (the
// largest possible gap) when the metric is undefined.
double Shortfall(const Constraint& c, const MetricSet& m) {
  const auto v = MetricValue(m, c.metric);
  if (!v) return 1.0;
  const double gap = c.relation == Relation::kAtLeast ? c.bound - *v : *v - c.bound;
  return std::max(gap, 0.0);
}

}  // namespace

std::string_view MetricName(MetricId metric) {
  switch (metric) {
    case MetricId::kRecall:
      return "recall";
    case MetricId::kPrecision:
      return "precision";
    case MetricId::kFpr:
      return "fpr";
  }
  return "?";
}

std::optional<MetricId> ParseMetric(std::string_view token) {
  if (token == "recall") return MetricId::kRecall;
  if (token == "precision") return MetricId::kPrecision;
  if (token == "fpr") return MetricId::kFpr;
  return std::nullopt;
}

std::optional<double> MetricValue(const MetricSet& metrics, MetricId metric) {
  switch (metric) {
    case MetricId::kRecall:
      return metrics.recall;
    case MetricId::kPrecision:
      return metrics.precision;
    case MetricId::kFpr:
      return metrics.fpr;
  }
  return std::nullopt;
}

bool Constraint::SatisfiedBy(const MetricSet& metrics) const {
  const auto v = MetricValue(metrics, metric);
  if (!v) return false;
  return relation == Relation::kAtLeast ? *v >= bound : *v <= bound;
}

std::string Constraint::ToString() const {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), bound);
  std::string out(MetricName(metric));
  out += relation == Relation::kAtLeast ? ">=" : "<=";
  out.append(buf, end);
  return out;
}

std::optional<Constraint> ParseConstraint(std::string_view text) {
  std::size_t op = text.find_first_of("<>");
  if (op == std::string_view::npos || op + 1 >= text.size() ||
      text[op + 1] != '=') {
    return std::nullopt;
  }
  const auto metric = ParseMetric(text.substr(0, op));
  if (!metric) return std::nullopt;
  const std::string_view number = text.substr(op + 2);
  double bound = 0.0;
  const auto [end, ec] =
      std::from_chars(number.data(), number.data() + number.size(), bound);
  if (ec != std::errc() || end != number.data() + number.size() ||
      !(bound >= 0.0 && bound <= 1.0)) {
    return std::nullopt;
  }
  return Constraint{.metric = *metric,
                    .relation = text[op] == '>' ? Relation::kAtLeast
                                                : Relation::kAtMost,
                    .bound = bound};
}

InfeasibleError::InfeasibleError(OperatingPoint near_miss, Constraint violated)
    : DomainError(error_code::kInfeasible,
                  "no threshold satisfies all constraints; closest candidate " +
                      (near_miss.threshold.is_above_max()
                           ? std::string("above_max")
                           : std::to_string(near_miss.threshold.value())) +
                      " violates " + violated.ToString()),
      near_miss_(std::move(near_miss)),
      violated_(violated) {}

QueryResult ThresholdForRecall(const ThresholdCurve& curve, double target) {
  CheckTarget(target, "recall target");
  if (curve.n_damaging() == 0) {
    throw DomainError(error_code::kRecallUndefined,
                      "recall undefined: dataset has no damaging examples");
  }
  // Recall is non-increasing; find the last point with recall >= target.
  const auto& pts = curve.points();
  const auto it = std::partition_point(
      pts.begin(), pts.end(),
      [target](const OperatingPoint& p) { return *p.metrics.recall >= target; });
  // recall(0) = 1 >= target, so it != begin.
  return ResultAt(*(it - 1), MetricId::kRecall);
}

QueryResult ThresholdForFpr(const ThresholdCurve& curve, double max_fpr) {
  CheckTarget(max_fpr, "fpr bound");
  if (curve.n_good() == 0) {
    throw DomainError(error_code::kFprUndefined,
                      "fpr undefined: dataset has no good examples");
  }
  const auto& pts = curve.points();
  const auto it = std::partition_point(
      pts.begin(), pts.end(),
      [max_fpr](const OperatingPoint& p) { return *p.metrics.fpr > max_fpr; });
  // fpr(ABOVE_MAX) = 0, so it != end.
  return ResultAt(*it, MetricId::kFpr);
}

QueryResult Optimize(const ThresholdCurve& curve, MetricId objective,
                     std::span<const Constraint> constraints) {
  if (objective == MetricId::kFpr) {
    throw DomainError(error_code::kBadObjective,
                      "objective must be recall or precision");
  }
  for (const auto& c : constraints) CheckTarget(c.bound, "constraint bound");

  const OperatingPoint* best = nullptr;
  const OperatingPoint* near_miss = nullptr;
  double near_miss_gap = 0.0;
  // Ascending scan with >= so that later (larger) thresholds win ties.
  for (const auto& p : curve.points()) {
    const auto value = MetricValue(p.metrics, objective);
    if (!value) continue;
    double gap = 0.0;
    for (const auto& c : constraints) gap += Shortfall(c, p.metrics);
    const bool feasible = std::all_of(
        constraints.begin(), constraints.end(),
        [&](const Constraint& c) { return c.SatisfiedBy(p.metrics); });
    if (feasible) {
      if (best == nullptr || *value >= *MetricValue(best->metrics, objective)) {
        best = &p;
      }
    } else if (near_miss == nullptr || gap <= near_miss_gap) {
      near_miss = &p;
      near_miss_gap = gap;
    }
  }
  if (best != nullptr) return ResultAt(*best, objective);
  if (near_miss == nullptr) {
    throw DomainError(error_code::kRecallUndefined,
                      std::string(MetricName(objective)) +
                          " undefined at every candidate threshold");
  }
  const auto violated = std::find_if(
      constraints.begin(), constraints.end(),
      [&](const Constraint& c) { return !c.SatisfiedBy(near_miss->metrics); });
  throw InfeasibleError(*near_miss, *violated);
}

QueryResult InverseForMetric(const ThresholdCurve& curve, MetricId metric,
                             double target) {
  switch (metric) {
    case MetricId::kRecall:
      return ThresholdForRecall(curve, target);
    case MetricId::kFpr:
      return ThresholdForFpr(curve, target);
    case MetricId::kPrecision: {
      CheckTarget(target, "precision target");
      const Constraint c{.metric = MetricId::kPrecision,
                         .relation = Relation::kAtLeast,
                         .bound = target};
      return Optimize(curve, MetricId::kRecall, std::span(&c, 1));
    }
  }
  throw DomainError(error_code::kBadObjective, "unknown metric");
}

}  // namespace tradeoff
