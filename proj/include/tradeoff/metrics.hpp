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

// Dataset model, confusion counts and the exact threshold curve.
//
// Everything here is computed over a scored, labeled corpus. "damaging" is
// the positive class: an example is flagged damaging iff its score is at
// least the decision threshold. The curve is the full step function of the
// confusion counts, evaluated at every threshold where the flagged set can
// change.

#ifndef TRADEOFF_METRICS_HPP_
#define TRADEOFF_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tradeoff {

enum class Label { kGood, kDamaging };

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view token);

struct ScoredExample {
  std::string id;  // may be empty
  double score = 0.0;
  Label label = Label::kGood;

  friend bool operator==(const ScoredExample&, const ScoredExample&) = default;
};

/// Immutable labeled corpus. Copies share the underlying storage, so a copy
/// keeps the identity of the original (see `SameAs`).
class Dataset {
 public:
  /// Empty dataset.
  Dataset();

  /// Throws DomainError(bad_score_range) if any score is outside [0,1] or NaN.
  explicit Dataset(std::vector<ScoredExample> examples);

  std::span<const ScoredExample> examples() const;
  std::size_t n_total() const;
  std::size_t n_damaging() const;
  std::size_t n_good() const { return n_total() - n_damaging(); }
  bool empty() const { return n_total() == 0; }

  bool SameAs(const Dataset& other) const { return impl_ == other.impl_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// A decision threshold in [0,1], or the sentinel above every score that
/// flags nothing.
class Threshold {
 public:
  static Threshold At(double value);  // throws DomainError(bad_threshold)
  static Threshold AboveMax() { return Threshold(); }

  bool is_above_max() const { return !value_.has_value(); }
  /// Precondition: !is_above_max().
  double value() const { return *value_; }
  const std::optional<double>& as_optional() const { return value_; }

  friend bool operator==(const Threshold&, const Threshold&) = default;
  /// ABOVE_MAX orders after every finite threshold.
  friend bool operator<(const Threshold& a, const Threshold& b);

 private:
  Threshold() = default;
  explicit Threshold(double v) : value_(v) {}
  std::optional<double> value_;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  std::uint64_t flagged() const { return tp + fp; }

  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

/// Each metric is nullopt exactly when its denominator is zero.
struct MetricSet {
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> fpr;

  friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

struct OperatingPoint {
  Threshold threshold = Threshold::AboveMax();
  ConfusionCounts counts;
  MetricSet metrics;
};

/// Throws DomainError(bad_score_range) when score is outside [0,1].
Label Classify(double score, const Threshold& threshold);

/// Throws DomainError(empty_dataset) for an empty dataset.
ConfusionCounts ConfusionAt(const Dataset& dataset, const Threshold& threshold);

MetricSet MetricsFrom(const ConfusionCounts& counts);

/// The exact step function of confusion counts. Candidate thresholds are
/// {0.0} ∪ {distinct scores} in ascending order, followed by ABOVE_MAX.
class ThresholdCurve {
 public:
  const std::vector<OperatingPoint>& points() const { return points_; }
  const Dataset& dataset() const { return dataset_; }
  std::size_t n_damaging() const { return dataset_.n_damaging(); }
  std::size_t n_good() const { return dataset_.n_good(); }

  /// Index of the candidate whose flagged set equals {score >= threshold}.
  std::size_t IndexFor(double threshold) const;

 private:
  friend ThresholdCurve BuildCurve(const Dataset& dataset);
  ThresholdCurve(Dataset dataset, std::vector<OperatingPoint> points)
      : dataset_(std::move(dataset)), points_(std::move(points)) {}

  Dataset dataset_;
  std::vector<OperatingPoint> points_;
};

/// One sort plus a single cumulative pass: O(n log n).
/// Throws DomainError(empty_dataset).
ThresholdCurve BuildCurve(const Dataset& dataset);

/// Operating point for an arbitrary threshold in [0,1]. The returned point
/// carries the queried threshold, with the counts of the candidate covering
/// it. Throws DomainError(bad_threshold) outside [0,1].
OperatingPoint PointAt(const ThresholdCurve& curve, double threshold);

}  // namespace tradeoff

#endif  // TRADEOFF_METRICS_HPP_
