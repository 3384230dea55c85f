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

#include "tradeoff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tradeoff/errors.hpp"

namespace tradeoff {

namespace {

bool InUnitInterval(double x) { return x >= 0.0 && x <= 1.0; }  // NaN fails

void CheckScore(double score) {
  if (!InUnitInterval(score)) {
    throw DomainError(error_code::kBadScore,
                      "score " + std::to_string(score) + " outside [0,1]");
  }
}

void CheckNonEmpty(const Dataset& dataset) {
  if (dataset.empty()) {
    throw DomainError(error_code::kEmptyDataset, "dataset is empty");
  }
}

std::optional<double> Ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view LabelName(Label label) {
  return label == Label::kDamaging ? "damaging" : "good";
}

std::optional<Label> ParseLabel(std::string_view token) {
  if (token == "good") return Label::kGood;
  if (token == "damaging") return Label::kDamaging;
  return std::nullopt;
}

struct Dataset::Impl {
  std::vector<ScoredExample> examples;
  std::size_t n_damaging = 0;
};

Dataset::Dataset() : impl_(std::make_shared<const Impl>()) {}

Dataset::Dataset(std::vector<ScoredExample> examples) {
  auto impl = std::make_shared<Impl>();
  for (const auto& e : examples) {
    CheckScore(e.score);
    if (e.label == Label::kDamaging) ++impl->n_damaging;
  }
  impl->examples = std::move(examples);
  impl_ = std::move(impl);
}

std::span<const ScoredExample> Dataset::examples() const {
  return impl_->examples;
}
std::size_t Dataset::n_total() const { return impl_->examples.size(); }
std::size_t Dataset::n_damaging() const { return impl_->n_damaging; }

Threshold Threshold::At(double value) {
  if (!InUnitInterval(value)) {
    throw DomainError(error_code::kBadThreshold,
                      "threshold " + std::to_string(value) + " outside [0,1]");
  }
  return Threshold(value);
}

bool operator<(const Threshold& a, const Threshold& b) {
  if (a.is_above_max()) return false;
  if (b.is_above_max()) return true;
  return a.value() < b.value();
}

Label Classify(double score, const Threshold& threshold) {
  CheckScore(score);
  if (threshold.is_above_max()) return Label::kGood;
  return score >= threshold.value() ? Label::kDamaging : Label::kGood;
}

ConfusionCounts ConfusionAt(const Dataset& dataset,
                            const Threshold& threshold) {
  CheckNonEmpty(dataset);
  ConfusionCounts c;
  for (const auto& e : dataset.examples()) {
    const bool flagged = Classify(e.score, threshold) == Label::kDamaging;
    const bool damaging = e.label == Label::kDamaging;
    if (flagged) {
      ++(damaging ? c.tp : c.fp);
    } else {
      ++(damaging ? c.fn : c.tn);
    }
  }
  return c;
}

MetricSet MetricsFrom(const ConfusionCounts& c) {
  return MetricSet{.recall = Ratio(c.tp, c.tp + c.fn),
                   .precision = Ratio(c.tp, c.tp + c.fp),
                   .fpr = Ratio(c.fp, c.fp + c.tn)};
}

ThresholdCurve BuildCurve(const Dataset& dataset) {
  CheckNonEmpty(dataset);
  const std::uint64_t n_pos = dataset.n_damaging();
  const std::uint64_t n_neg = dataset.n_good();

  std::vector<std::pair<double, Label>> sorted;
  sorted.reserve(dataset.n_total());
  for (const auto& e : dataset.examples()) sorted.emplace_back(e.score, e.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  auto make_point = [&](Threshold t, std::uint64_t tp, std::uint64_t fp) {
    ConfusionCounts c{.tp = tp, .fp = fp, .tn = n_neg - fp, .fn = n_pos - tp};
    return OperatingPoint{.threshold = t, .counts = c, .metrics = MetricsFrom(c)};
  };

  // Walk scores from the top; each distinct score closes a group of ties and
  // yields the point that flags everything at or above it.
  std::vector<OperatingPoint> descending;
  descending.push_back(make_point(Threshold::AboveMax(), 0, 0));
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ++(sorted[i].second == Label::kDamaging ? tp : fp);
    const bool last_of_group =
        i + 1 == sorted.size() || sorted[i + 1].first != sorted[i].first;
    if (last_of_group) {
      descending.push_back(make_point(Threshold::At(sorted[i].first), tp, fp));
    }
  }
  if (sorted.back().first > 0.0) {
    descending.push_back(make_point(Threshold::At(0.0), tp, fp));
  }

  std::reverse(descending.begin(), descending.end());
  return ThresholdCurve(dataset, std::move(descending));
}

std::size_t ThresholdCurve::IndexFor(double threshold) const {
  // points_[0 .. size-2] hold finite ascending candidates; the last is
  // ABOVE_MAX. First finite candidate >= threshold, else ABOVE_MAX.
  const auto finite_end = points_.end() - 1;
  const auto it = std::lower_bound(
      points_.begin(), finite_end, threshold,
      [](const OperatingPoint& p, double t) { return p.threshold.value() < t; });
  return static_cast<std::size_t>(it - points_.begin());
}

OperatingPoint PointAt(const ThresholdCurve& curve, double threshold) {
  const Threshold queried = Threshold::At(threshold);
  OperatingPoint p = curve.points()[curve.IndexFor(threshold)];
  p.threshold = queried;
  return p;
}

}  // namespace tradeoff
