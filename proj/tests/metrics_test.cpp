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

#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "tradeoff/errors.hpp"
#include "tradeoff/ingest.hpp"

namespace tradeoff {
namespace {

constexpr double kTol = 1e-9;

Dataset D0() {
  return Dataset({{"a", 0.9, Label::kDamaging},
                  {"b", 0.8, Label::kGood},
                  {"c", 0.3, Label::kDamaging},
                  {"d", 0.1, Label::kGood}});
}

ConfusionCounts Counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                       std::uint64_t fn) {
  return ConfusionCounts{.tp = tp, .fp = fp, .tn = tn, .fn = fn};
}

TEST(Classify, BoundaryIsInclusive) {
  EXPECT_EQ(Classify(0.5, Threshold::At(0.5)), Label::kDamaging);
  EXPECT_EQ(Classify(0.49, Threshold::At(0.5)), Label::kGood);
  EXPECT_EQ(Classify(0.0, Threshold::At(0.0)), Label::kDamaging);
  EXPECT_EQ(Classify(1.0, Threshold::AboveMax()), Label::kGood);
}

TEST(Classify, RejectsScoresOutsideUnitInterval) {
  EXPECT_THROW(Classify(1.5, Threshold::At(0.5)), DomainError);
  EXPECT_THROW(Classify(-0.1, Threshold::At(0.5)), DomainError);
  EXPECT_THROW(Classify(std::nan(""), Threshold::At(0.5)), DomainError);
}

TEST(Threshold, RejectsOutOfRange) {
  EXPECT_THROW(Threshold::At(1.5), DomainError);
  EXPECT_THROW(Threshold::At(-1e-12), DomainError);
  EXPECT_TRUE(Threshold::At(0.3) < Threshold::AboveMax());
  EXPECT_FALSE(Threshold::AboveMax() < Threshold::At(1.0));
}

TEST(Dataset, CountsAndIdentity) {
  const Dataset d = D0();
  EXPECT_EQ(d.n_total(), 4u);
  EXPECT_EQ(d.n_damaging(), 2u);
  EXPECT_EQ(d.n_good(), 2u);
  const Dataset copy = d;
  EXPECT_TRUE(copy.SameAs(d));
  EXPECT_FALSE(D0().SameAs(d));
  EXPECT_THROW(Dataset({{"x", 1.01, Label::kGood}}), DomainError);
}

TEST(ConfusionAt, D0Examples) {
  EXPECT_EQ(ConfusionAt(D0(), Threshold::At(0.5)), Counts(1, 1, 1, 1));
  EXPECT_EQ(ConfusionAt(D0(), Threshold::At(0.0)), Counts(2, 2, 0, 0));
  EXPECT_EQ(ConfusionAt(D0(), Threshold::AboveMax()), Counts(0, 0, 2, 2));
}

TEST(ConfusionAt, FixtureAtPointFour) {
  EXPECT_EQ(ConfusionAt(CalibratedFixture(), Threshold::At(0.4)),
            Counts(20, 60, 910, 10));
}

TEST(ConfusionAt, EmptyDatasetIsAnError) {
  try {
    ConfusionAt(Dataset(), Threshold::At(0.5));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code(), error_code::kEmptyDataset);
  }
}

TEST(MetricsFrom, FixtureCounts) {
  const auto m = MetricsFrom(Counts(20, 60, 910, 10));
  EXPECT_DOUBLE_EQ(*m.precision, 0.25);
  EXPECT_NEAR(*m.recall, 2.0 / 3.0, kTol);
  EXPECT_NEAR(*m.fpr, 60.0 / 970.0, kTol);
  EXPECT_NEAR(*m.recall, 0.666667, 1e-6);
  EXPECT_NEAR(*m.fpr, 0.061856, 1e-6);
}

TEST(MetricsFrom, AllFlaggedAndNoneFlagged) {
  const auto all = MetricsFrom(Counts(2, 2, 0, 0));
  EXPECT_EQ(all.recall, 1.0);
  EXPECT_EQ(all.fpr, 1.0);
  EXPECT_EQ(all.precision, 0.5);

  const auto none = MetricsFrom(Counts(0, 0, 5, 5));
  EXPECT_FALSE(none.precision.has_value());
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.fpr, 0.0);
}

TEST(MetricsFrom, MissingClassLeavesMetricUndefined) {
  const auto no_positives = MetricsFrom(Counts(0, 3, 2, 0));
  EXPECT_FALSE(no_positives.recall.has_value());
  const auto no_negatives = MetricsFrom(Counts(3, 0, 0, 2));
  EXPECT_FALSE(no_negatives.fpr.has_value());
}

TEST(BuildCurve, D0Candidates) {
  const auto curve = BuildCurve(D0());
  const auto& pts = curve.points();
  ASSERT_EQ(pts.size(), 6u);
  const double thresholds[] = {0.0, 0.1, 0.3, 0.8, 0.9};
  const double recalls[] = {1, 1, 1, 0.5, 0.5, 0};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(pts[i].threshold.value(), thresholds[i]);
  }
  EXPECT_TRUE(pts[5].threshold.is_above_max());
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(*pts[i].metrics.recall, recalls[i], kTol);
}

TEST(BuildCurve, SingleExample) {
  const auto curve = BuildCurve(Dataset({{"x", 0.7, Label::kDamaging}}));
  ASSERT_EQ(curve.points().size(), 3u);
  EXPECT_EQ(curve.points()[0].counts.tp, 1u);
  EXPECT_EQ(curve.points()[1].counts.tp, 1u);
  EXPECT_EQ(curve.points()[2].counts.tp, 0u);
}

TEST(BuildCurve, ZeroScoreSharesTheZeroCandidate) {
  const auto curve = BuildCurve(Dataset({{"", 0.0, Label::kGood},
                                          {"", 0.0, Label::kDamaging},
                                          {"", 0.6, Label::kDamaging}}));
  ASSERT_EQ(curve.points().size(), 3u);
  EXPECT_EQ(curve.points()[0].threshold.value(), 0.0);
  EXPECT_EQ(curve.points()[0].counts, Counts(2, 1, 0, 0));
  EXPECT_EQ(curve.points()[1].counts, Counts(1, 0, 1, 1));
}

TEST(BuildCurve, TiesCollapse) {
  const auto curve = BuildCurve(Dataset({{"", 0.5, Label::kGood},
                                          {"", 0.5, Label::kDamaging},
                                          {"", 0.5, Label::kDamaging}}));
  ASSERT_EQ(curve.points().size(), 3u);  // 0.0, 0.5, ABOVE_MAX
  EXPECT_EQ(curve.points()[1].counts, Counts(2, 1, 0, 0));
}

TEST(BuildCurve, FixturePointAtPointFour) {
  const auto curve = BuildCurve(CalibratedFixture());
  const auto& p = curve.points()[curve.IndexFor(0.4)];
  EXPECT_EQ(p.threshold.value(), 0.4);
  EXPECT_EQ(p.counts, Counts(20, 60, 910, 10));
}

TEST(BuildCurve, EmptyDatasetIsAnError) {
  EXPECT_THROW(BuildCurve(Dataset()), DomainError);
}

TEST(PointAt, D0Examples) {
  const auto curve = BuildCurve(D0());
  const auto mid = PointAt(curve, 0.5);
  EXPECT_EQ(mid.counts, Counts(1, 1, 1, 1));
  EXPECT_EQ(mid.threshold.value(), 0.5);
  EXPECT_EQ(PointAt(curve, 0.0).counts, Counts(2, 2, 0, 0));
  const auto high = PointAt(curve, 0.95);
  EXPECT_EQ(high.counts, Counts(0, 0, 2, 2));
  EXPECT_EQ(high.threshold.value(), 0.95);
  EXPECT_FALSE(high.metrics.precision.has_value());
}

TEST(PointAt, RejectsOutOfRange) {
  const auto curve = BuildCurve(D0());
  EXPECT_THROW(PointAt(curve, 1.5), DomainError);
  EXPECT_THROW(PointAt(curve, -0.5), DomainError);
}

// Property tests against the brute-force oracle.

TEST(CurveProperties, MatchesOracleAndInvariants) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 300; ++trial) {
    const Dataset d = oracle::RandomDataset(rng);
    const auto rows = oracle::Rows(d);
    const auto curve = BuildCurve(d);
    const auto cands = oracle::Candidates(rows);
    ASSERT_EQ(curve.points().size(), cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const auto& p = curve.points()[i];
      ASSERT_EQ(p.threshold.as_optional(), cands[i]);
      const auto c = oracle::Count(rows, cands[i]);
      ASSERT_EQ(p.counts, Counts(c.tp, c.fp, c.tn, c.fn));
      ASSERT_EQ(p.metrics.recall, oracle::Recall(c));
      ASSERT_EQ(p.metrics.precision, oracle::Precision(c));
      ASSERT_EQ(p.metrics.fpr, oracle::Fpr(c));
      ASSERT_EQ(p.counts.tp + p.counts.fn, d.n_damaging());
      ASSERT_EQ(p.counts.fp + p.counts.tn, d.n_good());
      if (i > 0) {
        const auto& prev = curve.points()[i - 1];
        ASSERT_LE(p.counts.flagged(), prev.counts.flagged());
        if (p.metrics.recall) ASSERT_LE(*p.metrics.recall, *prev.metrics.recall);
        if (p.metrics.fpr) ASSERT_LE(*p.metrics.fpr, *prev.metrics.fpr);
      }
    }
    // Endpoint identities.
    const auto& first = curve.points().front();
    const auto& last = curve.points().back();
    if (d.n_damaging() > 0) {
      EXPECT_EQ(first.metrics.recall, 1.0);
    }
    if (d.n_good() > 0) {
      EXPECT_EQ(first.metrics.fpr, 1.0);
    }
    EXPECT_NEAR(*first.metrics.precision,
                double(d.n_damaging()) / double(d.n_total()), kTol);
    EXPECT_EQ(last.counts.flagged(), 0u);
    EXPECT_FALSE(last.metrics.precision.has_value());
  }
}

TEST(CurveProperties, PointAtAgreesWithConfusionAt) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Dataset d = oracle::RandomDataset(rng);
    const auto curve = BuildCurve(d);
    for (int k = 0; k < 1000; ++k) {
      // Mix in exact candidate values so boundaries get exercised.
      double t = unit(rng);
      if (k % 4 == 0) t = d.examples()[k % d.n_total()].score;
      ASSERT_EQ(PointAt(curve, t).counts, ConfusionAt(d, Threshold::At(t)));
    }
  }
}

}  // namespace
}  // namespace tradeoff
