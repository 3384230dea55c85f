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

// Brute-force reference implementations for tests. Nothing here calls into
// the library's curve or query code: counts are recomputed per threshold by
// direct enumeration and queries are exhaustive scans.

#ifndef TRADEOFF_TESTS_ORACLE_HPP_
#define TRADEOFF_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tradeoff/metrics.hpp"
#include "tradeoff/query.hpp"

namespace tradeoff::oracle {

struct Row {
  double score;
  bool damaging;
};

// nullopt threshold = nothing flagged.
using MaybeThreshold = std::optional<double>;

struct Counts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline std::vector<Row> Rows(const Dataset& d) {
  std::vector<Row> rows;
  for (const auto& e : d.examples()) {
    rows.push_back({e.score, e.label == Label::kDamaging});
  }
  return rows;
}

inline Counts Count(const std::vector<Row>& rows, MaybeThreshold t) {
  Counts c;
  for (const auto& r : rows) {
    const bool flagged = t.has_value() && r.score >= *t;
    if (r.damaging && flagged) ++c.tp;
    if (r.damaging && !flagged) ++c.fn;
    if (!r.damaging && flagged) ++c.fp;
    if (!r.damaging && !flagged) ++c.tn;
  }
  return c;
}

inline std::optional<double> Recall(const Counts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return double(c.tp) / double(c.tp + c.fn);
}
inline std::optional<double> Precision(const Counts& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return double(c.tp) / double(c.tp + c.fp);
}
inline std::optional<double> Fpr(const Counts& c) {
  if (c.fp + c.tn == 0) return std::nullopt;
  return double(c.fp) / double(c.fp + c.tn);
}
inline std::optional<double> Metric(const Counts& c, MetricId m) {
  switch (m) {
    case MetricId::kRecall:
      return Recall(c);
    case MetricId::kPrecision:
      return Precision(c);
    case MetricId::kFpr:
      return Fpr(c);
  }
  return std::nullopt;
}

/// Ascending finite candidates followed by nullopt.
inline std::vector<MaybeThreshold> Candidates(const std::vector<Row>& rows) {
  std::set<double> s = {0.0};
  for (const auto& r : rows) s.insert(r.score);
  std::vector<MaybeThreshold> out(s.begin(), s.end());
  out.push_back(std::nullopt);
  return out;
}

struct Hit {
  MaybeThreshold threshold;
  Counts counts;
};

inline std::optional<Hit> RecallInverse(const std::vector<Row>& rows,
                                        double target) {
  auto cands = Candidates(rows);
  std::reverse(cands.begin(), cands.end());
  for (const auto& t : cands) {
    const auto c = Count(rows, t);
    const auto r = Recall(c);
    if (r && *r >= target) return Hit{t, c};
  }
  return std::nullopt;
}

inline std::optional<Hit> FprInverse(const std::vector<Row>& rows,
                                     double max_fpr) {
  for (const auto& t : Candidates(rows)) {
    const auto c = Count(rows, t);
    const auto f = Fpr(c);
    if (f && *f <= max_fpr) return Hit{t, c};
  }
  return std::nullopt;
}

struct OracleConstraint {
  MetricId metric;
  bool at_least;
  double bound;
};

inline std::optional<Hit> Optimize(const std::vector<Row>& rows,
                                   MetricId objective,
                                   const std::vector<OracleConstraint>& cs) {
  std::optional<Hit> best;
  std::optional<double> best_value;
  for (const auto& t : Candidates(rows)) {
    const auto c = Count(rows, t);
    const auto v = Metric(c, objective);
    if (!v) continue;
    bool ok = true;
    for (const auto& k : cs) {
      const auto m = Metric(c, k.metric);
      if (!m || (k.at_least ? !(*m >= k.bound) : !(*m <= k.bound))) ok = false;
    }
    if (!ok) continue;
    // Candidates ascend, so >= keeps the largest threshold among ties.
    if (!best_value || *v >= *best_value) {
      best = Hit{t, c};
      best_value = v;
    }
  }
  return best;
}

/// Random dataset; scores snap to a coarse grid half of the time so that
/// ties and exact 0/1 scores are common.
inline Dataset RandomDataset(std::mt19937_64& rng, std::size_t max_n = 200) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = n_dist(rng);
  const double prevalence = unit(rng);
  const bool coarse = unit(rng) < 0.5;
  std::uniform_int_distribution<int> grid(0, 20);
  std::vector<ScoredExample> ex;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = coarse ? grid(rng) / 20.0 : unit(rng);
    ex.push_back({"", s, unit(rng) < prevalence ? Label::kDamaging : Label::kGood});
  }
  return Dataset(std::move(ex));
}

}  // namespace tradeoff::oracle

#endif  // TRADEOFF_TESTS_ORACLE_HPP_
