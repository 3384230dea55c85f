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

// JSON documents served by the HTTP API and emitted by `sweep --format json`.
// Undefined metrics and the ABOVE_MAX threshold serialize as null.

#ifndef TRADEOFF_JSON_IO_HPP_
#define TRADEOFF_JSON_IO_HPP_

#include <nlohmann/json.hpp>

#include "tradeoff/metrics.hpp"
#include "tradeoff/preview.hpp"
#include "tradeoff/query.hpp"

namespace tradeoff {

nlohmann::json ToJson(const Threshold& threshold);
nlohmann::json ToJson(const ConfusionCounts& counts);
nlohmann::json ToJson(const MetricSet& metrics);

/// {"threshold", "counts": {tp, fp, tn, fn}, "metrics": {recall, precision, fpr}}
nlohmann::json ToJson(const OperatingPoint& point);

/// {"n_total", "n_damaging", "points": [...]}
nlohmann::json ToJson(const ThresholdCurve& curve);

/// Operating point fields plus "objective" and "objective_value".
nlohmann::json ToJson(const QueryResult& result, MetricId objective);

/// {"n_icons", "allocation", "fractions", "legend"}
nlohmann::json ToJson(const PreviewGrid& grid);

nlohmann::json LegendJson();

}  // namespace tradeoff

#endif  // TRADEOFF_JSON_IO_HPP_
