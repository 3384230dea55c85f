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

#include "tradeoff/json_io.hpp"

#include <string>

namespace tradeoff {

using nlohmann::json;

namespace {

json Optional(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json ToJson(const Threshold& threshold) {
  return threshold.is_above_max() ? json(nullptr) : json(threshold.value());
}

json ToJson(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

json ToJson(const MetricSet& m) {
  return {{"recall", Optional(m.recall)},
          {"precision", Optional(m.precision)},
          {"fpr", Optional(m.fpr)}};
}

json ToJson(const OperatingPoint& p) {
  return {{"threshold", ToJson(p.threshold)},
          {"counts", ToJson(p.counts)},
          {"metrics", ToJson(p.metrics)}};
}

json ToJson(const ThresholdCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points()) points.push_back(ToJson(p));
  return {{"n_total", curve.dataset().n_total()},
          {"n_damaging", curve.dataset().n_damaging()},
          {"points", std::move(points)}};
}

json ToJson(const QueryResult& result, MetricId objective) {
  json doc = ToJson(result.point);
  doc["objective"] = std::string(MetricName(objective));
  doc["objective_value"] = result.objective_value;
  return doc;
}

json LegendJson() {
  json legend = json::object();
  for (auto c : kAllCategories) {
    const auto& e = Legend(c);
    legend[std::string(CategoryName(c))] = {
        {"color", std::string(ColorName(e.color))},
        {"shape", std::string(ShapeName(e.shape))},
        {"caption", std::string(e.caption)}};
  }
  return legend;
}

json ToJson(const PreviewGrid& grid) {
  json allocation = json::object();
  json fractions = json::object();
  for (auto c : kAllCategories) {
    const std::string name(CategoryName(c));
    allocation[name] = grid.icons(c);
    fractions[name] = grid.fraction(c);
  }
  return {{"n_icons", grid.n_icons},
          {"allocation", std::move(allocation)},
          {"fractions", std::move(fractions)},
          {"legend", LegendJson()}};
}

}  // namespace tradeoff
