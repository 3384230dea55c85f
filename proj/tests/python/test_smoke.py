# Copyright 2026 The Tradeoff Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pytest

import tradeoff

D0 = "id,score,label\na,0.9,damaging\nb,0.8,good\nc,0.3,damaging\nd,0.1,good\n"


def test_fixture_snapshot():
    d = tradeoff.calibrated_fixture()
    assert (d.n_total, d.n_damaging) == (1000, 30)
    c = tradeoff.confusion_at(d, 0.4)
    assert (c.tp, c.fp, c.tn, c.fn) == (20, 60, 910, 10)
    m = tradeoff.metrics_from(c)
    assert m.precision == 0.25
    assert m.recall == pytest.approx(2 / 3)
    grid = tradeoff.allocate_icons(c, 100)
    assert grid["allocation"] == {"TN": 91, "FP": 6, "TP": 2, "FN": 1}


def test_curve_and_queries():
    curve = tradeoff.build_curve(tradeoff.parse_csv(D0))
    thresholds = [p.threshold for p in curve.points]
    assert thresholds == [0.0, 0.1, 0.3, 0.8, 0.9, None]
    assert curve.points[-1].metrics.precision is None
    assert tradeoff.threshold_for_recall(curve, 1.0).point.threshold == 0.3
    assert tradeoff.inverse_for_metric(curve, tradeoff.Metric.precision, 0.7).point.threshold == 0.9
    best = tradeoff.optimize(curve, tradeoff.Metric.recall, ["precision>=0.5"])
    assert best.point.threshold == 0.3
    assert best.objective_value == 1.0


def test_infeasible_carries_near_miss():
    curve = tradeoff.build_curve(tradeoff.parse_csv(D0))
    with pytest.raises(tradeoff.InfeasibleError) as info:
        tradeoff.optimize(curve, tradeoff.Metric.recall, ["precision>=0.7", "recall>=0.8"])
    assert isinstance(info.value, tradeoff.DomainError)
    assert info.value.args[0] == "infeasible"


def test_ingest_errors():
    with pytest.raises(tradeoff.IngestError) as info:
        tradeoff.parse_csv("id,score,label\nr1,0.2,good\nr3,1.5,good\n")
    assert info.value.args[:2] == ("bad_score_range", 3)


def test_synthesize_round_trip():
    d = tradeoff.synthesize(n_total=50, prevalence=0.2, seed=3)
    again = tradeoff.parse_csv(tradeoff.write_csv(d))
    assert [e.score for e in again.examples()] == [e.score for e in d.examples()]


def test_point_json():
    curve = tradeoff.build_curve(tradeoff.calibrated_fixture())
    doc = json.loads(tradeoff.point_at(curve, 0.4).to_json())
    assert doc["counts"]["tp"] == 20
