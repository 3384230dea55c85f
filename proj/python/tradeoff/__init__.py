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
"""Threshold exploration for scored binary classifiers."""

from ._core import (  # noqa: F401
    ConfusionCounts,
    Constraint,
    Dataset,
    DomainError,
    InfeasibleError,
    IngestError,
    Label,
    Metric,
    MetricSet,
    OperatingPoint,
    QueryResult,
    ScoredExample,
    ThresholdCurve,
    __version__,
    allocate_icons,
    build_curve,
    classify,
    confusion_at,
    calibrated_fixture,
    inverse_for_metric,
    legend,
    metrics_from,
    optimize,
    parse_csv,
    parse_jsonl,
    point_at,
    synthesize,
    threshold_for_fpr,
    threshold_for_recall,
    write_csv,
)
