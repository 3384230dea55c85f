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

// pybind11 module entry point
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tradeoff/errors.hpp"
#include "tradeoff/ingest.hpp"
#include "tradeoff/json_io.hpp"
#include "tradeoff/metrics.hpp"
#include "tradeoff/preview.hpp"
#include "tradeoff/query.hpp"

namespace py = pybind11;
using namespace tradeoff;

namespace {

// Python spells ABOVE_MAX as None.
Threshold ToThreshold(const std::optional<double>& t) {
  return t ? Threshold::At(*t) : Threshold::AboveMax();
}

py::dict PreviewDict(const PreviewGrid& grid) {
  py::dict allocation;
  py::dict fractions;
  for (auto c : kAllCategories) {
    const py::str name(std::string(CategoryName(c)));
    allocation[name] = grid.icons(c);
    fractions[name] = grid.fraction(c);
  }
  py::dict out;
  out["n_icons"] = grid.n_icons;
  out["allocation"] = allocation;
  out["fractions"] = fractions;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
        Operating-point engine for scored binary classifiers.

        Recall, precision and false-positive rate as exact step functions of
        the decision threshold, inverse and constrained threshold queries,
        and the four-category icon preview. A threshold of None means "above
        every score" (nothing flagged).
    )pbdoc";

  static py::exception<DomainError> domain_error(m, "DomainError",
                                                 PyExc_ValueError);
  static py::exception<InfeasibleError> infeasible_error(
      m, "InfeasibleError", domain_error.ptr());
  static py::exception<IngestError> ingest_error(m, "IngestError",
                                                 PyExc_ValueError);
  // args: (code, detail) for domain errors, (code, line, detail) for ingest.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InfeasibleError& e) {
      PyErr_SetObject(infeasible_error.ptr(),
                      py::make_tuple(e.code(), e.what()).ptr());
    } catch (const DomainError& e) {
      PyErr_SetObject(domain_error.ptr(), py::make_tuple(e.code(), e.what()).ptr());
    } catch (const IngestError& e) {
      PyErr_SetObject(ingest_error.ptr(),
                      py::make_tuple(std::string(e.code()), e.line(), e.detail())
                          .ptr());
    }
  });

  py::enum_<Label>(m, "Label")
      .value("good", Label::kGood)
      .value("damaging", Label::kDamaging);

  py::enum_<MetricId>(m, "Metric")
      .value("recall", MetricId::kRecall)
      .value("precision", MetricId::kPrecision)
      .value("fpr", MetricId::kFpr);

  py::class_<ScoredExample>(m, "ScoredExample")
      .def(py::init<std::string, double, Label>(), py::arg("id"),
           py::arg("score"), py::arg("label"))
      .def_readonly("id", &ScoredExample::id)
      .def_readonly("score", &ScoredExample::score)
      .def_readonly("label", &ScoredExample::label);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<std::vector<ScoredExample>>(), py::arg("examples"))
      .def_static(
          "from_pairs",
          [](const std::vector<std::pair<double, std::string>>& rows) {
            std::vector<ScoredExample> examples;
            for (const auto& [score, label] : rows) {
              const auto l = ParseLabel(label);
              if (!l) throw py::value_error("unknown label '" + label + "'");
              examples.push_back({"", score, *l});
            }
            return Dataset(std::move(examples));
          },
          py::arg("rows"), "Builds a dataset from (score, 'good'|'damaging') pairs.")
      .def_property_readonly("n_total", &Dataset::n_total)
      .def_property_readonly("n_damaging", &Dataset::n_damaging)
      .def_property_readonly("n_good", &Dataset::n_good)
      .def("examples",
           [](const Dataset& d) {
             auto e = d.examples();
             return std::vector<ScoredExample>(e.begin(), e.end());
           })
      .def("__len__", &Dataset::n_total);

  py::class_<ConfusionCounts>(m, "ConfusionCounts")
      .def(py::init([](std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                       std::uint64_t fn) {
             return ConfusionCounts{tp, fp, tn, fn};
           }),
           py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"))
      .def_readonly("tp", &ConfusionCounts::tp)
      .def_readonly("fp", &ConfusionCounts::fp)
      .def_readonly("tn", &ConfusionCounts::tn)
      .def_readonly("fn", &ConfusionCounts::fn)
      .def("__eq__", [](const ConfusionCounts& a, const ConfusionCounts& b) {
        return a == b;
      })
      .def("__repr__", [](const ConfusionCounts& c) {
        std::ostringstream out;
        out << "ConfusionCounts(tp=" << c.tp << ", fp=" << c.fp
            << ", tn=" << c.tn << ", fn=" << c.fn << ")";
        return out.str();
      });

  py::class_<MetricSet>(m, "MetricSet")
      .def_readonly("recall", &MetricSet::recall)
      .def_readonly("precision", &MetricSet::precision)
      .def_readonly("fpr", &MetricSet::fpr);

  py::class_<OperatingPoint>(m, "OperatingPoint")
      .def_property_readonly(
          "threshold",
          [](const OperatingPoint& p) { return p.threshold.as_optional(); })
      .def_readonly("counts", &OperatingPoint::counts)
      .def_readonly("metrics", &OperatingPoint::metrics)
      .def("to_json", [](const OperatingPoint& p) { return ToJson(p).dump(); });

  py::class_<ThresholdCurve>(m, "ThresholdCurve")
      .def_property_readonly("points", &ThresholdCurve::points)
      .def("__len__", [](const ThresholdCurve& c) { return c.points().size(); })
      .def("to_json", [](const ThresholdCurve& c) { return ToJson(c).dump(); });

  py::class_<Constraint>(m, "Constraint")
      .def_static(
          "parse",
          [](const std::string& text) {
            const auto c = ParseConstraint(text);
            if (!c) throw py::value_error("malformed constraint '" + text + "'");
            return *c;
          },
          py::arg("text"))
      .def_readonly("metric", &Constraint::metric)
      .def_readonly("bound", &Constraint::bound)
      .def("__str__", &Constraint::ToString);

  py::class_<QueryResult>(m, "QueryResult")
      .def_readonly("point", &QueryResult::point)
      .def_readonly("objective_value", &QueryResult::objective_value);

  m.def(
      "classify",
      [](double score, std::optional<double> threshold) {
        return Classify(score, ToThreshold(threshold));
      },
      py::arg("score"), py::arg("threshold"));
  m.def(
      "confusion_at",
      [](const Dataset& d, std::optional<double> threshold) {
        return ConfusionAt(d, ToThreshold(threshold));
      },
      py::arg("dataset"), py::arg("threshold"));
  m.def("metrics_from", &MetricsFrom, py::arg("counts"));
  m.def("build_curve", &BuildCurve, py::arg("dataset"));
  m.def("point_at", &PointAt, py::arg("curve"), py::arg("threshold"));

  m.def("threshold_for_recall", &ThresholdForRecall, py::arg("curve"),
        py::arg("target"));
  m.def("threshold_for_fpr", &ThresholdForFpr, py::arg("curve"),
        py::arg("max_fpr"));
  m.def(
      "optimize",
      [](const ThresholdCurve& curve, MetricId objective,
         const std::vector<std::string>& constraints) {
        std::vector<Constraint> parsed;
        for (const auto& text : constraints) {
          const auto c = ParseConstraint(text);
          if (!c) throw py::value_error("malformed constraint '" + text + "'");
          parsed.push_back(*c);
        }
        return Optimize(curve, objective, parsed);
      },
      py::arg("curve"), py::arg("maximize"),
      py::arg("constraints") = std::vector<std::string>{},
      "Constraints are strings like 'precision>=0.9' or 'fpr<=0.05'.");
  m.def("inverse_for_metric", &InverseForMetric, py::arg("curve"),
        py::arg("metric"), py::arg("target"));

  m.def(
      "allocate_icons",
      [](const ConfusionCounts& counts, std::uint64_t n_icons) {
        return PreviewDict(AllocateIcons(counts, n_icons));
      },
      py::arg("counts"), py::arg("n_icons") = kDefaultIcons);
  m.def("legend", [] {
    py::dict out;
    for (auto c : kAllCategories) {
      const auto& e = Legend(c);
      out[py::str(std::string(CategoryName(c)))] =
          py::make_tuple(std::string(ColorName(e.color)),
                         std::string(ShapeName(e.shape)), std::string(e.caption));
    }
    return out;
  });

  m.def(
      "parse_csv",
      [](const std::string& text) { return ParseText(text, DataFormat::kCsv); },
      py::arg("text"));
  m.def(
      "parse_jsonl",
      [](const std::string& text) { return ParseText(text, DataFormat::kJsonl); },
      py::arg("text"));
  m.def(
      "write_csv",
      [](const Dataset& d) {
        std::ostringstream out;
        WriteCsv(out, d);
        return out.str();
      },
      py::arg("dataset"));
  m.def(
      "synthesize",
      [](std::size_t n_total, double prevalence, std::uint64_t seed,
         std::pair<double, double> good_shape,
         std::pair<double, double> damaging_shape) {
        return Synthesize(SynthConfig{.n_total = n_total,
                                      .prevalence = prevalence,
                                      .good_score_shape = good_shape,
                                      .damaging_score_shape = damaging_shape,
                                      .seed = seed});
      },
      py::arg("n_total"), py::arg("prevalence"), py::arg("seed"),
      py::arg("good_shape") = std::pair{1.0, 8.0},
      py::arg("damaging_shape") = std::pair{6.0, 2.0});
  m.def("calibrated_fixture", &CalibratedFixture);

  m.attr("__version__") = "0.1.0";
}
