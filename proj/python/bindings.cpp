// Copyright 2026 The WVE Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Python bindings for the training, prediction, evaluation and benchmark
// pipelines. Structured results cross the boundary as JSON text and are
// decoded on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "wve/error.hpp"
#include "wve/metrics.hpp"
#include "wve/model_io.hpp"
#include "wve/pipeline.hpp"
#include "wve/tabular.hpp"

namespace py = pybind11;

namespace {

wve::Averaging ParseAveraging(const std::string& name) {
  if (name == "macro") return wve::Averaging::kMacro;
  if (name == "positive") return wve::Averaging::kPositiveClass;
  throw wve::Error(wve::ErrorKind::kInvalidArgument, "averaging must be macro or positive");
}

wve::CleanPolicy ParseClean(const std::string& name) {
  if (name == "drop") return wve::CleanPolicy::kDrop;
  if (name == "impute") return wve::CleanPolicy::kImputeMode;
  throw wve::Error(wve::ErrorKind::kInvalidArgument, "clean policy must be drop or impute");
}

py::dict PredictionToDict(const wve::PredictionRow& r) {
  py::dict d;
  d["row"] = r.index;
  d["label"] = r.label;
  d["proba"] = r.proba;
  d["bmi_band"] = std::string(wve::BmiBandName(r.bmi_band));
  d["glucose_band"] = std::string(wve::GlucoseBandName(r.glucose_band));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted voting ensemble for tabular stroke-risk data";

  py::exception<wve::Error>(m, "WveError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const wve::Error& e) {
      py::object type = py::module_::import("wve._core").attr("WveError");
      py::object exc = type(e.what());
      exc.attr("kind") = std::string(wve::ErrorKindName(e.kind()));
      exc.attr("row") = e.row() ? py::cast(*e.row()) : py::none();
      exc.attr("column") = e.column() ? py::cast(*e.column()) : py::none();
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<wve::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("seed", &wve::RunConfig::seed)
      .def_readwrite("ratio", &wve::RunConfig::ratio)
      .def_readwrite("threshold", &wve::RunConfig::threshold)
      .def_readwrite("folds", &wve::RunConfig::folds)
      .def_readwrite("trees", &wve::RunConfig::trees)
      .def_readwrite("rounds", &wve::RunConfig::rounds)
      .def_readwrite("learning_rate", &wve::RunConfig::learning_rate)
      .def_readwrite("gamma", &wve::RunConfig::gamma)
      .def_readwrite("lambda_", &wve::RunConfig::lambda)
      .def_readwrite("max_depth", &wve::RunConfig::max_depth)
      .def_readwrite("max_bins", &wve::RunConfig::max_bins)
      .def_property(
          "averaging",
          [](const wve::RunConfig& c) {
            return c.averaging == wve::Averaging::kMacro ? "macro" : "positive";
          },
          [](wve::RunConfig& c, const std::string& v) { c.averaging = ParseAveraging(v); })
      .def_property(
          "clean",
          [](const wve::RunConfig& c) {
            return c.clean_policy == wve::CleanPolicy::kDrop ? "drop" : "impute";
          },
          [](wve::RunConfig& c, const std::string& v) { c.clean_policy = ParseClean(v); })
      .def("to_json", [](const wve::RunConfig& c) { return c.ToJson().dump(); });

  py::class_<wve::ModelDocument>(m, "ModelDocument")
      .def_property_readonly("kind",
                             [](const wve::ModelDocument& d) {
                               return std::string(wve::ModelKindName(d.model->kind()));
                             })
      .def_readonly("format_version", &wve::ModelDocument::format_version)
      .def_readonly("schema", &wve::ModelDocument::schema)
      .def_property_readonly("metadata_json",
                             [](const wve::ModelDocument& d) { return d.metadata.dump(); })
      .def("serialize", &wve::SerializeDocument)
      .def("save", [](const wve::ModelDocument& d, const std::filesystem::path& p) {
        wve::SaveModel(d, p);
      });

  m.def("parse_document", [](const std::string& text) { return wve::ParseDocument(text); });
  m.def("load_model", [](const std::filesystem::path& p) { return wve::LoadModel(p); });

  m.def(
      "synthesize",
      [](std::size_t n, std::uint64_t seed, double noise, double positive_rate) {
        wve::SynthSpec spec;
        spec.n = n;
        spec.seed = seed;
        spec.noise_rate = noise;
        spec.positive_rate = positive_rate;
        return wve::SerializeTable(wve::GenerateSynthetic(spec));
      },
      py::arg("n") = 2000, py::arg("seed") = 0, py::arg("noise") = 0.1,
      py::arg("positive_rate") = 1.0 / 3.0);

  m.def(
      "train",
      [](const std::string& csv, const wve::RunConfig& config) {
        wve::TrainOutcome out;
        {
          py::gil_scoped_release release;
          out = wve::RunTrain(csv, config);
        }
        return py::make_tuple(out.document, out.ReportText(config.averaging),
                              out.test.ToJson().dump());
      },
      py::arg("csv"), py::arg("config"));

  m.def(
      "evaluate",
      [](const wve::ModelDocument& doc, const std::string& csv, const wve::RunConfig& config) {
        py::gil_scoped_release release;
        return wve::RunEvaluate(doc, csv, config).ToJson().dump();
      },
      py::arg("document"), py::arg("csv"), py::arg("config"));

  m.def(
      "predict",
      [](const wve::ModelDocument& doc, const std::string& csv, double threshold) {
        std::vector<wve::PredictionRow> rows;
        {
          py::gil_scoped_release release;
          rows = wve::RunPredict(doc, csv, threshold);
        }
        py::list out;
        for (const auto& r : rows) out.append(PredictionToDict(r));
        return out;
      },
      py::arg("document"), py::arg("csv"), py::arg("threshold") = 0.5);

  m.def(
      "benchmark",
      [](const std::string& csv, const wve::RunConfig& config, bool scaling) {
        wve::BenchmarkReport report;
        {
          py::gil_scoped_release release;
          report = wve::RunBenchmark(csv, config, scaling);
        }
        return py::make_tuple(report.ToTable(config.averaging),
                              report.ToJson(config.averaging).dump());
      },
      py::arg("csv"), py::arg("config"), py::arg("scaling") = false);

  m.def("bmi_band", [](double v) { return std::string(wve::BmiBandName(wve::ClassifyBmi(v))); });
  m.def("glucose_band",
        [](double v) { return std::string(wve::GlucoseBandName(wve::ClassifyGlucose(v))); });
}
