// Copyright 2026 The Weldx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "weldx/cli/cli.h"
#include "weldx/common/error.h"
#include "weldx/dataset/manifest.h"
#include "weldx/dataset/preprocess.h"
#include "weldx/dataset/synthetic.h"
#include "weldx/ddia/aggregate.h"
#include "weldx/ddia/record.h"
#include "weldx/explain/grad_cam.h"
#include "weldx/explain/lime.h"
#include "weldx/locmetric/recall.h"
#include "weldx/search/study.h"
#include "weldx/trainer/checkpoint.h"
#include "weldx/trainer/early_stopping.h"
#include "weldx/trainer/train.h"

namespace py = pybind11;

namespace weldx {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using MaskArray = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>;

py::object ToPython(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json FromPython(const py::handle& obj) {
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

RealGrid GridFromArray(const Array& a) {
  if (a.ndim() != 2) throw ValidationError("expected a 2-D array");
  RealGrid g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), g.values().begin());
  return g;
}

Array ArrayFromGrid(const RealGrid& g) {
  Array out({g.height(), g.width()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

explain::ExplanationMap MapFromArray(const Array& a) {
  explain::ExplanationMap m;
  m.values = GridFromArray(a);
  m.normalized = true;
  return m;
}

locmetric::GroundTruthMask MaskFromArray(const MaskArray& a) {
  if (a.ndim() != 2) throw ValidationError("expected a 2-D mask");
  locmetric::GroundTruthMask g;
  g.mask = BinaryGrid(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  for (py::ssize_t i = 0; i < a.size(); ++i) g.mask.values()[i] = a.data()[i] != 0;
  return g;
}

py::dict RecordDict(const locmetric::RecallRecord& r) {
  py::dict d;
  d["recall"] = r.recall;
  d["numerator"] = r.numerator;
  d["denominator"] = r.denominator;
  d["mode"] = std::string(locmetric::Name(r.mode));
  d["tau"] = r.tau ? py::cast(*r.tau) : py::none();
  return d;
}

py::dict Recall(const Array& map, const MaskArray& mask, const std::string& mode,
                double tau) {
  return RecordDict(
      locmetric::Recall(MapFromArray(map), MaskFromArray(mask), locmetric::ParseRecallMode(mode), tau));
}

double PooledRecall(const std::vector<Array>& maps, const std::vector<MaskArray>& masks,
                    const std::string& mode, double tau) {
  if (maps.size() != masks.size()) throw ValidationError("maps and masks differ in length");
  std::vector<std::pair<explain::ExplanationMap, locmetric::GroundTruthMask>> pairs;
  for (size_t i = 0; i < maps.size(); ++i) {
    pairs.emplace_back(MapFromArray(maps[i]), MaskFromArray(masks[i]));
  }
  return locmetric::PooledRecall(pairs, locmetric::ParseRecallMode(mode), tau);
}

py::dict ExplainMasks(const std::function<std::vector<double>(const std::vector<std::vector<int>>&)>& f,
                      int n_segments, int n_samples, uint64_t seed) {
  explain::LimeConfig config;
  config.n_segments = n_segments;
  config.n_samples = n_samples;
  explain::MaskPredictor predictor = [&](const std::vector<explain::Mask>& batch) {
    std::vector<std::vector<int>> rows;
    for (const explain::Mask& m : batch) rows.emplace_back(m.begin(), m.end());
    std::vector<double> out = f(rows);
    if (out.size() != batch.size()) {
      throw ValidationError("predictor returned " + std::to_string(out.size()) +
                            " values for " + std::to_string(batch.size()) + " masks");
    }
    return out;
  };
  const explain::LimeSurrogate s = explain::ExplainMasks(predictor, n_segments, config, seed);
  py::dict d;
  d["intercept"] = s.intercept;
  d["coefficients"] = s.coefficients;
  d["ridge_fallback"] = s.ridge_fallback;
  return d;
}

// Grad-CAM of one image file under a saved checkpoint.
py::dict GradCamFile(const std::filesystem::path& checkpoint, const std::filesystem::path& image,
                     std::optional<int> class_index) {
  const LoadedCheckpoint ckpt = LoadCheckpoint(checkpoint);
  const torch::Tensor input =
      ToTensor(dataset::PreprocessFile(image, ckpt.info.preprocess));
  int target = 0;
  {
    torch::NoGradGuard no_grad;
    target = class_index.value_or(
        static_cast<int>(ckpt.model->forward(input.unsqueeze(0)).argmax(1).item<int64_t>()));
  }
  const explain::GradCamResult r = explain::GradCam(*ckpt.model, input, target);
  py::dict d;
  d["class_index"] = target;
  d["class_name"] = ckpt.info.class_names.at(target);
  d["map"] = ArrayFromGrid(explain::Normalized(r.map).values);
  d["cam"] = ArrayFromGrid(r.cam);
  d["alphas"] = r.alphas;
  return d;
}

py::object RunStudy(const std::function<double(py::dict)>& objective, int n_trials,
                    const std::string& sampler, uint64_t seed, py::object space,
                    std::optional<std::filesystem::path> log_path, bool fixed_clock) {
  search::StudyOptions options;
  options.n_trials = n_trials;
  options.sampler = search::ParseSampler(sampler);
  options.study_seed = seed;
  options.log_path = log_path;
  if (fixed_clock) options.clock = [] { return 0.0; };
  const search::SearchSpace s =
      space.is_none() ? search::SearchSpace{} : search::SearchSpaceFromJson(FromPython(space));
  search::TrialRunner runner = [&](const search::TrialConfig& c) {
    py::gil_scoped_acquire gil;
    TrainReport r;
    EpochRecord e;
    e.val_accuracy = objective(ToPython(search::ToJson(c)).cast<py::dict>());
    r.epoch_history.push_back(e);
    r.best_val_accuracy = e.val_accuracy;
    r.best_epoch = 1;
    return r;
  };
  const search::StudyLog log = search::RunStudy(s, runner, options);
  Json trials = Json::array();
  for (const search::StudyEntry& e : log.trials) {
    trials.push_back({{"config", search::ToJson(e.config)}, {"result", search::ToJson(e.result)}});
  }
  Json out = {{"trials", trials}};
  try {
    out["best"] = search::ToJson(search::BestTrial(log).config);
  } catch (const NoResultError&) {
    out["best"] = nullptr;
  }
  return ToPython(out);
}

py::object EarlyStopping(const std::vector<double>& accuracies, int patience, int max_epochs) {
  EarlyStoppingOptions options;
  options.patience = patience;
  options.max_epochs = max_epochs;
  const TrainReport r = RunEarlyStopped(options, [&](int epoch) {
    if (epoch > static_cast<int>(accuracies.size())) {
      throw ValidationError("sequence ended before training stopped");
    }
    EpochRecord e;
    e.val_accuracy = accuracies[epoch - 1];
    return e;
  });
  return ToPython(ToJson(r));
}

std::vector<int64_t> BalancedTrainCounts(const std::vector<int>& train_counts, uint64_t seed) {
  if (train_counts.size() != dataset::kClassNames.size()) {
    throw ValidationError("expected one count per class");
  }
  dataset::DatasetManifest m;
  m.class_names.assign(dataset::kClassNames.begin(), dataset::kClassNames.end());
  for (int c = 0; c < dataset::kNumClasses; ++c) {
    for (int i = 0; i < train_counts[c]; ++i) {
      dataset::SampleEntry e;
      e.path = m.class_names[c] + "/" + std::to_string(i) + ".png";
      e.label = c;
      e.split = dataset::Split::kTrain;
      m.samples.push_back(e);
    }
  }
  const auto counts = dataset::BalanceClasses(m, seed).ClassCounts(dataset::Split::kTrain);
  return {counts.begin(), counts.end()};
}

py::object Aggregate(const py::list& records) {
  std::vector<ddia::AuditRecord> parsed;
  for (const py::handle& r : records) parsed.push_back(ddia::RecordFromJson(FromPython(r)));
  return ToPython(ddia::ToJson(ddia::Aggregate(parsed)));
}

py::object Synthesize(const std::filesystem::path& root, int per_class, int size, uint64_t seed) {
  dataset::SyntheticCorpusOptions options;
  options.per_class = per_class;
  options.size = size;
  options.seed = seed;
  const dataset::SyntheticCorpus c = dataset::SynthesizeCorpus(root, options);
  py::dict d;
  d["images"] = c.images;
  d["annotations"] = c.annotations.string();
  return d;
}

py::tuple Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "weldx");
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = cli::Main(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace weldx

PYBIND11_MODULE(_weldx, m) {
  using namespace weldx;
  m.doc() = "Weld radiograph classification, explanation and audit toolkit.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      std::string message = e.what();
      for (const FieldError& f : e.fields()) message += "\n  " + f.field + ": " + f.message;
      py::set_error(PyExc_ValueError, message.c_str());
    } catch (const ConfigError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const NotFoundError& e) {
      py::set_error(PyExc_KeyError, e.what());
    } catch (const IoError& e) {
      py::set_error(PyExc_OSError, e.what());
    } catch (const Error& e) {
      py::set_error(PyExc_RuntimeError, e.what());
    }
  });

  m.def("recall", &Recall, py::arg("map"), py::arg("mask"), py::arg("mode") = "binary",
        py::arg("tau") = 0.5,
        "Localization recall of a normalized map against a binary mask.");
  m.def("pooled_recall", &PooledRecall, py::arg("maps"), py::arg("masks"),
        py::arg("mode") = "binary", py::arg("tau") = 0.5);
  m.def("explain_masks", &ExplainMasks, py::arg("predictor"), py::arg("n_segments"),
        py::arg("n_samples") = 1000, py::arg("seed") = 0,
        "LIME surrogate over superpixel masks. `predictor` maps a list of 0/1 masks "
        "to one value per mask.");
  m.def("grad_cam", &GradCamFile, py::arg("checkpoint"), py::arg("image"),
        py::arg("class_index") = py::none(),
        "Grad-CAM of an image; defaults to the predicted class.");
  m.def("run_study", &RunStudy, py::arg("objective"), py::arg("n_trials"),
        py::arg("sampler") = "adaptive", py::arg("seed") = 0, py::arg("space") = py::none(),
        py::arg("log_path") = py::none(), py::arg("fixed_clock") = false,
        "Runs a search study with `objective(config) -> float` in [0, 1]. "
        "`fixed_clock` records zero wall times so results compare exactly.");
  m.def("early_stopping", &EarlyStopping, py::arg("val_accuracies"), py::arg("patience") = 5,
        py::arg("max_epochs") = 100);
  m.def("balanced_train_counts", &BalancedTrainCounts, py::arg("train_counts"),
        py::arg("seed") = 0);
  m.def("aggregate", &Aggregate, py::arg("records"));
  m.def("synthesize_corpus", &Synthesize, py::arg("root"), py::arg("per_class") = 20,
        py::arg("size") = 64, py::arg("seed") = 0);
  m.def("cli", &Cli, py::arg("args"),
        "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
  m.attr("__version__") = WELDX_VERSION;
}
