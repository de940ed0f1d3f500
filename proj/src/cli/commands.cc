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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <memory>
#include <string>

#include <opencv2/core/version.hpp>
#include <opencv2/imgcodecs.hpp>
#include <torch/version.h>

#include "weldx/cli/cli.h"
#include "weldx/common/error.h"
#include "weldx/dataset/augment.h"
#include "weldx/dataset/manifest.h"
#include "weldx/dataset/synthetic.h"
#include "weldx/ddia/api.h"
#include "weldx/ddia/case_builder.h"
#include "weldx/explain/grad_cam.h"
#include "weldx/explain/lime.h"
#include "weldx/explain/model_predictor.h"
#include "weldx/explain/overlay.h"
#include "weldx/locmetric/evaluate.h"
#include "weldx/search/analysis.h"
#include "weldx/search/study.h"
#include "weldx/search/trial_runner.h"
#include "weldx/trainer/checkpoint.h"
#include "weldx/trainer/train.h"

#ifndef WELDX_VERSION
#define WELDX_VERSION "0.0.0"
#endif

namespace weldx::cli {

namespace fs = std::filesystem;

namespace {

// A retrained best trial counts as reproduced within this objective gap.
constexpr double kReproductionTolerance = 0.02;

std::atomic<bool> g_stop{false};

extern "C" void OnSignal(int) { g_stop.store(true); }

// Installs SIGINT/SIGTERM handlers for the lifetime of the guard.
class StopOnSignal {
 public:
  StopOnSignal() {
    g_stop.store(false);
    previous_int_ = std::signal(SIGINT, OnSignal);
    previous_term_ = std::signal(SIGTERM, OnSignal);
  }
  ~StopOnSignal() {
    std::signal(SIGINT, previous_int_);
    std::signal(SIGTERM, previous_term_);
  }

 private:
  void (*previous_int_)(int);
  void (*previous_term_)(int);
};

const Json& Arg(const Invocation& inv, const char* key) {
  if (!inv.args.contains(key)) {
    throw ValidationError("missing required option --" + std::string(key),
                          {{key, "required"}});
  }
  return inv.args.at(key);
}

std::string PathArg(const Invocation& inv, const char* key) {
  return Arg(inv, key).get<std::string>();
}

bool HasArg(const Invocation& inv, const char* key) { return inv.args.contains(key); }

fs::path DataRoot(const RunConfig& c) {
  if (c.data_root.empty()) {
    throw ValidationError("no dataset root", {{"data_root", "required (or --data)"}});
  }
  return c.data_root;
}

void WritePng(const fs::path& file, const cv::Mat& image) {
  if (!cv::imwrite(file.string(), image)) throw IoError("cannot write '" + file.string() + "'");
}

Json CountsJson(const dataset::DatasetManifest& m, std::optional<dataset::Split> split) {
  Json j = Json::object();
  const auto counts = m.ClassCounts(split);
  for (size_t c = 0; c < m.class_names.size(); ++c) j[m.class_names[c]] = counts[c];
  return j;
}

// load -> stratified split -> class balancing -> augmented files on disk.
dataset::DatasetManifest PrepareManifest(const RunConfig& c, std::ostream& log) {
  dataset::DatasetManifest m = dataset::LoadManifest(DataRoot(c));
  for (const auto& w : m.warnings) log << "skipped " << w.path << ": " << w.message << "\n";
  m = dataset::SplitManifest(m, c.val_fraction, c.seeds.split);
  m = dataset::BalanceClasses(m, c.seeds.balance);
  const int written = dataset::MaterializeAugmentations(m);
  if (written > 0) log << "wrote " << written << " augmented images\n";
  return m;
}

dataset::DatasetManifest ManifestFor(const Invocation& inv, std::ostream& log) {
  if (HasArg(inv, "manifest")) {
    return dataset::ReadManifest(PathArg(inv, "manifest"), DataRoot(inv.config));
  }
  return PrepareManifest(inv.config, log);
}

std::shared_ptr<const search::TrialData> LoadTrialData(const dataset::DatasetManifest& m,
                                                       const RunConfig& c) {
  return std::make_shared<const search::TrialData>(search::TrialData{
      ImageDataset::FromManifest(m, dataset::Split::kTrain, c.preprocess),
      ImageDataset::FromManifest(m, dataset::Split::kVal, c.preprocess), m.class_names,
      c.preprocess});
}

search::TorchRunnerOptions RunnerOptions(const RunConfig& c) {
  search::TorchRunnerOptions o;
  o.budget = c.budget;
  o.pretrained = c.pretrained;
  o.weights_dir = c.weights_dir;
  o.freeze_table = c.freeze_table;
  return o;
}

explain::LimeConfig LimeFor(const RunConfig& c) {
  explain::LimeConfig lime;
  lime.n_segments = c.explain.n_segments;
  lime.n_samples = c.explain.n_samples;
  lime.top_k_segments = c.explain.top_k_segments;
  return lime;
}

Json BestJson(const search::StudyEntry& e) {
  return {{"trial_id", e.config.trial_id},
          {"objective", e.result.objective},
          {"config", search::ToJson(e.config)}};
}

fs::path FileOutput(const Invocation& inv) {
  const fs::path out = PathArg(inv, "out");
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  return out;
}

fs::path ParentDir(const fs::path& file) {
  return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

CommandResult DataSynth(const Invocation& inv, std::ostream&) {
  dataset::SyntheticCorpusOptions o;
  if (HasArg(inv, "per_class")) o.per_class = inv.args["per_class"].get<int>();
  if (HasArg(inv, "size")) o.size = inv.args["size"].get<int>();
  o.seed = inv.config.seeds.split;
  const fs::path root = inv.config.output_dir;
  const dataset::SyntheticCorpus corpus = dataset::SynthesizeCorpus(root, o);
  return {{{"root", root.string()},
           {"images", corpus.images},
           {"annotations", corpus.annotations.string()}},
          root};
}

CommandResult DataPrepare(const Invocation& inv, std::ostream& log) {
  const dataset::DatasetManifest m = PrepareManifest(inv.config, log);
  const fs::path out = inv.config.output_dir;
  fs::create_directories(out);
  dataset::WriteManifest(m, out / "manifest.jsonl");
  Json warnings = Json::array();
  for (const auto& w : m.warnings) warnings.push_back({{"path", w.path}, {"message", w.message}});
  Json summary = {{"manifest", (out / "manifest.jsonl").string()},
                  {"samples", m.samples.size()},
                  {"train", CountsJson(m, dataset::Split::kTrain)},
                  {"val", CountsJson(m, dataset::Split::kVal)},
                  {"warnings", warnings}};
  WriteJsonFile(out / "dataset_summary.json", summary);
  return {summary, out};
}

CommandResult SearchRun(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  const fs::path out = c.output_dir;
  fs::create_directories(out);
  const dataset::DatasetManifest m = ManifestFor(inv, log);
  if (!HasArg(inv, "manifest")) dataset::WriteManifest(m, out / "manifest.jsonl");
  search::TorchRunnerOptions runner_options = RunnerOptions(c);
  if (HasArg(inv, "save_checkpoints") && inv.args["save_checkpoints"].get<bool>()) {
    runner_options.checkpoint_dir = out / "checkpoints";
    fs::create_directories(*runner_options.checkpoint_dir);
  }
  const search::TrialRunner runner =
      search::MakeTorchTrialRunner(LoadTrialData(m, c), runner_options);

  search::StudyOptions options;
  options.n_trials = c.search.trials;
  options.sampler = c.search.sampler;
  options.study_seed = c.seeds.study;
  options.workers = c.search.workers;
  options.log_path = out / "study.jsonl";
  if (inv.fixed_clock) options.clock = [] { return 0.0; };
  options.stop = &g_stop;
  options.on_trial = [&log, n = c.search.trials](const search::StudyEntry& e) {
    log << "trial " << e.config.trial_id << "/" << n << " " << search::Name(e.result.status)
        << " objective=" << e.result.objective << " " << search::ToJson(e.config).dump()
        << "\n";
  };
  StopOnSignal guard;
  const search::StudyLog study = search::RunStudy(c.search.space, runner, options);
  int completed = 0;
  for (const auto& e : study.trials) completed += e.result.status == search::TrialStatus::kCompleted;
  Json summary = {{"log", options.log_path->string()},
                  {"trials", study.trials.size()},
                  {"completed", completed}};
  if (completed > 0) summary["best"] = BestJson(search::BestTrial(study));
  return {summary, out};
}

CommandResult SearchBest(const Invocation& inv, std::ostream&) {
  const search::StudyLog study = search::ReadStudyLog(PathArg(inv, "log"));
  const search::StudyEntry& best = search::BestTrial(study);
  const Json line = search::StudyLineToJson(study, best);
  const fs::path out = inv.config.output_dir;
  fs::create_directories(out);
  WriteJsonFile(out / "best.json", line);
  return {line, out};
}

CommandResult SearchExport(const Invocation& inv, std::ostream&) {
  const search::StudyLog study = search::ReadStudyLog(PathArg(inv, "log"));
  const fs::path out = inv.config.output_dir;
  search::WriteAnalysis(search::ExportAnalysis(study), out);
  Json files = Json::array();
  for (const auto& entry : fs::directory_iterator(out)) {
    if (entry.path().filename() != "run.json") files.push_back(entry.path().filename().string());
  }
  std::sort(files.begin(), files.end());
  return {{{"out", out.string()}, {"files", files}}, out};
}

CommandResult TrainBest(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  const search::StudyLog study = search::ReadStudyLog(PathArg(inv, "log"));
  const search::StudyEntry& best = search::BestTrial(study);
  const fs::path out = c.output_dir;
  fs::create_directories(out);
  const dataset::DatasetManifest m = ManifestFor(inv, log);
  search::TorchRunnerOptions options = RunnerOptions(c);
  options.checkpoint_dir = out;
  log << "retraining trial " << best.config.trial_id << " "
      << search::ToJson(best.config).dump() << "\n";
  const search::TrainedTrial trained = search::TrainTrial(best.config, *LoadTrialData(m, c), options);
  const double diff = std::abs(trained.report.best_val_accuracy - best.result.objective);
  Json summary = {
      {"trial_id", best.config.trial_id},
      {"config", search::ToJson(best.config)},
      {"logged_objective", best.result.objective},
      {"reproduced_objective", trained.report.best_val_accuracy},
      {"difference", diff},
      {"reproduced", diff <= kReproductionTolerance},
      {"checkpoint", (out / CheckpointFileName(best.config.trial_id)).string()},
      {"report", ToJson(trained.report)}};
  WriteJsonFile(out / "train_best.json", summary);
  return {summary, out};
}

CommandResult Explain(const Invocation& inv, std::ostream&) {
  const RunConfig& c = inv.config;
  const std::string method = HasArg(inv, "method") ? PathArg(inv, "method") : "both";
  if (method != "gradcam" && method != "lime" && method != "both") {
    throw ValidationError("unknown explanation method", {{"method", "gradcam, lime or both"}});
  }
  const LoadedCheckpoint ckpt = LoadCheckpoint(PathArg(inv, "checkpoint"));
  const std::string image_path = PathArg(inv, "image");
  const cv::Mat image = dataset::DecodeImage(image_path);
  const torch::Tensor input = ToTensor(dataset::Preprocess(image, ckpt.info.preprocess));
  const std::vector<double> probs =
      explain::PredictProbabilities(*ckpt.model, input.unsqueeze(0))[0];
  const int predicted =
      static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  int target = predicted;
  if (HasArg(inv, "class")) {
    const std::string name = PathArg(inv, "class");
    const auto& names = ckpt.info.class_names;
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw ValidationError("unknown class '" + name + "'", {{"class", "not a checkpoint class"}});
    }
    target = static_cast<int>(it - names.begin());
  }

  const fs::path out = c.output_dir;
  fs::create_directories(out);
  Json files = Json::array();
  if (method != "lime") {
    const explain::ExplanationMap cam =
        explain::Normalized(explain::GradCam(*ckpt.model, input, target).map);
    WritePng(out / "gradcam.png", explain::RenderOverlay(image, cam, c.explain.alpha));
    explain::WriteMap(cam, image_path, out / "gradcam");
    files.insert(files.end(), {"gradcam.png", "gradcam.f32", "gradcam.json"});
  }
  if (method != "gradcam") {
    const explain::ExplanationMap lime = explain::Normalized(explain::LimeExplain(
        image, target, explain::MakeImagePredictor(*ckpt.model, ckpt.info.preprocess),
        LimeFor(c), c.seeds.explain));
    WritePng(out / "lime.png",
             explain::RenderOverlay(image, lime, c.explain.alpha, c.explain.top_k_segments));
    explain::WriteMap(lime, image_path, out / "lime");
    files.insert(files.end(), {"lime.png", "lime.f32", "lime.json"});
  }
  Json summary = {{"image", image_path},
                  {"predicted_class", ckpt.info.class_names.at(predicted)},
                  {"probabilities", probs},
                  {"explained_class", ckpt.info.class_names.at(target)},
                  {"method", method},
                  {"files", files}};
  WriteJsonFile(out / "explanation.json", summary);
  return {summary, out};
}

CommandResult LocmetricEval(const Invocation& inv, std::ostream& log) {
  const LoadedCheckpoint ckpt = LoadCheckpoint(PathArg(inv, "checkpoint"));
  const auto annotations = locmetric::ReadAnnotations(PathArg(inv, "annotations"));
  log << "scoring " << annotations.size() << " annotated images\n";
  const auto records =
      locmetric::EvaluateLocalization(ckpt, annotations, inv.config.locmetric);
  Json report = locmetric::RecallReport(records);
  report["cam_class"] = locmetric::Name(inv.config.locmetric.cam_class);
  const fs::path out = FileOutput(inv);
  WriteJsonFile(out, report);
  Json summary = {{"out", out.string()}, {"images", records.size()}};
  for (const char* key : {"average_recall", "pooled_recall", "mode", "tau"}) {
    if (report.contains(key)) summary[key] = report[key];
  }
  return {summary, ParentDir(out)};
}

ddia::AuditApi::Clock ClockFor(const Invocation& inv) {
  if (inv.fixed_clock) return [] { return int64_t{0}; };
  return NowMillis;
}

std::string ApiGet(const ddia::AuditApi& api, const std::string& path) {
  const ddia::ApiResponse r = api.Handle({"GET", path, {}, ""});
  if (r.status != 200) throw StoreError("GET " + path + " failed: " + r.body, false);
  return r.body;
}

CommandResult DdiaServe(const Invocation& inv, std::ostream& log) {
  ddia::AuditStore store(PathArg(inv, "store"));
  ddia::AuditApi api(store, ClockFor(inv));
  ddia::ServeOptions options;
  if (HasArg(inv, "host")) options.host = PathArg(inv, "host");
  if (HasArg(inv, "port")) options.port = inv.args["port"].get<int>();
  if (HasArg(inv, "cases")) options.artifact_root = PathArg(inv, "cases");
  options.on_listen = [&](int port) {
    log << "listening on http://" << options.host << ":" << port << "\n" << std::flush;
  };
  StopOnSignal guard;
  options.stop = &g_stop;
  ddia::Serve(api, options);
  return {{{"store", PathArg(inv, "store")}, {"stopped", true}}, inv.config.output_dir};
}

CommandResult DdiaReport(const Invocation& inv, std::ostream&) {
  ddia::AuditStore store(PathArg(inv, "store"));
  const Json report = Json::parse(ApiGet(ddia::AuditApi(store), "/api/report"));
  const fs::path out = FileOutput(inv);
  WriteJsonFile(out, report);
  return {report, ParentDir(out)};
}

CommandResult DdiaExport(const Invocation& inv, std::ostream&) {
  ddia::AuditStore store(PathArg(inv, "store"));
  const std::string body = ApiGet(ddia::AuditApi(store), "/api/records/export");
  const fs::path out = FileOutput(inv);
  WriteFileBytes(out, body);
  const auto lines = std::count(body.begin(), body.end(), '\n');
  return {{{"out", out.string()}, {"records", lines}}, ParentDir(out)};
}

CommandResult DdiaCreate(const Invocation& inv, std::ostream&) {
  const RunConfig& c = inv.config;
  ddia::AuditStore store(PathArg(inv, "store"));
  const LoadedCheckpoint ckpt = LoadCheckpoint(PathArg(inv, "checkpoint"));
  ddia::CaseBuildOptions options;
  options.lime = LimeFor(c);
  options.seed = c.seeds.explain;
  options.alpha = c.explain.alpha;
  options.clock = ClockFor(inv);
  const fs::path cases = PathArg(inv, "cases");
  const ddia::AuditCase created =
      ddia::CreateCase(store, ckpt, PathArg(inv, "image"), cases, options);
  return {ToJson(created), cases / created.case_id};
}

}  // namespace

std::string ResolveDevice() {
  const char* env = std::getenv("WELDX_DEVICE");
  const std::string device = env == nullptr || *env == '\0' ? "cpu" : env;
  if (device != "cpu") {
    throw ConfigError("WELDX_DEVICE=" + device +
                      " is not available; this build runs on the CPU only");
  }
  return device;
}

CommandResult Execute(const Invocation& inv, std::ostream& log) {
  using Handler = CommandResult (*)(const Invocation&, std::ostream&);
  static const std::map<std::string, Handler> kHandlers = {
      {"data synth", DataSynth},       {"data prepare", DataPrepare},
      {"search run", SearchRun},       {"search best", SearchBest},
      {"search export", SearchExport}, {"train best", TrainBest},
      {"explain", Explain},            {"locmetric eval", LocmetricEval},
      {"ddia serve", DdiaServe},       {"ddia report", DdiaReport},
      {"ddia export", DdiaExport},     {"ddia create", DdiaCreate},
  };
  const auto it = kHandlers.find(inv.command);
  if (it == kHandlers.end()) throw ConfigError("unknown command '" + inv.command + "'");
  ResolveDevice();
  return it->second(inv, log);
}

Json ProvenanceJson(const Invocation& inv, double wall_time, const std::string& status) {
  const RunConfig& c = inv.config;
  return {{"command", inv.command},
          {"args", inv.args},
          {"config", ToJson(c)},
          {"fixed_clock", inv.fixed_clock},
          {"seeds",
           {{"split", c.seeds.split},
            {"balance", c.seeds.balance},
            {"study", c.seeds.study},
            {"explain", c.seeds.explain}}},
          {"versions",
           {{"weldx", WELDX_VERSION}, {"libtorch", TORCH_VERSION}, {"opencv", CV_VERSION}}},
          {"device", ResolveDevice()},
          {"wall_time", inv.fixed_clock ? 0.0 : wall_time},
          {"status", status}};
}

Invocation InvocationFromProvenance(const Json& j) {
  if (!j.is_object() || !j.contains("command") || !j.contains("config")) {
    throw ConfigError("not a run.json provenance file");
  }
  Invocation inv;
  inv.command = j["command"].get<std::string>();
  inv.config = RunConfigFromJson(j["config"]);
  if (j.contains("args")) inv.args = j["args"];
  inv.fixed_clock = j.value("fixed_clock", false);
  return inv;
}

Json ErrorJson(const std::exception& e) {
  Json err = {{"kind", "error"}, {"message", e.what()}, {"fields", Json::array()}};
  if (const auto* w = dynamic_cast<const Error*>(&e)) err["kind"] = w->kind();
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    for (const FieldError& f : v->fields()) {
      err["fields"].push_back({{"field", f.field}, {"message", f.message}});
    }
  }
  return {{"error", err}};
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const search::StudyInterrupted*>(&e)) return kExitInterrupted;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ValidationError*>(&e)) {
    return kExitUsage;
  }
  return kExitFailure;
}

}  // namespace weldx::cli
