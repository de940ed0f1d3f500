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

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weldx/cli/cli.h"
#include "weldx/common/error.h"

namespace weldx::cli {

namespace fs = std::filesystem;

namespace {

using Apply = std::function<void(RunConfig&, Json&)>;

// Flags of one subcommand. Config overrides and command inputs are bound
// to storage owned here and applied after parsing, only when given.
class CommandSpec {
 public:
  CommandSpec(CLI::App* app, std::string command) : app_(app), command_(std::move(command)) {}

  template <typename T>
  void Override(const std::string& flag, const std::string& help,
                std::function<void(RunConfig&, const T&)> apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(flag, *value, help);
    apply_.push_back([opt, value, apply](RunConfig& c, Json&) {
      if (opt->count() > 0) apply(c, *value);
    });
  }

  template <typename T>
  void Input(const std::string& flag, const std::string& key, const std::string& help,
             bool required = false) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(flag, *value, help);
    if (required) opt->required();
    apply_.push_back([opt, value, key](RunConfig&, Json& args) {
      if (opt->count() > 0) args[key] = *value;
    });
  }

  void Switch(const std::string& flag, const std::string& key, const std::string& help) {
    CLI::Option* opt = app_->add_flag(flag, help);
    apply_.push_back([opt, key](RunConfig&, Json& args) {
      if (opt->count() > 0) args[key] = true;
    });
  }

  void OutputDir(bool required) {
    Override<std::string>("--out", "output directory",
                          [](RunConfig& c, const std::string& v) { c.output_dir = v; });
    if (required) app_->get_option("--out")->required();
  }

  void DataRoot() {
    Override<std::string>("--data", "dataset root with one directory per class",
                          [](RunConfig& c, const std::string& v) { c.data_root = v; });
  }

  void Budget() {
    Override<int>("--max-epochs", "epoch budget per trial",
                  [](RunConfig& c, const int& v) { c.budget.max_epochs = v; });
    Override<int>("--patience", "early-stopping patience",
                  [](RunConfig& c, const int& v) { c.budget.patience = v; });
    Override<int>("--image-size", "square model input size", [](RunConfig& c, const int& v) {
      c.preprocess.target_height = v;
      c.preprocess.target_width = v;
    });
    Override<std::string>("--weights-dir", "directory of converted pretrained weights",
                          [](RunConfig& c, const std::string& v) {
                            c.weights_dir = v;
                            c.pretrained = true;
                          });
  }

  void Resolve(RunConfig& config, Json& args) const {
    for (const Apply& a : apply_) a(config, args);
  }

  CLI::App* app() const { return app_; }
  const std::string& command() const { return command_; }

 private:
  CLI::App* app_;
  std::string command_;
  std::vector<Apply> apply_;
};

void DefineCommands(CLI::App& app, std::vector<std::unique_ptr<CommandSpec>>& specs) {
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help,
                 const std::string& command) {
    specs.push_back(std::make_unique<CommandSpec>(parent->add_subcommand(name, help), command));
    return specs.back().get();
  };
  auto seed = [](CommandSpec* s, const std::string& help, uint64_t Seeds::*field) {
    s->Override<uint64_t>("--seed", help,
                          [field](RunConfig& c, const uint64_t& v) { c.seeds.*field = v; });
  };

  CLI::App* data = app.add_subcommand("data", "dataset preparation");
  data->require_subcommand(1);
  {
    CommandSpec* s = add(data, "synth", "write a small synthetic radiograph corpus", "data synth");
    s->OutputDir(true);
    s->Input<int>("--per-class", "per_class", "images per class");
    s->Input<int>("--size", "size", "image side length in pixels");
    seed(s, "generator seed", &Seeds::split);
  }
  {
    CommandSpec* s = add(data, "prepare", "index, split and balance a corpus", "data prepare");
    s->DataRoot();
    s->OutputDir(false);
    s->Override<double>("--val-fraction", "validation share per class",
                        [](RunConfig& c, const double& v) { c.val_fraction = v; });
    s->Override<uint64_t>("--split-seed", "stratified split seed",
                          [](RunConfig& c, const uint64_t& v) { c.seeds.split = v; });
    s->Override<uint64_t>("--balance-seed", "augmentation seed",
                          [](RunConfig& c, const uint64_t& v) { c.seeds.balance = v; });
  }

  CLI::App* search = app.add_subcommand("search", "hyperparameter search");
  search->require_subcommand(1);
  {
    CommandSpec* s = add(search, "run", "run or resume a study", "search run");
    s->DataRoot();
    s->Input<std::string>("--manifest", "manifest", "prepared manifest.jsonl");
    s->OutputDir(false);
    s->Override<int>("--trials", "total number of trials",
                     [](RunConfig& c, const int& v) { c.search.trials = v; });
    s->Override<std::string>("--sampler", "random or adaptive",
                             [](RunConfig& c, const std::string& v) {
                               c.search.sampler = search::ParseSampler(v);
                             });
    s->Override<int>("--workers", "concurrent trials",
                     [](RunConfig& c, const int& v) { c.search.workers = v; });
    seed(s, "study seed", &Seeds::study);
    s->Budget();
    s->Switch("--save-checkpoints", "save_checkpoints", "keep every trial's weights");
  }
  {
    CommandSpec* s = add(search, "best", "best completed trial of a study", "search best");
    s->Input<std::string>("--log", "log", "study.jsonl", true);
    s->OutputDir(false);
  }
  {
    CommandSpec* s = add(search, "export", "analysis tables of a study", "search export");
    s->Input<std::string>("--log", "log", "study.jsonl", true);
    s->OutputDir(true);
  }

  CLI::App* train = app.add_subcommand("train", "model training");
  train->require_subcommand(1);
  {
    CommandSpec* s = add(train, "best", "retrain the best trial of a study", "train best");
    s->Input<std::string>("--log", "log", "study.jsonl", true);
    s->DataRoot();
    s->Input<std::string>("--manifest", "manifest", "prepared manifest.jsonl");
    s->OutputDir(false);
    s->Budget();
  }

  {
    CommandSpec* s = add(&app, "explain", "Grad-CAM and LIME explanations of one image", "explain");
    s->Input<std::string>("--method", "method", "gradcam, lime or both");
    s->Input<std::string>("--image", "image", "input image", true);
    s->Input<std::string>("--checkpoint", "checkpoint", "trained checkpoint", true);
    s->Input<std::string>("--class", "class", "class to explain (default: predicted)");
    s->OutputDir(false);
    seed(s, "LIME sampling seed", &Seeds::explain);
    s->Override<int>("--n-segments", "LIME superpixels",
                     [](RunConfig& c, const int& v) { c.explain.n_segments = v; });
    s->Override<int>("--n-samples", "LIME perturbations",
                     [](RunConfig& c, const int& v) { c.explain.n_samples = v; });
  }

  CLI::App* loc = app.add_subcommand("locmetric", "localization recall");
  loc->require_subcommand(1);
  {
    CommandSpec* s = add(loc, "eval", "recall of annotated defect regions", "locmetric eval");
    s->Input<std::string>("--checkpoint", "checkpoint", "trained checkpoint", true);
    s->Input<std::string>("--annotations", "annotations", "annotations.jsonl", true);
    s->Input<std::string>("--out", "out", "report file", true);
    s->Override<std::string>("--mode", "soft or binary", [](RunConfig& c, const std::string& v) {
      c.locmetric.mode = locmetric::ParseRecallMode(v);
    });
    s->Override<double>("--tau", "binarization threshold",
                        [](RunConfig& c, const double& v) { c.locmetric.tau = v; });
    s->Override<std::string>("--class", "annotated or predicted",
                             [](RunConfig& c, const std::string& v) {
                               c.locmetric.cam_class = locmetric::ParseCamClass(v);
                             });
  }

  CLI::App* ddia = app.add_subcommand("ddia", "audit service");
  ddia->require_subcommand(1);
  {
    CommandSpec* s = add(ddia, "serve", "serve the audit API", "ddia serve");
    s->Input<std::string>("--store", "store", "audit database", true);
    s->Input<std::string>("--cases", "cases", "case artifact directory");
    s->Input<int>("--port", "port", "TCP port (0 picks one)");
    s->Input<std::string>("--host", "host", "bind address");
  }
  {
    CommandSpec* s = add(ddia, "report", "aggregate audit report", "ddia report");
    s->Input<std::string>("--store", "store", "audit database", true);
    s->Input<std::string>("--out", "out", "report file", true);
  }
  {
    CommandSpec* s = add(ddia, "export", "every submitted record as JSON lines", "ddia export");
    s->Input<std::string>("--store", "store", "audit database", true);
    s->Input<std::string>("--out", "out", "records file", true);
  }
  {
    CommandSpec* s = add(ddia, "create", "queue one image for audit", "ddia create");
    s->Input<std::string>("--store", "store", "audit database", true);
    s->Input<std::string>("--cases", "cases", "case artifact directory", true);
    s->Input<std::string>("--checkpoint", "checkpoint", "trained checkpoint", true);
    s->Input<std::string>("--image", "image", "input image", true);
    seed(s, "LIME sampling seed", &Seeds::explain);
  }
}

const CommandSpec* Selected(const std::vector<std::unique_ptr<CommandSpec>>& specs) {
  for (const auto& s : specs) {
    if (s->app()->parsed()) return s.get();
  }
  return nullptr;
}

void WriteProvenance(const fs::path& dir, const Json& run) {
  fs::create_directories(dir);
  WriteJsonFile(dir / "run.json", run);
}

}  // namespace

int Main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Weld radiograph classification, explanation and audit toolkit", "weldx");
  app.require_subcommand(1);
  std::string config_file;
  bool fixed_clock = false;
  app.add_option("--config", config_file, "JSON run config or a previous run.json")
      ->check(CLI::ExistingFile);
  app.add_flag("--fixed-clock", fixed_clock, "zero wall-clock fields for byte-stable output");
  app.fallthrough();
  std::vector<std::unique_ptr<CommandSpec>> specs;
  DefineCommands(app, specs);
  std::string rerun_file;
  CLI::App* rerun = app.add_subcommand("rerun", "repeat the command recorded in a run.json");
  rerun->add_option("run_json", rerun_file, "run.json")->required()->check(CLI::ExistingFile);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* failed = &app;
    for (const auto& s : specs) {
      if (s->app()->parsed()) failed = s->app();
    }
    err << ErrorJson(ConfigError(e.what())).dump() << "\n" << failed->help();
    return kExitUsage;
  }

  Invocation inv;
  try {
    if (rerun->parsed()) {
      inv = InvocationFromProvenance(ReadJsonFile(rerun_file));
      inv.fixed_clock = inv.fixed_clock || fixed_clock;
    } else {
      const CommandSpec* spec = Selected(specs);
      if (spec == nullptr) throw ConfigError("no command given");
      inv.command = spec->command();
      if (!config_file.empty()) inv.config = LoadRunConfig(config_file);
      spec->Resolve(inv.config, inv.args);
      inv.config.Validate();
      inv.fixed_clock = fixed_clock;
    }
  } catch (const std::exception& e) {
    err << ErrorJson(e).dump() << "\n";
    return ExitCodeFor(e);
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    const CommandResult result = Execute(inv, err);
    WriteProvenance(result.output_dir, ProvenanceJson(inv, elapsed(), "ok"));
    out << result.summary.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    const int code = ExitCodeFor(e);
    err << ErrorJson(e).dump() << "\n";
    // Interrupted and failed studies still record how they were started.
    if (fs::is_directory(inv.config.output_dir)) {
      try {
        Json run = ProvenanceJson(inv, elapsed(),
                                  code == kExitInterrupted ? "interrupted" : "failed");
        run["error"] = ErrorJson(e)["error"];
        WriteProvenance(inv.config.output_dir, run);
      } catch (const std::exception&) {
      }
    }
    return code;
  }
}

}  // namespace weldx::cli
