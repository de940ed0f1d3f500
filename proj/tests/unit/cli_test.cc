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

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "weldx/cli/cli.h"
#include "weldx/cli/run_config.h"
#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"
#include "weldx/search/study.h"

namespace weldx::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  Json summary() const { return Json::parse(out); }
};

Outcome Weldx(std::vector<std::string> args) {
  args.insert(args.begin(), "weldx");
  std::ostringstream out, err;
  Outcome o;
  o.code = Main(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string Bytes(const fs::path& file) { return ReadFileBytes(file); }

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(fs::temp_directory_path() /
                         ("weldx-cli-" + std::to_string(::getpid())));
    fs::remove_all(*root_);
    fs::create_directories(*root_);
    const Outcome synth = Weldx({"data", "synth", "--out", Dir("corpus"), "--per-class", "10",
                               "--size", "40", "--seed", "3"});
    ASSERT_EQ(synth.code, 0) << synth.err;
    WriteJsonFile(*root_ / "small.json", Json::parse(R"({
      "preprocess": {"target_size": [40, 40]},
      "search": {"space": {"architectures": ["shufflenet_v2_x0_5", "squeezenet1_0"],
                           "batch_sizes": [8]}},
      "budget": {"max_epochs": 2, "patience": 2},
      "explain": {"n_segments": 8, "n_samples": 40}
    })"));
  }
  static void TearDownTestSuite() {
    fs::remove_all(*root_);
    delete root_;
  }

  static std::string Dir(const std::string& name) { return (*root_ / name).string(); }
  static std::string Config() { return Dir("small.json"); }

  // One-trial study in `name`; returns the outcome.
  static Outcome Study(const std::string& name, int trials = 1,
                       const std::vector<std::string>& extra = {}) {
    std::vector<std::string> args = {"--config", Config(), "--fixed-clock", "search", "run",
                                     "--data", Dir("corpus"), "--out", Dir(name),
                                     "--trials", std::to_string(trials), "--seed", "5"};
    args.insert(args.end(), extra.begin(), extra.end());
    return Weldx(args);
  }

  static inline fs::path* root_ = nullptr;
};

TEST_F(CliTest, SynthWritesCorpusAndAnnotations) {
  for (const char* cls : {"crack", "lack_of_penetration", "no_defect", "porosity"}) {
    EXPECT_TRUE(fs::is_directory(*root_ / "corpus" / cls)) << cls;
  }
  EXPECT_EQ(ReadJsonLines(*root_ / "corpus" / "annotations.jsonl").size(), 30u);
}

TEST_F(CliTest, OneTrialStudyWritesOneLogLine) {
  const Outcome o = Study("one");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(ReadJsonLines(*root_ / "one" / "study.jsonl").size(), 1u);
  EXPECT_TRUE(fs::exists(*root_ / "one" / "manifest.jsonl"));
  EXPECT_EQ(o.summary()["trials"], 1);

  const Json run = ReadJsonFile(*root_ / "one" / "run.json");
  EXPECT_EQ(run["command"], "search run");
  EXPECT_EQ(run["status"], "ok");
  EXPECT_EQ(run["seeds"]["study"], 5);
  EXPECT_EQ(run["config"]["search"]["trials"], 1);
  EXPECT_EQ(run["config"]["budget"]["max_epochs"], 2);
  EXPECT_EQ(run["wall_time"], 0.0);
  EXPECT_EQ(run["device"], "cpu");
  for (const char* key : {"weldx", "libtorch", "opencv"}) {
    EXPECT_TRUE(run["versions"].contains(key)) << key;
  }
}

TEST_F(CliTest, StudyIsByteStableAndResumable) {
  ASSERT_EQ(Study("stable_a", 2).code, 0);
  ASSERT_EQ(Study("stable_b", 2).code, 0);
  EXPECT_EQ(Bytes(*root_ / "stable_a" / "study.jsonl"), Bytes(*root_ / "stable_b" / "study.jsonl"));

  // Resuming a one-trial log to two trials matches the uninterrupted run.
  ASSERT_EQ(Study("resumed", 1).code, 0);
  ASSERT_EQ(Study("resumed", 2).code, 0);
  EXPECT_EQ(Bytes(*root_ / "resumed" / "study.jsonl"), Bytes(*root_ / "stable_a" / "study.jsonl"));
}

TEST_F(CliTest, RunJsonReproducesTheCommand) {
  ASSERT_EQ(Study("original", 1).code, 0);
  const std::string log = Bytes(*root_ / "original" / "study.jsonl");
  fs::remove(*root_ / "original" / "study.jsonl");
  const Outcome o = Weldx({"rerun", Dir("original/run.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(Bytes(*root_ / "original" / "study.jsonl"), log);
}

TEST_F(CliTest, TrainBestReproducesLoggedObjective) {
  ASSERT_EQ(Study("for_train", 2).code, 0);
  const Outcome o = Weldx({"--config", Config(), "train", "best", "--log",
                         Dir("for_train/study.jsonl"), "--manifest",
                         Dir("for_train/manifest.jsonl"), "--data", Dir("corpus"), "--out",
                         Dir("trained")});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json s = o.summary();
  EXPECT_LE(s["difference"].get<double>(), 0.02);
  EXPECT_TRUE(s["reproduced"].get<bool>());
  EXPECT_TRUE(fs::exists(s["checkpoint"].get<std::string>()));
  EXPECT_TRUE(fs::exists(*root_ / "trained" / "train_best.json"));

  const Outcome best = Weldx({"search", "best", "--log", Dir("for_train/study.jsonl"), "--out",
                            Dir("best")});
  ASSERT_EQ(best.code, 0) << best.err;
  EXPECT_EQ(best.summary()["config"]["trial_id"], s["trial_id"]);

  const Outcome exported = Weldx({"search", "export", "--log", Dir("for_train/study.jsonl"),
                                "--out", Dir("analysis")});
  ASSERT_EQ(exported.code, 0) << exported.err;
  EXPECT_TRUE(fs::exists(*root_ / "analysis" / "mode_boxplot.csv"));

  // Explanations, localization and the audit flow on the trained model.
  const std::string ckpt = s["checkpoint"].get<std::string>();
  const std::string image = Dir("corpus/crack/crack_0001.png");
  const Outcome e1 = Weldx({"--config", Config(), "explain", "--method", "both", "--image", image,
                          "--checkpoint", ckpt, "--out", Dir("explain_a")});
  const Outcome e2 = Weldx({"--config", Config(), "explain", "--method", "both", "--image", image,
                          "--checkpoint", ckpt, "--out", Dir("explain_b")});
  ASSERT_EQ(e1.code, 0) << e1.err;
  ASSERT_EQ(e2.code, 0) << e2.err;
  for (const char* f : {"gradcam.png", "lime.png", "gradcam.f32", "lime.f32"}) {
    EXPECT_EQ(Bytes(*root_ / "explain_a" / f), Bytes(*root_ / "explain_b" / f)) << f;
  }
  EXPECT_EQ(e1.summary()["files"].size(), 6u);

  const Outcome loc = Weldx({"locmetric", "eval", "--checkpoint", ckpt, "--annotations",
                           Dir("corpus/annotations.jsonl"), "--mode", "soft", "--out",
                           Dir("loc/recall_report.json")});
  ASSERT_EQ(loc.code, 0) << loc.err;
  const Json report = ReadJsonFile(*root_ / "loc" / "recall_report.json");
  EXPECT_EQ(report["mode"], "soft");
  EXPECT_EQ(report["cam_class"], "annotated");
  EXPECT_EQ(loc.summary()["images"], 30);
  EXPECT_TRUE(fs::exists(*root_ / "loc" / "run.json"));

  const Outcome created = Weldx({"--config", Config(), "ddia", "create", "--store",
                               Dir("audits.db"), "--cases", Dir("cases"), "--checkpoint", ckpt,
                               "--image", image});
  ASSERT_EQ(created.code, 0) << created.err;
  EXPECT_EQ(created.summary()["status"], "pending");
  const Outcome rep = Weldx({"ddia", "report", "--store", Dir("audits.db"), "--out",
                           Dir("audit/report.json")});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.summary()["record_count"], 0);
  const Outcome exp = Weldx({"ddia", "export", "--store", Dir("audits.db"), "--out",
                           Dir("audit/records.jsonl")});
  ASSERT_EQ(exp.code, 0) << exp.err;
  EXPECT_EQ(exp.summary()["records"], 0);
}

TEST_F(CliTest, UnknownFlagPrintsUsage) {
  const Outcome o = Weldx({"search", "run", "--no-such-flag"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("Usage:"), std::string::npos);
  EXPECT_NE(o.err.find("--trials"), std::string::npos);
  EXPECT_EQ(Weldx({}).code, kExitUsage);
  EXPECT_EQ(Weldx({"--help"}).code, kExitOk);
}

TEST_F(CliTest, InvalidConfigReportsFields) {
  WriteJsonFile(*root_ / "bad.json",
                Json::parse(R"({"search": {"trials": "many", "extra": 1}, "colour": "red"})"));
  const Outcome o = Weldx({"--config", Dir("bad.json"), "search", "best", "--log", "x"});
  EXPECT_EQ(o.code, kExitUsage);
  const Json err = Json::parse(o.err);
  EXPECT_EQ(err["error"]["kind"], "validation_error");
  std::vector<std::string> fields;
  for (const Json& f : err["error"]["fields"]) fields.push_back(f["field"]);
  EXPECT_EQ(fields, (std::vector<std::string>{"search.trials", "search.extra", "colour"}));
}

TEST_F(CliTest, BadFlagValueIsUsageError) {
  EXPECT_EQ(Weldx({"search", "run", "--data", Dir("corpus"), "--sampler", "grid"}).code,
            kExitUsage);
  EXPECT_EQ(Weldx({"search", "run", "--data", Dir("corpus"), "--trials", "0"}).code, kExitUsage);
}

TEST_F(CliTest, MissingInputIsRuntimeFailure) {
  const Outcome o = Weldx({"search", "best", "--log", Dir("nope.jsonl")});
  EXPECT_EQ(o.code, kExitFailure);
  EXPECT_EQ(Json::parse(o.err)["error"]["kind"], "io_error");
}

TEST_F(CliTest, DeviceVariable) {
  ::setenv("WELDX_DEVICE", "cuda:0", 1);
  const Outcome o = Weldx({"search", "best", "--log", Dir("nope.jsonl")});
  ::unsetenv("WELDX_DEVICE");
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("WELDX_DEVICE"), std::string::npos);
}

TEST(ExitCodeTest, InterruptedStudyIsDistinct) {
  EXPECT_EQ(ExitCodeFor(search::StudyInterrupted("stopped")), kExitInterrupted);
  EXPECT_EQ(ExitCodeFor(ConfigError("x")), kExitUsage);
  EXPECT_EQ(ExitCodeFor(NonFiniteLossError("x")), kExitFailure);
  EXPECT_EQ(ExitCodeFor(std::runtime_error("x")), kExitFailure);
}

TEST(RunConfigTest, RoundTripsThroughJson) {
  RunConfig c;
  c.data_root = "data";
  c.search.trials = 7;
  c.search.sampler = search::SamplerKind::kRandom;
  c.seeds.study = 99;
  c.locmetric.mode = locmetric::RecallMode::kSoft;
  c.preprocess.target_height = 96;
  const RunConfig back = RunConfigFromJson(ToJson(c));
  EXPECT_EQ(ToJson(back), ToJson(c));
  EXPECT_EQ(back.seeds, c.seeds);
  EXPECT_EQ(RunConfigFromJson(Json::object()).search.trials, 50);
}

TEST(RunConfigTest, CollectsEveryProblem) {
  try {
    RunConfigFromJson(Json::parse(
        R"({"val_fraction": 2, "seeds": {"study": -1}, "budget": {"patience": 0},
            "locmetric": {"mode": "fuzzy"}})"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    std::vector<std::string> fields;
    for (const auto& f : e.fields()) fields.push_back(f.field);
    EXPECT_EQ(fields, (std::vector<std::string>{"seeds.study", "locmetric.mode"}));
  }
  try {
    RunConfigFromJson(Json::parse(R"({"val_fraction": 2, "budget": {"patience": 0}})"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    std::vector<std::string> fields;
    for (const auto& f : e.fields()) fields.push_back(f.field);
    EXPECT_EQ(fields, (std::vector<std::string>{"val_fraction", "budget.patience"}));
  }
}

}  // namespace
}  // namespace weldx::cli
