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

#ifndef WELDX_CLI_RUN_CONFIG_H_
#define WELDX_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "weldx/common/jsonl.h"
#include "weldx/dataset/preprocess.h"
#include "weldx/locmetric/evaluate.h"
#include "weldx/search/space.h"
#include "weldx/trainer/early_stopping.h"
#include "weldx/trainer/model.h"

namespace weldx::cli {

struct Seeds {
  uint64_t split = 0;
  uint64_t balance = 0;
  uint64_t study = 0;
  uint64_t explain = 0;
  bool operator==(const Seeds&) const = default;
};

struct SearchSettings {
  search::SearchSpace space;
  int trials = 50;
  search::SamplerKind sampler = search::SamplerKind::kAdaptive;
  int workers = 1;
};

struct ExplainSettings {
  int n_segments = 50;
  int n_samples = 1000;
  int top_k_segments = 5;
  double alpha = 0.5;
};

// Declarative settings shared by all subcommands. Every key is optional;
// omitted keys keep the defaults below.
//
//   {
//     "data_root": "data/radiographs",
//     "output_dir": "runs/study1",
//     "val_fraction": 0.2,
//     "preprocess": {"target_size": [224, 224], "mean": [...], "std": [...],
//                    "grayscale_to_rgb": true},
//     "search": {"space": {...}, "trials": 50, "sampler": "adaptive",
//                "workers": 1},
//     "budget": {"max_epochs": 100, "patience": 5},
//     "model": {"pretrained": false, "weights_dir": "",
//               "freeze_table": {"resnet18": ["conv1", ...]}},
//     "explain": {"n_segments": 50, "n_samples": 1000,
//                 "top_k_segments": 5, "alpha": 0.5},
//     "locmetric": {"mode": "binary", "tau": 0.5, "class": "annotated"},
//     "seeds": {"split": 0, "balance": 0, "study": 0, "explain": 0}
//   }
struct RunConfig {
  std::filesystem::path data_root;
  std::filesystem::path output_dir = "weldx-out";
  double val_fraction = 0.2;
  dataset::PreprocessSpec preprocess;
  SearchSettings search;
  EarlyStoppingOptions budget;
  bool pretrained = false;
  std::filesystem::path weights_dir;
  FreezeTable freeze_table = DefaultFreezeTable();
  ExplainSettings explain;
  locmetric::LocalizationOptions locmetric;
  Seeds seeds;

  // ValidationError with one FieldError per offending key.
  void Validate() const;
};

// Strict: unknown keys and ill-typed values are collected and reported
// together as a ValidationError with dotted field names.
RunConfig RunConfigFromJson(const Json& j);
// Fully resolved form; RunConfigFromJson(ToJson(c)) == c.
Json ToJson(const RunConfig& config);

// Reads a config file. A run.json provenance file is accepted too, in which
// case its resolved "config" object is used.
RunConfig LoadRunConfig(const std::filesystem::path& file);

}  // namespace weldx::cli

#endif  // WELDX_CLI_RUN_CONFIG_H_
