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

#include "weldx/trainer/checkpoint.h"

#include <fstream>
#include <iterator>

#include "weldx/common/error.h"

namespace weldx {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFormat = "weldx.checkpoint.v1";

}  // namespace

std::string CheckpointFileName(int64_t trial_id) {
  return "trial_" + std::to_string(trial_id) + ".ckpt";
}

void SaveCheckpoint(const fs::path& file, const ClassifierNet& model,
                    const CheckpointInfo& info) {
  Json meta;
  meta["arch"] = Name(info.arch);
  meta["num_classes"] = model.num_classes();
  meta["class_names"] = info.class_names;
  meta["preprocess"] = dataset::ToJson(info.preprocess);
  meta["config"] = info.config;
  meta["report"] = ToJson(info.report);

  c10::Dict<std::string, torch::Tensor> state;
  for (const auto& [name, t] : StateDict(model)) {
    state.insert(name, t.detach().cpu().contiguous());
  }
  c10::impl::GenericDict root(c10::StringType::get(), c10::AnyType::get());
  root.insert("format", std::string(kFormat));
  root.insert("info", meta.dump());
  root.insert("state", state);
  const std::vector<char> bytes = torch::pickle_save(root);
  WriteFileBytes(file, std::string(bytes.begin(), bytes.end()));
}

LoadedCheckpoint LoadCheckpoint(const fs::path& file) {
  const std::string raw = ReadFileBytes(file);
  c10::IValue value;
  try {
    value = torch::pickle_load(std::vector<char>(raw.begin(), raw.end()));
  } catch (const c10::Error& e) {
    throw ConfigError("'" + file.string() + "' is not a checkpoint: " +
                      e.what_without_backtrace());
  }
  if (!value.isGenericDict()) {
    throw ConfigError("'" + file.string() + "' is not a checkpoint");
  }
  const auto dict = value.toGenericDict();
  if (!dict.contains("format") || !dict.at("format").isString() ||
      dict.at("format").toStringRef() != kFormat || !dict.contains("info") ||
      !dict.contains("state")) {
    throw ConfigError("'" + file.string() + "' is not a " + kFormat + " archive");
  }
  Json meta;
  try {
    meta = Json::parse(dict.at("info").toStringRef());
  } catch (const Json::exception& e) {
    throw ConfigError("checkpoint metadata is malformed: " + std::string(e.what()));
  }
  LoadedCheckpoint out;
  try {
    out.info.arch = ParseArchitecture(meta.at("arch").get<std::string>());
    out.info.class_names = meta.at("class_names").get<std::vector<std::string>>();
    out.info.preprocess = dataset::PreprocessSpecFromJson(meta.at("preprocess"));
    out.info.config = meta.at("config");
    out.info.report = TrainReportFromJson(meta.at("report"));
    ModelOptions options;
    options.num_classes = meta.at("num_classes").get<int>();
    out.model = BuildModel(out.info.arch, options);
  } catch (const Json::exception& e) {
    throw ConfigError("checkpoint metadata is malformed: " + std::string(e.what()));
  }
  std::map<std::string, torch::Tensor> state;
  for (const auto& kv : dict.at("state").toGenericDict()) {
    state[kv.key().toStringRef()] = kv.value().toTensor();
  }
  LoadStateDict(*out.model, state);
  out.model->eval();
  return out;
}

}  // namespace weldx
