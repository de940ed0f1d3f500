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

#include "weldx/trainer/model.h"

#include <fstream>
#include <iterator>
#include <set>

#include "weldx/common/error.h"

namespace weldx {

namespace fs = std::filesystem;

bool HasPrefix(const std::string& name, const std::string& prefix) {
  return name == prefix ||
         (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0 &&
          name[prefix.size()] == '.');
}

namespace {

bool MatchesAny(const std::string& name, const std::vector<std::string>& prefixes) {
  for (const std::string& p : prefixes) {
    if (HasPrefix(name, p)) return true;
  }
  return false;
}

std::vector<std::string> Features(std::initializer_list<int> indices) {
  std::vector<std::string> out;
  for (int i : indices) out.push_back("features." + std::to_string(i));
  return out;
}

}  // namespace

bool IsHeadParameter(const ClassifierNet& model, const std::string& name) {
  return MatchesAny(name, model.HeadPrefixes());
}

const FreezeTable& DefaultFreezeTable() {
  static const FreezeTable table = {
      {ArchitectureId::kResnet18, {"conv1", "bn1", "layer1", "layer2"}},
      {ArchitectureId::kWideResnet50_2, {"conv1", "bn1", "layer1", "layer2"}},
      {ArchitectureId::kDensenet121,
       {"features.conv0", "features.norm0", "features.denseblock1",
        "features.transition1", "features.denseblock2", "features.transition2"}},
      {ArchitectureId::kEfficientnetB0, Features({0, 1, 2, 3, 4})},
      {ArchitectureId::kEfficientnetV2S, Features({0, 1, 2, 3})},
      {ArchitectureId::kMobilenetV2, Features({0, 1, 2, 3, 4, 5, 6, 7, 8, 9})},
      {ArchitectureId::kShufflenetV2X0_5, {"conv1", "stage2", "stage3"}},
      {ArchitectureId::kSqueezenet1_0, Features({0, 3, 4, 5, 7})},
  };
  return table;
}

FreezeTable FreezeTableFromJson(const Json& j) {
  if (!j.is_object()) throw ConfigError("freeze table must be a JSON object");
  FreezeTable table = DefaultFreezeTable();
  for (const auto& [arch, prefixes] : j.items()) {
    const ArchitectureId id = ParseArchitecture(arch);
    if (!prefixes.is_array()) {
      throw ConfigError("freeze table entry '" + arch + "' must be a list of prefixes");
    }
    std::vector<std::string> list;
    for (const Json& p : prefixes) {
      if (!p.is_string()) {
        throw ConfigError("freeze table entry '" + arch + "' holds a non-string");
      }
      list.push_back(p.get<std::string>());
    }
    table[id] = std::move(list);
  }
  return table;
}

Json ToJson(const FreezeTable& table) {
  Json j = Json::object();
  for (const auto& [arch, prefixes] : table) j[std::string(Name(arch))] = prefixes;
  return j;
}

void ApplyTransferMode(ClassifierNet& model, ArchitectureId arch,
                       TransferMode mode, const FreezeTable& table) {
  std::vector<std::string> frozen;
  if (mode == TransferMode::kFreezeEarlyLayers) {
    auto it = table.find(arch);
    if (it == table.end()) {
      throw ConfigError("freeze table has no entry for " + std::string(Name(arch)));
    }
    frozen = it->second;
  }
  for (auto& p : model.named_parameters(true)) {
    bool trainable = true;
    switch (mode) {
      case TransferMode::kFineTuneAll:
        trainable = true;
        break;
      case TransferMode::kFreezeAll:
        trainable = IsHeadParameter(model, p.key());
        break;
      case TransferMode::kFreezeEarlyLayers:
        trainable = !MatchesAny(p.key(), frozen);
        break;
    }
    p.value().set_requires_grad(trainable);
  }
}

ParameterCounts CountParameters(const ClassifierNet& model) {
  ParameterCounts c;
  for (const auto& p : model.named_parameters(true)) {
    const int64_t n = p.value().numel();
    c.total += n;
    if (p.value().requires_grad()) c.trainable += n;
    if (IsHeadParameter(model, p.key())) c.head += n;
  }
  return c;
}

std::vector<torch::Tensor> TrainableParameters(const ClassifierNet& model) {
  std::vector<torch::Tensor> out;
  for (const auto& p : model.parameters(true)) {
    if (p.requires_grad()) out.push_back(p);
  }
  return out;
}

void SetTrainingMode(ClassifierNet& model) {
  model.train(true);
  for (auto& m : model.modules(false)) {
    if (auto* bn = m->as<torch::nn::BatchNorm2d>()) {
      bool any_trainable = false;
      for (const auto& p : bn->parameters(false)) any_trainable |= p.requires_grad();
      if (!any_trainable) bn->eval();
    }
  }
}

std::map<std::string, torch::Tensor> StateDict(const ClassifierNet& model) {
  std::map<std::string, torch::Tensor> out;
  for (const auto& p : model.named_parameters(true)) out[p.key()] = p.value();
  for (const auto& b : model.named_buffers(true)) out[b.key()] = b.value();
  return out;
}

void LoadStateDict(ClassifierNet& model,
                   const std::map<std::string, torch::Tensor>& state,
                   const std::vector<std::string>& skip_prefixes) {
  torch::NoGradGuard no_grad;
  std::set<std::string> used;
  for (auto& [name, target] : StateDict(model)) {
    if (MatchesAny(name, skip_prefixes)) continue;
    auto it = state.find(name);
    if (it == state.end()) throw ConfigError("weights are missing '" + name + "'");
    if (it->second.sizes() != target.sizes()) {
      std::ostringstream ss;
      ss << "shape mismatch for '" << name << "': expected " << target.sizes()
         << ", got " << it->second.sizes();
      throw ConfigError(ss.str());
    }
    target.copy_(it->second);
    used.insert(name);
  }
  for (const auto& [name, tensor] : state) {
    if (!used.count(name) && !MatchesAny(name, skip_prefixes)) {
      throw ConfigError("unexpected tensor '" + name + "' in weights");
    }
  }
}

std::map<std::string, torch::Tensor> ReadTensorDict(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  c10::IValue value;
  try {
    value = torch::pickle_load(bytes);
  } catch (const c10::Error& e) {
    throw ConfigError("cannot read tensors from '" + file.string() +
                      "': " + e.what_without_backtrace());
  }
  if (!value.isGenericDict()) {
    throw ConfigError("'" + file.string() + "' does not hold a {name: tensor} dict");
  }
  std::map<std::string, torch::Tensor> out;
  for (const auto& kv : value.toGenericDict()) {
    if (!kv.key().isString() || !kv.value().isTensor()) {
      throw ConfigError("'" + file.string() + "' holds a non-tensor entry");
    }
    out[kv.key().toStringRef()] = kv.value().toTensor();
  }
  return out;
}

void WriteTensorDict(const std::map<std::string, torch::Tensor>& tensors,
                     const fs::path& file) {
  c10::Dict<std::string, torch::Tensor> dict;
  for (const auto& [name, t] : tensors) dict.insert(name, t.detach().cpu().contiguous());
  const std::vector<char> bytes = torch::pickle_save(dict);
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write '" + file.string() + "'");
}

}  // namespace weldx
