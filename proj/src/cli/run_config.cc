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

#include "weldx/cli/run_config.h"

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "weldx/common/error.h"

namespace weldx::cli {

namespace fs = std::filesystem;

namespace {

// Walks one JSON object, dispatching known keys and recording every problem
// under a dotted field name instead of stopping at the first.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string prefix, std::vector<FieldError>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) Fail("", "must be a JSON object");
  }

  void On(const std::string& key, std::function<void(const Json&)> handler) {
    handlers_[key] = std::move(handler);
  }

  void Run() {
    if (!j_.is_object()) return;
    for (const auto& [key, value] : j_.items()) {
      auto it = handlers_.find(key);
      if (it == handlers_.end()) {
        Fail(key, "unknown key");
        continue;
      }
      try {
        it->second(value);
      } catch (const ValidationError& e) {
        if (e.fields().empty()) Fail(key, e.what());
        for (const FieldError& f : e.fields()) Fail(key + "." + f.field, f.message);
      } catch (const std::exception& e) {
        Fail(key, e.what());
      }
    }
  }

  void Fail(const std::string& key, const std::string& message) {
    std::string field = prefix_;
    if (!key.empty()) field += (field.empty() ? "" : ".") + key;
    errors_.push_back({field.empty() ? "(root)" : field, message});
  }

  std::string Field(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

 private:
  const Json& j_;
  std::string prefix_;
  std::vector<FieldError>& errors_;
  std::map<std::string, std::function<void(const Json&)>> handlers_;
};

[[noreturn]] void TypeError(const char* expected) {
  throw ValidationError(std::string("must be ") + expected);
}

double Number(const Json& v) {
  if (!v.is_number()) TypeError("a number");
  return v.get<double>();
}

int Integer(const Json& v) {
  if (!v.is_number_integer()) TypeError("an integer");
  return v.get<int>();
}

uint64_t Seed(const Json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
    TypeError("a nonnegative integer");
  }
  return v.get<uint64_t>();
}

bool Boolean(const Json& v) {
  if (!v.is_boolean()) TypeError("a boolean");
  return v.get<bool>();
}

std::string String(const Json& v) {
  if (!v.is_string()) TypeError("a string");
  return v.get<std::string>();
}

}  // namespace

void RunConfig::Validate() const {
  std::vector<FieldError> errors;
  auto check = [&](bool ok, const char* field, const char* message) {
    if (!ok) errors.push_back({field, message});
  };
  check(val_fraction > 0.0 && val_fraction < 1.0, "val_fraction", "must lie in (0, 1)");
  check(!output_dir.empty(), "output_dir", "must not be empty");
  check(search.trials >= 1, "search.trials", "must be >= 1");
  check(search.workers >= 1, "search.workers", "must be >= 1");
  check(budget.max_epochs >= 1, "budget.max_epochs", "must be >= 1");
  check(budget.patience >= 1, "budget.patience", "must be >= 1");
  check(explain.n_segments >= 2, "explain.n_segments", "must be >= 2");
  check(explain.n_samples > explain.n_segments, "explain.n_samples",
        "must exceed explain.n_segments");
  check(explain.top_k_segments >= 1, "explain.top_k_segments", "must be >= 1");
  check(explain.alpha >= 0.0 && explain.alpha <= 1.0, "explain.alpha", "must lie in [0, 1]");
  check(locmetric.tau >= 0.0 && locmetric.tau <= 1.0, "locmetric.tau", "must lie in [0, 1]");
  check(!pretrained || !weights_dir.empty(), "model.weights_dir",
        "required when model.pretrained is true");
  try {
    preprocess.Validate();
  } catch (const ValidationError& e) {
    errors.push_back({"preprocess", e.what()});
  }
  try {
    search.space.Validate();
  } catch (const ValidationError& e) {
    errors.push_back({"search.space", e.what()});
  }
  if (!errors.empty()) throw ValidationError("invalid run config", std::move(errors));
}

RunConfig RunConfigFromJson(const Json& j) {
  RunConfig c;
  std::vector<FieldError> errors;
  ObjectReader root(j, "", errors);
  root.On("data_root", [&](const Json& v) { c.data_root = String(v); });
  root.On("output_dir", [&](const Json& v) { c.output_dir = String(v); });
  root.On("val_fraction", [&](const Json& v) { c.val_fraction = Number(v); });
  root.On("preprocess", [&](const Json& v) { c.preprocess = dataset::PreprocessSpecFromJson(v); });
  root.On("search", [&](const Json& v) {
    ObjectReader r(v, "search", errors);
    r.On("space", [&](const Json& s) { c.search.space = search::SearchSpaceFromJson(s); });
    r.On("trials", [&](const Json& s) { c.search.trials = Integer(s); });
    r.On("sampler", [&](const Json& s) { c.search.sampler = search::ParseSampler(String(s)); });
    r.On("workers", [&](const Json& s) { c.search.workers = Integer(s); });
    r.Run();
  });
  root.On("budget", [&](const Json& v) {
    ObjectReader r(v, "budget", errors);
    r.On("max_epochs", [&](const Json& s) { c.budget.max_epochs = Integer(s); });
    r.On("patience", [&](const Json& s) { c.budget.patience = Integer(s); });
    r.Run();
  });
  root.On("model", [&](const Json& v) {
    ObjectReader r(v, "model", errors);
    r.On("pretrained", [&](const Json& s) { c.pretrained = Boolean(s); });
    r.On("weights_dir", [&](const Json& s) { c.weights_dir = String(s); });
    r.On("freeze_table", [&](const Json& s) { c.freeze_table = FreezeTableFromJson(s); });
    r.Run();
  });
  root.On("explain", [&](const Json& v) {
    ObjectReader r(v, "explain", errors);
    r.On("n_segments", [&](const Json& s) { c.explain.n_segments = Integer(s); });
    r.On("n_samples", [&](const Json& s) { c.explain.n_samples = Integer(s); });
    r.On("top_k_segments", [&](const Json& s) { c.explain.top_k_segments = Integer(s); });
    r.On("alpha", [&](const Json& s) { c.explain.alpha = Number(s); });
    r.Run();
  });
  root.On("locmetric", [&](const Json& v) {
    ObjectReader r(v, "locmetric", errors);
    r.On("mode", [&](const Json& s) { c.locmetric.mode = locmetric::ParseRecallMode(String(s)); });
    r.On("tau", [&](const Json& s) { c.locmetric.tau = Number(s); });
    r.On("class", [&](const Json& s) {
      c.locmetric.cam_class = locmetric::ParseCamClass(String(s));
    });
    r.Run();
  });
  root.On("seeds", [&](const Json& v) {
    ObjectReader r(v, "seeds", errors);
    r.On("split", [&](const Json& s) { c.seeds.split = Seed(s); });
    r.On("balance", [&](const Json& s) { c.seeds.balance = Seed(s); });
    r.On("study", [&](const Json& s) { c.seeds.study = Seed(s); });
    r.On("explain", [&](const Json& s) { c.seeds.explain = Seed(s); });
    r.Run();
  });
  root.Run();
  if (!errors.empty()) throw ValidationError("invalid run config", std::move(errors));
  c.Validate();
  return c;
}

Json ToJson(const RunConfig& c) {
  Json j = Json::object();
  j["data_root"] = c.data_root.string();
  j["output_dir"] = c.output_dir.string();
  j["val_fraction"] = c.val_fraction;
  j["preprocess"] = dataset::ToJson(c.preprocess);
  j["search"] = {{"space", search::ToJson(c.search.space)},
                 {"trials", c.search.trials},
                 {"sampler", search::Name(c.search.sampler)},
                 {"workers", c.search.workers}};
  j["budget"] = {{"max_epochs", c.budget.max_epochs}, {"patience", c.budget.patience}};
  j["model"] = {{"pretrained", c.pretrained},
                {"weights_dir", c.weights_dir.string()},
                {"freeze_table", ToJson(c.freeze_table)}};
  j["explain"] = {{"n_segments", c.explain.n_segments},
                  {"n_samples", c.explain.n_samples},
                  {"top_k_segments", c.explain.top_k_segments},
                  {"alpha", c.explain.alpha}};
  j["locmetric"] = {{"mode", locmetric::Name(c.locmetric.mode)},
                    {"tau", c.locmetric.tau},
                    {"class", locmetric::Name(c.locmetric.cam_class)}};
  j["seeds"] = {{"split", c.seeds.split},
                {"balance", c.seeds.balance},
                {"study", c.seeds.study},
                {"explain", c.seeds.explain}};
  return j;
}

RunConfig LoadRunConfig(const fs::path& file) {
  const Json j = ReadJsonFile(file);
  if (j.is_object() && j.contains("command") && j.contains("config")) {
    return RunConfigFromJson(j["config"]);
  }
  return RunConfigFromJson(j);
}

}  // namespace weldx::cli
