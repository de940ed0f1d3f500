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

#include "weldx/search/space.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "weldx/common/error.h"

namespace weldx::search {

namespace {

template <typename T>
bool HasDuplicates(const std::vector<T>& v) {
  std::set<T> s(v.begin(), v.end());
  return s.size() != v.size();
}

template <typename T>
bool In(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

void SearchSpace::Validate() const {
  std::vector<FieldError> errors;
  if (architectures.empty()) errors.push_back({"architectures", "empty"});
  if (modes.empty()) errors.push_back({"modes", "empty"});
  if (optimizers.empty()) errors.push_back({"optimizers", "empty"});
  if (batch_sizes.empty()) errors.push_back({"batch_sizes", "empty"});
  if (HasDuplicates(architectures) || HasDuplicates(modes) ||
      HasDuplicates(optimizers) || HasDuplicates(batch_sizes)) {
    errors.push_back({"search_space", "duplicate choices"});
  }
  for (int b : batch_sizes) {
    if (b <= 0) errors.push_back({"batch_sizes", "must be positive"});
  }
  if (!(lr_min > 0.0) || !(lr_min < lr_max) || !std::isfinite(lr_max)) {
    errors.push_back({"lr_range", "need 0 < lr_min < lr_max"});
  }
  if (!errors.empty()) throw ValidationError("invalid search space", errors);
}

bool Contains(const SearchSpace& space, const TrialConfig& c) {
  return In(space.architectures, c.arch) && In(space.modes, c.mode) &&
         In(space.optimizers, c.opt) && In(space.batch_sizes, c.batch_size) &&
         c.lr >= space.lr_min && c.lr <= space.lr_max;
}

std::string_view Name(TrialStatus status) {
  return status == TrialStatus::kCompleted ? "completed" : "failed";
}

std::string_view Name(SamplerKind sampler) {
  return sampler == SamplerKind::kRandom ? "random" : "adaptive";
}

SamplerKind ParseSampler(std::string_view name) {
  if (name == "random") return SamplerKind::kRandom;
  if (name == "adaptive") return SamplerKind::kAdaptive;
  throw ConfigError("unknown sampler '" + std::string(name) + "'");
}

void StudyLog::Validate() const {
  int64_t last = std::numeric_limits<int64_t>::min();
  for (const StudyEntry& e : trials) {
    if (e.config.trial_id <= last) {
      throw ValidationError("study log trial ids are not strictly increasing");
    }
    last = e.config.trial_id;
    const double obj = e.result.objective;
    if (!(obj >= 0.0 && obj <= 1.0)) {
      throw ValidationError("trial " + std::to_string(last) +
                            " objective outside [0, 1]");
    }
    if (e.result.status == TrialStatus::kFailed && obj != 0.0) {
      throw ValidationError("failed trial " + std::to_string(last) +
                            " has nonzero objective");
    }
  }
}

Json ToJson(const SearchSpace& s) {
  Json j;
  j["architectures"] = Json::array();
  for (auto a : s.architectures) j["architectures"].push_back(Name(a));
  j["modes"] = Json::array();
  for (auto m : s.modes) j["modes"].push_back(Name(m));
  j["optimizers"] = Json::array();
  for (auto o : s.optimizers) j["optimizers"].push_back(Name(o));
  j["lr_min"] = s.lr_min;
  j["lr_max"] = s.lr_max;
  j["batch_sizes"] = s.batch_sizes;
  return j;
}

SearchSpace SearchSpaceFromJson(const Json& j) {
  static const std::set<std::string> kKeys = {
      "architectures", "modes", "optimizers", "lr_min", "lr_max", "batch_sizes"};
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) {
      throw ConfigError("unknown search space key '" + key + "'");
    }
  }
  SearchSpace s;
  if (j.contains("architectures")) {
    s.architectures.clear();
    for (const auto& n : j["architectures"]) {
      s.architectures.push_back(ParseArchitecture(n.get<std::string>()));
    }
  }
  if (j.contains("modes")) {
    s.modes.clear();
    for (const auto& n : j["modes"]) {
      s.modes.push_back(ParseTransferMode(n.get<std::string>()));
    }
  }
  if (j.contains("optimizers")) {
    s.optimizers.clear();
    for (const auto& n : j["optimizers"]) {
      s.optimizers.push_back(ParseOptimizer(n.get<std::string>()));
    }
  }
  if (j.contains("lr_min")) s.lr_min = j["lr_min"].get<double>();
  if (j.contains("lr_max")) s.lr_max = j["lr_max"].get<double>();
  if (j.contains("batch_sizes")) {
    s.batch_sizes = j["batch_sizes"].get<std::vector<int>>();
  }
  s.Validate();
  return s;
}

Json ToJson(const TrialConfig& c) {
  Json j;
  j["trial_id"] = c.trial_id;
  j["arch"] = Name(c.arch);
  j["mode"] = Name(c.mode);
  j["opt"] = Name(c.opt);
  j["lr"] = c.lr;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  return j;
}

TrialConfig TrialConfigFromJson(const Json& j) {
  TrialConfig c;
  c.trial_id = j.at("trial_id").get<int64_t>();
  c.arch = ParseArchitecture(j.at("arch").get<std::string>());
  c.mode = ParseTransferMode(j.at("mode").get<std::string>());
  c.opt = ParseOptimizer(j.at("opt").get<std::string>());
  c.lr = j.at("lr").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

Json ToJson(const TrialResult& r) {
  Json j;
  j["status"] = Name(r.status);
  j["objective"] = r.objective;
  j["wall_time"] = r.wall_time;
  j["diagnostic"] = r.diagnostic;
  j["report"] = ToJson(r.report);
  return j;
}

TrialResult TrialResultFromJson(const Json& j) {
  TrialResult r;
  const std::string status = j.at("status").get<std::string>();
  if (status == "completed") {
    r.status = TrialStatus::kCompleted;
  } else if (status == "failed") {
    r.status = TrialStatus::kFailed;
  } else {
    throw ValidationError("unknown trial status '" + status + "'");
  }
  r.objective = j.at("objective").get<double>();
  r.wall_time = j.at("wall_time").get<double>();
  r.diagnostic = j.value("diagnostic", "");
  r.report = TrainReportFromJson(j.at("report"));
  return r;
}

Json StudyLineToJson(const StudyLog& log, const StudyEntry& e) {
  Json j;
  j["study_seed"] = log.study_seed;
  j["sampler"] = Name(log.sampler);
  j["config"] = ToJson(e.config);
  j["result"] = ToJson(e.result);
  return j;
}

StudyLog ReadStudyLog(const std::filesystem::path& file) {
  const std::vector<Json> lines = ReadJsonLines(file);
  StudyLog log;
  for (size_t i = 0; i < lines.size(); ++i) {
    const Json& j = lines[i];
    try {
      const uint64_t seed = j.at("study_seed").get<uint64_t>();
      const SamplerKind sampler = ParseSampler(j.at("sampler").get<std::string>());
      if (i == 0) {
        log.study_seed = seed;
        log.sampler = sampler;
      } else if (seed != log.study_seed || sampler != log.sampler) {
        throw ValidationError("mixed studies in one log");
      }
      log.trials.push_back({TrialConfigFromJson(j.at("config")),
                            TrialResultFromJson(j.at("result"))});
    } catch (const Json::exception& e) {
      throw ValidationError(file.string() + ": line " + std::to_string(i + 1) +
                            ": " + e.what());
    }
  }
  log.Validate();
  return log;
}

void WriteStudyLog(const StudyLog& log, const std::filesystem::path& file) {
  std::vector<Json> lines;
  for (const StudyEntry& e : log.trials) lines.push_back(StudyLineToJson(log, e));
  WriteJsonLines(file, lines);
}

}  // namespace weldx::search
