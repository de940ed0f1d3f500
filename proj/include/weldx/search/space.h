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

#ifndef WELDX_SEARCH_SPACE_H_
#define WELDX_SEARCH_SPACE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "weldx/common/jsonl.h"
#include "weldx/trainer/ids.h"
#include "weldx/trainer/report.h"

namespace weldx::search {

struct SearchSpace {
  std::vector<ArchitectureId> architectures{kAllArchitectures.begin(),
                                            kAllArchitectures.end()};
  std::vector<TransferMode> modes{kAllTransferModes.begin(),
                                  kAllTransferModes.end()};
  std::vector<OptimizerId> optimizers{kAllOptimizers.begin(),
                                      kAllOptimizers.end()};
  // Learning rate is drawn log-uniformly from [lr_min, lr_max].
  double lr_min = 1e-5;
  double lr_max = 1e-2;
  std::vector<int> batch_sizes{16, 32, 64};

  // ValidationError on empty sets, duplicates or a bad lr interval.
  void Validate() const;
};

struct TrialConfig {
  ArchitectureId arch = ArchitectureId::kResnet18;
  TransferMode mode = TransferMode::kFineTuneAll;
  OptimizerId opt = OptimizerId::kAdam;
  double lr = 1e-3;
  int batch_size = 16;
  int64_t trial_id = 0;
  // Training seed of this trial.
  uint64_t seed = 0;

  bool operator==(const TrialConfig&) const = default;
};

bool Contains(const SearchSpace& space, const TrialConfig& config);

enum class TrialStatus { kCompleted, kFailed };
enum class SamplerKind { kRandom, kAdaptive };

std::string_view Name(TrialStatus status);
std::string_view Name(SamplerKind sampler);
SamplerKind ParseSampler(std::string_view name);

struct TrialResult {
  // Best-epoch validation accuracy; 0 for failed trials.
  double objective = 0.0;
  TrainReport report;
  TrialStatus status = TrialStatus::kCompleted;
  double wall_time = 0.0;
  // Failure reason; empty for completed trials.
  std::string diagnostic;

  bool operator==(const TrialResult&) const = default;
};

struct StudyEntry {
  TrialConfig config;
  TrialResult result;
  bool operator==(const StudyEntry&) const = default;
};

struct StudyLog {
  std::vector<StudyEntry> trials;
  SamplerKind sampler = SamplerKind::kRandom;
  uint64_t study_seed = 0;

  // ValidationError unless trial ids strictly increase, objectives lie in
  // [0, 1], and failed trials carry objective 0.
  void Validate() const;
};

Json ToJson(const SearchSpace& space);
SearchSpace SearchSpaceFromJson(const Json& j);
Json ToJson(const TrialConfig& config);
TrialConfig TrialConfigFromJson(const Json& j);
Json ToJson(const TrialResult& result);
TrialResult TrialResultFromJson(const Json& j);

// One study.jsonl line.
Json StudyLineToJson(const StudyLog& log, const StudyEntry& entry);

StudyLog ReadStudyLog(const std::filesystem::path& file);
void WriteStudyLog(const StudyLog& log, const std::filesystem::path& file);

}  // namespace weldx::search

#endif  // WELDX_SEARCH_SPACE_H_
