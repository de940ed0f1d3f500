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

#ifndef WELDX_SEARCH_STUDY_H_
#define WELDX_SEARCH_STUDY_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>

#include "weldx/common/error.h"
#include "weldx/search/sampler.h"
#include "weldx/search/space.h"

namespace weldx::search {

// Trains one configuration and returns its report; objective is the
// report's best_val_accuracy. May throw (e.g. NonFiniteLossError).
using TrialRunner = std::function<TrainReport(const TrialConfig&)>;

// Seconds on a monotonic clock; injectable so logs can be byte-stable.
using Clock = std::function<double()>;
Clock SteadyClock();

// Raised by RunStudy after in-flight trials were flushed to the log because
// the stop flag was set. The study can be resumed from the log.
class StudyInterrupted : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "interrupted"; }
};

// Runs one trial. Never throws on trial failure: any exception from the
// runner, or an objective outside [0, 1], yields status kFailed with
// objective 0 and the reason in `diagnostic`.
TrialResult RunTrial(const TrialConfig& config, const TrialRunner& runner,
                     const Clock& clock = SteadyClock());

struct StudyOptions {
  int n_trials = 50;
  SamplerKind sampler = SamplerKind::kAdaptive;
  uint64_t study_seed = 0;
  // When set, each trial is appended (and flushed) as it completes, in
  // trial-id order. An existing log is resumed: its trials count toward
  // n_trials and must come from the same seed and sampler.
  std::optional<std::filesystem::path> log_path;
  // Trials run concurrently; the adaptive sampler conditions only on
  // trials completed when a suggestion is made. workers == 1 is fully
  // deterministic.
  int workers = 1;
  AdaptiveSamplerOptions adaptive;
  Clock clock = SteadyClock();
  const std::atomic<bool>* stop = nullptr;
  std::function<void(const StudyEntry&)> on_trial;
};

// Runs trials until the log holds exactly n_trials entries. Trial ids start
// at 1.
StudyLog RunStudy(const SearchSpace& space, const TrialRunner& runner,
                  const StudyOptions& options);

// Entry with the highest objective among completed trials; ties go to the
// lowest trial id. NoResultError when no trial completed.
const StudyEntry& BestTrial(const StudyLog& log);

}  // namespace weldx::search

#endif  // WELDX_SEARCH_STUDY_H_
