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

#ifndef WELDX_TESTS_SUPPORT_SYNTHETIC_OBJECTIVE_H_
#define WELDX_TESTS_SUPPORT_SYNTHETIC_OBJECTIVE_H_

#include "weldx/search/space.h"
#include "weldx/trainer/report.h"

namespace weldx::testing {

// Deterministic mock objective over the categorical part of the default
// search space: 0.3 plus 0.175 for every dimension that matches the target
// cell densenet121 / fine_tune_all / adamw / batch 16. The learning rate is
// ignored, so the target cell is the unique maximizer (objective 1.0).
inline double SyntheticObjective(const search::TrialConfig& c) {
  int matches = 0;
  matches += c.arch == ArchitectureId::kDensenet121;
  matches += c.mode == TransferMode::kFineTuneAll;
  matches += c.opt == OptimizerId::kAdamW;
  matches += c.batch_size == 16;
  return 0.3 + 0.175 * matches;
}

inline bool IsSyntheticOptimum(const search::TrialConfig& c) {
  return c.arch == ArchitectureId::kDensenet121 &&
         c.mode == TransferMode::kFineTuneAll && c.opt == OptimizerId::kAdamW &&
         c.batch_size == 16;
}

// Report the mock trainer returns for `c`.
inline TrainReport SyntheticReport(const search::TrialConfig& c) {
  TrainReport r;
  EpochRecord e;
  e.val_accuracy = SyntheticObjective(c);
  e.train_loss = 1.0 - e.val_accuracy;
  r.epoch_history.push_back(e);
  r.best_val_accuracy = e.val_accuracy;
  r.best_epoch = 1;
  return r;
}

}  // namespace weldx::testing

#endif  // WELDX_TESTS_SUPPORT_SYNTHETIC_OBJECTIVE_H_
