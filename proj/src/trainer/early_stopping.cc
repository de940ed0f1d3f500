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

#include "weldx/trainer/early_stopping.h"

#include "weldx/common/error.h"

namespace weldx {

void EarlyStoppingOptions::Validate() const {
  std::vector<FieldError> errors;
  if (max_epochs < 1) errors.push_back({"max_epochs", "must be >= 1"});
  if (patience < 1) errors.push_back({"patience", "must be >= 1"});
  if (!errors.empty()) throw ValidationError("invalid training budget", errors);
}

EarlyStopper::EarlyStopper(EarlyStoppingOptions options) : options_(options) {
  options_.Validate();
}

bool EarlyStopper::Observe(double val_accuracy) {
  ++epochs_seen_;
  if (val_accuracy > best_) {
    best_ = val_accuracy;
    best_epoch_ = epochs_seen_;
    since_improvement_ = 0;
    return true;
  }
  ++since_improvement_;
  return false;
}

bool EarlyStopper::ShouldStop() const {
  return epochs_seen_ >= options_.max_epochs ||
         since_improvement_ >= options_.patience;
}

TrainReport RunEarlyStopped(const EarlyStoppingOptions& options,
                            const std::function<EpochRecord(int)>& run_epoch,
                            const std::function<void(int)>& on_improve) {
  EarlyStopper stopper(options);
  TrainReport report;
  while (!stopper.ShouldStop()) {
    const int epoch = stopper.epochs_seen() + 1;
    const EpochRecord rec = run_epoch(epoch);
    report.epoch_history.push_back(rec);
    if (stopper.Observe(rec.val_accuracy) && on_improve) on_improve(epoch);
  }
  report.best_epoch = stopper.best_epoch();
  report.best_val_accuracy = stopper.best_value();
  report.stopped_early = stopper.stopped_early();
  return report;
}

}  // namespace weldx
