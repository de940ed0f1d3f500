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

#ifndef WELDX_TRAINER_EARLY_STOPPING_H_
#define WELDX_TRAINER_EARLY_STOPPING_H_

#include <functional>
#include <limits>

#include "weldx/trainer/report.h"

namespace weldx {

struct EarlyStoppingOptions {
  int max_epochs = 100;
  int patience = 5;

  // ValidationError unless max_epochs >= 1 and patience >= 1.
  void Validate() const;
};

// Tracks validation accuracy across epochs. An epoch improves only if its
// accuracy is strictly greater than the best seen so far; ties count toward
// patience.
class EarlyStopper {
 public:
  explicit EarlyStopper(EarlyStoppingOptions options);

  // Records the next epoch. Returns true when it is the new best.
  bool Observe(double val_accuracy);
  bool ShouldStop() const;

  int epochs_seen() const { return epochs_seen_; }
  int best_epoch() const { return best_epoch_; }
  double best_value() const { return best_; }
  bool stopped_early() const {
    return ShouldStop() && epochs_seen_ < options_.max_epochs;
  }

 private:
  EarlyStoppingOptions options_;
  int epochs_seen_ = 0;
  int best_epoch_ = 0;
  int since_improvement_ = 0;
  double best_ = -std::numeric_limits<double>::infinity();
};

// Drives `run_epoch(epoch)` (1-based) until the stopper fires and assembles
// the report (confusion left empty). `on_improve(epoch)` is called right
// after every new best, e.g. to snapshot weights.
TrainReport RunEarlyStopped(const EarlyStoppingOptions& options,
                            const std::function<EpochRecord(int)>& run_epoch,
                            const std::function<void(int)>& on_improve = {});

}  // namespace weldx

#endif  // WELDX_TRAINER_EARLY_STOPPING_H_
