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

#ifndef WELDX_TRAINER_REPORT_H_
#define WELDX_TRAINER_REPORT_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "weldx/common/jsonl.h"
#include "weldx/dataset/manifest.h"

namespace weldx {

// Rows are true classes, columns predicted classes, in manifest class order.
struct ConfusionMatrix {
  using Counts = std::array<std::array<int64_t, dataset::kNumClasses>,
                            dataset::kNumClasses>;
  Counts counts{};

  void Add(int true_class, int predicted_class) {
    ++counts[true_class][predicted_class];
  }
  int64_t Total() const;
  int64_t Trace() const;
  // trace / total; 0 for an empty matrix.
  double Accuracy() const;
  int64_t RowSum(int true_class) const;
  int64_t ColumnSum(int predicted_class) const;

  // ValidationError on a label outside [0, kNumClasses) or a length mismatch.
  static ConfusionMatrix FromPredictions(std::span<const int> true_labels,
                                         std::span<const int> predictions);

  bool operator==(const ConfusionMatrix&) const = default;
};

struct EpochRecord {
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  bool operator==(const EpochRecord&) const = default;
};

struct TrainReport {
  std::vector<EpochRecord> epoch_history;
  double best_val_accuracy = 0.0;
  // 1-based; 0 when no epoch ran.
  int best_epoch = 0;
  bool stopped_early = false;
  ConfusionMatrix confusion;

  int epochs_run() const { return static_cast<int>(epoch_history.size()); }
  bool operator==(const TrainReport&) const = default;
};

Json ToJson(const ConfusionMatrix& m);
ConfusionMatrix ConfusionMatrixFromJson(const Json& j);
Json ToJson(const TrainReport& r);
TrainReport TrainReportFromJson(const Json& j);

}  // namespace weldx

#endif  // WELDX_TRAINER_REPORT_H_
