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

#include "weldx/trainer/report.h"

#include "weldx/common/error.h"

namespace weldx {

using dataset::kNumClasses;

int64_t ConfusionMatrix::Total() const {
  int64_t total = 0;
  for (const auto& row : counts) {
    for (int64_t v : row) total += v;
  }
  return total;
}

int64_t ConfusionMatrix::Trace() const {
  int64_t trace = 0;
  for (int i = 0; i < kNumClasses; ++i) trace += counts[i][i];
  return trace;
}

double ConfusionMatrix::Accuracy() const {
  const int64_t total = Total();
  return total == 0 ? 0.0 : static_cast<double>(Trace()) / total;
}

int64_t ConfusionMatrix::RowSum(int true_class) const {
  int64_t s = 0;
  for (int64_t v : counts[true_class]) s += v;
  return s;
}

int64_t ConfusionMatrix::ColumnSum(int predicted_class) const {
  int64_t s = 0;
  for (const auto& row : counts) s += row[predicted_class];
  return s;
}

ConfusionMatrix ConfusionMatrix::FromPredictions(
    std::span<const int> true_labels, std::span<const int> predictions) {
  if (true_labels.size() != predictions.size()) {
    throw ValidationError("label and prediction counts differ");
  }
  ConfusionMatrix m;
  for (size_t i = 0; i < true_labels.size(); ++i) {
    const int t = true_labels[i];
    const int p = predictions[i];
    if (t < 0 || t >= kNumClasses || p < 0 || p >= kNumClasses) {
      throw ValidationError("class index out of range");
    }
    m.Add(t, p);
  }
  return m;
}

Json ToJson(const ConfusionMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.counts) rows.push_back(row);
  return rows;
}

ConfusionMatrix ConfusionMatrixFromJson(const Json& j) {
  ConfusionMatrix m;
  if (!j.is_array() || j.size() != kNumClasses) {
    throw ValidationError("confusion matrix must be 4x4");
  }
  for (int r = 0; r < kNumClasses; ++r) {
    if (!j[r].is_array() || j[r].size() != kNumClasses) {
      throw ValidationError("confusion matrix must be 4x4");
    }
    for (int c = 0; c < kNumClasses; ++c) m.counts[r][c] = j[r][c].get<int64_t>();
  }
  return m;
}

Json ToJson(const TrainReport& r) {
  Json j;
  Json history = Json::array();
  for (const EpochRecord& e : r.epoch_history) {
    history.push_back({{"train_loss", e.train_loss},
                       {"val_accuracy", e.val_accuracy}});
  }
  j["epoch_history"] = std::move(history);
  j["best_val_accuracy"] = r.best_val_accuracy;
  j["best_epoch"] = r.best_epoch;
  j["stopped_early"] = r.stopped_early;
  j["confusion"] = ToJson(r.confusion);
  return j;
}

TrainReport TrainReportFromJson(const Json& j) {
  TrainReport r;
  for (const Json& e : j.at("epoch_history")) {
    r.epoch_history.push_back({e.at("train_loss").get<double>(),
                               e.at("val_accuracy").get<double>()});
  }
  r.best_val_accuracy = j.at("best_val_accuracy").get<double>();
  r.best_epoch = j.at("best_epoch").get<int>();
  r.stopped_early = j.at("stopped_early").get<bool>();
  r.confusion = ConfusionMatrixFromJson(j.at("confusion"));
  return r;
}

}  // namespace weldx
