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

#include <vector>

#include <gtest/gtest.h>

#include "weldx/common/error.h"
#include "weldx/common/random.h"
#include "weldx/trainer/early_stopping.h"
#include "weldx/trainer/ids.h"
#include "weldx/trainer/report.h"

namespace weldx {
namespace {

// Index of the epoch (1-based) at which training halts, by direct reading
// of the rule: stop once `patience` consecutive epochs fail to beat the best.
int OracleStopEpoch(const std::vector<double>& acc, int patience, int max_epochs) {
  double best = -1.0;
  int since = 0;
  for (int e = 1; e <= max_epochs; ++e) {
    const double a = acc[(e - 1) % acc.size()];
    if (a > best) {
      best = a;
      since = 0;
    } else if (++since >= patience) {
      return e;
    }
  }
  return max_epochs;
}

TrainReport RunSeq(const std::vector<double>& acc, EarlyStoppingOptions o) {
  return RunEarlyStopped(o, [&](int epoch) {
    EpochRecord r;
    r.val_accuracy = acc[(epoch - 1) % acc.size()];
    r.train_loss = 1.0 / epoch;
    return r;
  });
}

TEST(EarlyStoppingTest, StopsFiveEpochsAfterLastImprovement) {
  const std::vector<double> acc = {0.5, 0.6, 0.7, 0.7, 0.69, 0.65, 0.7, 0.68,
                                   0.99, 0.99};
  const TrainReport r = RunSeq(acc, {});
  EXPECT_EQ(r.epochs_run(), 8);
  EXPECT_EQ(r.best_epoch, 3);
  EXPECT_DOUBLE_EQ(r.best_val_accuracy, 0.7);
  EXPECT_TRUE(r.stopped_early);
}

TEST(EarlyStoppingTest, MonotoneRunHitsEpochCap) {
  std::vector<double> acc;
  for (int i = 0; i < 100; ++i) acc.push_back(i / 100.0);
  const TrainReport r = RunSeq(acc, {});
  EXPECT_EQ(r.epochs_run(), 100);
  EXPECT_EQ(r.best_epoch, 100);
  EXPECT_FALSE(r.stopped_early);
}

TEST(EarlyStoppingTest, FlatSequenceStopsAtSix) {
  const TrainReport r = RunSeq({0.25}, {});
  EXPECT_EQ(r.epochs_run(), 6);
  EXPECT_EQ(r.best_epoch, 1);
}

TEST(EarlyStoppingTest, RandomSequencesMatchOracle) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> acc(120);
    // Coarse grid makes ties common.
    for (double& a : acc) a = static_cast<double>(rng.Below(20)) / 20.0;
    const int patience = 1 + static_cast<int>(rng.Below(8));
    const int max_epochs = 1 + static_cast<int>(rng.Below(110));
    const TrainReport r = RunSeq(acc, {max_epochs, patience});
    ASSERT_EQ(r.epochs_run(), OracleStopEpoch(acc, patience, max_epochs));
  }
}

TEST(EarlyStoppingTest, OnImproveSeesEveryNewBest) {
  std::vector<int> improved;
  const std::vector<double> acc = {0.1, 0.3, 0.2, 0.4, 0.4, 0.1, 0.1, 0.1, 0.1};
  RunEarlyStopped(
      {},
      [&](int e) {
        EpochRecord r;
        r.val_accuracy = acc[e - 1];
        return r;
      },
      [&](int e) { improved.push_back(e); });
  EXPECT_EQ(improved, (std::vector<int>{1, 2, 4}));
}

TEST(EarlyStoppingTest, RejectsBadOptions) {
  EXPECT_THROW((EarlyStoppingOptions{0, 5}.Validate()), ValidationError);
  EXPECT_THROW((EarlyStoppingOptions{10, 0}.Validate()), ValidationError);
}

TEST(ConfusionMatrixTest, MatchesBruteForceTally) {
  Rng rng(21);
  std::vector<int> truth(500), pred(500);
  for (int i = 0; i < 500; ++i) {
    truth[i] = static_cast<int>(rng.Below(4));
    pred[i] = rng.Bernoulli(0.7) ? truth[i] : static_cast<int>(rng.Below(4));
  }
  const ConfusionMatrix m = ConfusionMatrix::FromPredictions(truth, pred);
  int64_t correct = 0;
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) {
      int64_t n = 0;
      for (int i = 0; i < 500; ++i) n += truth[i] == t && pred[i] == p;
      EXPECT_EQ(m.counts[t][p], n);
    }
  }
  for (int i = 0; i < 500; ++i) correct += truth[i] == pred[i];
  EXPECT_EQ(m.Total(), 500);
  EXPECT_EQ(m.Trace(), correct);
  EXPECT_DOUBLE_EQ(m.Accuracy(), correct / 500.0);
}

TEST(ConfusionMatrixTest, RejectsOutOfRangeLabels) {
  const std::vector<int> t = {0, 4};
  const std::vector<int> p = {0, 1};
  EXPECT_THROW(ConfusionMatrix::FromPredictions(t, p), ValidationError);
  EXPECT_DOUBLE_EQ(ConfusionMatrix{}.Accuracy(), 0.0);
}

TEST(ReportTest, JsonRoundTrip) {
  TrainReport r = RunSeq({0.2, 0.5, 0.4}, {});
  r.confusion.Add(1, 2);
  r.confusion.Add(3, 3);
  EXPECT_EQ(TrainReportFromJson(ToJson(r)), r);
}

TEST(IdsTest, NamesRoundTrip) {
  for (ArchitectureId a : kAllArchitectures) EXPECT_EQ(ParseArchitecture(Name(a)), a);
  for (TransferMode m : kAllTransferModes) EXPECT_EQ(ParseTransferMode(Name(m)), m);
  for (OptimizerId o : kAllOptimizers) EXPECT_EQ(ParseOptimizer(Name(o)), o);
  EXPECT_THROW(ParseArchitecture("vgg16"), ConfigError);
}

}  // namespace
}  // namespace weldx
