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

#ifndef WELDX_TRAINER_TRAIN_H_
#define WELDX_TRAINER_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "weldx/dataset/manifest.h"
#include "weldx/dataset/preprocess.h"
#include "weldx/trainer/early_stopping.h"
#include "weldx/trainer/ids.h"
#include "weldx/trainer/model.h"
#include "weldx/trainer/report.h"

namespace weldx {

// (3, H, W) float tensor sharing no memory with `image`.
torch::Tensor ToTensor(const dataset::ImageTensor& image);

// Labeled images, preprocessed on access. Datasets whose preprocessed size
// fits under `cache_limit_bytes` are decoded once at construction; larger
// ones are decoded per batch. Immutable after construction, so one instance
// can feed concurrent trials.
class ImageDataset {
 public:
  ImageDataset(std::vector<std::filesystem::path> paths, std::vector<int> labels,
               const dataset::PreprocessSpec& spec,
               int64_t cache_limit_bytes = int64_t{1} << 30);
  // Already preprocessed (N, 3, H, W) images.
  ImageDataset(torch::Tensor images, std::vector<int> labels);

  // Samples of one split, in manifest order.
  static ImageDataset FromManifest(const dataset::DatasetManifest& manifest,
                                   dataset::Split split,
                                   const dataset::PreprocessSpec& spec);

  size_t size() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }

  // Images (B, 3, H, W) and int64 labels (B).
  std::pair<torch::Tensor, torch::Tensor> Batch(
      std::span<const size_t> indices) const;

 private:
  std::vector<std::filesystem::path> paths_;
  std::vector<int> labels_;
  dataset::PreprocessSpec spec_;
  torch::Tensor cached_;
};

struct TrainOptions {
  EarlyStoppingOptions stopping;
  int batch_size = 32;
  int eval_batch_size = 64;
  // Seeds the torch generator (initialization noise, dropout) and the
  // per-epoch shuffling.
  uint64_t seed = 0;
  std::function<void(int, const EpochRecord&)> on_epoch;
};

struct Evaluation {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<int> predictions;
};

// Inference-mode pass in dataset order. ValidationError on an empty set.
Evaluation Evaluate(ClassifierNet& model, const ImageDataset& data,
                    int batch_size = 64);

// Cross-entropy training over the model's trainable parameters, one
// validation pass per epoch, early stopping on validation accuracy. The
// weights of the best epoch are restored before returning and the report's
// confusion matrix is computed from them. NonFiniteLossError if a batch loss
// is NaN or infinite.
TrainReport TrainWithEarlyStopping(ClassifierNet& model,
                                   const ImageDataset& train,
                                   const ImageDataset& val, OptimizerId opt,
                                   double lr, const TrainOptions& options);

}  // namespace weldx

#endif  // WELDX_TRAINER_TRAIN_H_
