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

#include "weldx/trainer/train.h"

#include <cmath>
#include <numeric>
#include <string>

#include "weldx/common/error.h"
#include "weldx/common/random.h"
#include "weldx/trainer/optimizer.h"

namespace weldx {

namespace {

torch::Tensor StackImages(const std::vector<std::filesystem::path>& paths,
                          std::span<const size_t> indices,
                          const dataset::PreprocessSpec& spec) {
  std::vector<torch::Tensor> images;
  images.reserve(indices.size());
  for (size_t i : indices) images.push_back(ToTensor(dataset::PreprocessFile(paths[i], spec)));
  return torch::stack(images);
}

}  // namespace

torch::Tensor ToTensor(const dataset::ImageTensor& image) {
  return torch::from_blob(const_cast<float*>(image.data.data()),
                          {image.channels, image.height, image.width},
                          torch::kFloat32)
      .clone();
}

ImageDataset::ImageDataset(std::vector<std::filesystem::path> paths,
                           std::vector<int> labels,
                           const dataset::PreprocessSpec& spec,
                           int64_t cache_limit_bytes)
    : paths_(std::move(paths)), labels_(std::move(labels)), spec_(spec) {
  if (paths_.size() != labels_.size()) {
    throw ValidationError("dataset paths and labels differ in length");
  }
  spec_.Validate();
  const int64_t bytes = static_cast<int64_t>(paths_.size()) * 3 *
                        spec_.target_height * spec_.target_width * 4;
  if (!paths_.empty() && bytes <= cache_limit_bytes) {
    std::vector<size_t> all(paths_.size());
    std::iota(all.begin(), all.end(), 0);
    cached_ = StackImages(paths_, all, spec_);
  }
}

ImageDataset::ImageDataset(torch::Tensor images, std::vector<int> labels)
    : labels_(std::move(labels)), cached_(std::move(images)) {
  if (cached_.dim() != 4 || cached_.size(1) != 3 ||
      cached_.size(0) != static_cast<int64_t>(labels_.size())) {
    throw ValidationError("dataset tensor must be (N, 3, H, W) with N labels");
  }
  cached_ = cached_.to(torch::kFloat32).contiguous();
}

ImageDataset ImageDataset::FromManifest(const dataset::DatasetManifest& manifest,
                                        dataset::Split split,
                                        const dataset::PreprocessSpec& spec) {
  std::vector<std::filesystem::path> paths;
  std::vector<int> labels;
  for (const dataset::SampleEntry& e : manifest.samples) {
    if (e.split != split) continue;
    paths.push_back(manifest.AbsolutePath(e));
    labels.push_back(e.label);
  }
  return ImageDataset(std::move(paths), std::move(labels), spec);
}

std::pair<torch::Tensor, torch::Tensor> ImageDataset::Batch(
    std::span<const size_t> indices) const {
  std::vector<int64_t> idx(indices.begin(), indices.end());
  std::vector<int64_t> y;
  for (size_t i : indices) {
    if (i >= labels_.size()) throw ValidationError("dataset index out of range");
    y.push_back(labels_[i]);
  }
  torch::Tensor images = cached_.defined()
                             ? cached_.index_select(0, torch::tensor(idx))
                             : StackImages(paths_, indices, spec_);
  return {images, torch::tensor(y, torch::kInt64)};
}

Evaluation Evaluate(ClassifierNet& model, const ImageDataset& data,
                    int batch_size) {
  if (data.size() == 0) throw ValidationError("cannot evaluate on an empty dataset");
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  const bool was_training = model.is_training();
  model.eval();
  torch::NoGradGuard no_grad;
  Evaluation ev;
  for (size_t start = 0; start < data.size(); start += batch_size) {
    std::vector<size_t> idx;
    for (size_t i = start; i < std::min(data.size(), start + batch_size); ++i) idx.push_back(i);
    auto [x, y] = data.Batch(idx);
    const torch::Tensor pred = model.forward(x).argmax(1);
    for (int64_t k = 0; k < pred.size(0); ++k) {
      ev.predictions.push_back(static_cast<int>(pred[k].item<int64_t>()));
    }
  }
  ev.confusion = ConfusionMatrix::FromPredictions(data.labels(), ev.predictions);
  ev.accuracy = ev.confusion.Accuracy();
  if (was_training) model.train(true);
  return ev;
}

TrainReport TrainWithEarlyStopping(ClassifierNet& model,
                                   const ImageDataset& train,
                                   const ImageDataset& val, OptimizerId opt,
                                   double lr, const TrainOptions& options) {
  options.stopping.Validate();
  if (train.size() == 0 || val.size() == 0) {
    throw ValidationError("training and validation sets must be nonempty");
  }
  if (options.batch_size < 1) throw ValidationError("batch size must be >= 1");
  torch::manual_seed(options.seed);
  std::unique_ptr<Optimizer> optimizer =
      BuildOptimizer(opt, TrainableParameters(model), lr);

  std::map<std::string, torch::Tensor> best_state;
  auto snapshot = [&](int) {
    best_state.clear();
    for (const auto& [name, t] : StateDict(model)) best_state[name] = t.detach().clone();
  };

  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  auto run_epoch = [&](int epoch) {
    Rng rng(DeriveSeed({options.seed, static_cast<uint64_t>(epoch)}));
    rng.Shuffle(order);
    SetTrainingMode(model);
    double loss_sum = 0.0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size(); start += options.batch_size) {
      const size_t end = std::min(order.size(), start + options.batch_size);
      // Batch norm cannot normalize a single training sample.
      if (end - start == 1 && order.size() > 1) break;
      auto [x, y] = train.Batch(std::span(order).subspan(start, end - start));
      optimizer->ZeroGrad();
      const torch::Tensor loss = torch::nn::functional::cross_entropy(model.forward(x), y);
      const double value = loss.item<double>();
      if (!std::isfinite(value)) {
        throw NonFiniteLossError("loss became " + std::to_string(value) + " in epoch " +
                                 std::to_string(epoch));
      }
      loss.backward();
      optimizer->Step();
      loss_sum += value * static_cast<double>(end - start);
      seen += end - start;
    }
    EpochRecord record;
    record.train_loss = seen == 0 ? 0.0 : loss_sum / static_cast<double>(seen);
    record.val_accuracy = Evaluate(model, val, options.eval_batch_size).accuracy;
    if (options.on_epoch) options.on_epoch(epoch, record);
    return record;
  };

  TrainReport report = RunEarlyStopped(options.stopping, run_epoch, snapshot);
  optimizer->ZeroGrad();
  LoadStateDict(model, best_state);
  model.eval();
  report.confusion = Evaluate(model, val, options.eval_batch_size).confusion;
  return report;
}

}  // namespace weldx
