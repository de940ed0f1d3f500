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

#include "weldx/ddia/case_builder.h"

#include <opencv2/imgcodecs.hpp>

#include "weldx/common/error.h"
#include "weldx/dataset/preprocess.h"
#include "weldx/explain/grad_cam.h"
#include "weldx/explain/model_predictor.h"
#include "weldx/explain/overlay.h"
#include "weldx/trainer/train.h"

namespace weldx::ddia {

namespace fs = std::filesystem;

namespace {

void WritePng(const fs::path& file, const cv::Mat& image) {
  if (!cv::imwrite(file.string(), image)) throw IoError("cannot write '" + file.string() + "'");
}

}  // namespace

AuditCase CreateCase(AuditStore& store, const LoadedCheckpoint& checkpoint,
                     const fs::path& image_path, const fs::path& artifact_root,
                     const CaseBuildOptions& options) {
  ClassifierNet& model = *checkpoint.model;
  const cv::Mat image = dataset::DecodeImage(image_path);
  const dataset::PreprocessSpec& spec = checkpoint.info.preprocess;
  const torch::Tensor input = ToTensor(dataset::Preprocess(image, spec));

  AuditCase c;
  c.case_id = store.NextCaseId();
  c.image_path = image_path.string();
  c.prediction.probabilities =
      explain::PredictProbabilities(model, input.unsqueeze(0))[0];
  c.prediction.class_index = static_cast<int>(
      std::max_element(c.prediction.probabilities.begin(),
                       c.prediction.probabilities.end()) -
      c.prediction.probabilities.begin());
  c.prediction.class_name =
      c.prediction.class_index < static_cast<int>(checkpoint.info.class_names.size())
          ? checkpoint.info.class_names[c.prediction.class_index]
          : std::to_string(c.prediction.class_index);
  c.gradcam_overlay_path = c.case_id + "/gradcam.png";
  c.lime_overlay_path = c.case_id + "/lime.png";
  c.created_ms = options.clock();

  const fs::path dir = artifact_root / c.case_id;
  if (fs::exists(dir)) throw ValidationError("artifact directory '" + dir.string() + "' already exists");
  fs::create_directories(dir);
  try {
    const explain::ExplanationMap cam = explain::Normalized(
        explain::GradCam(model, input, c.prediction.class_index).map);
    const explain::ExplanationMap lime = explain::Normalized(explain::LimeExplain(
        image, c.prediction.class_index, explain::MakeImagePredictor(model, spec),
        options.lime, options.seed));
    WritePng(dir / "image.png", image);
    WritePng(dir / "gradcam.png", explain::RenderOverlay(image, cam, options.alpha));
    WritePng(dir / "lime.png", explain::RenderOverlay(image, lime, options.alpha,
                                                      options.lime.top_k_segments));
    explain::WriteMap(cam, c.image_path, dir / "gradcam");
    explain::WriteMap(lime, c.image_path, dir / "lime");
    ValidateCase(c, artifact_root);
    store.InsertCase(c);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    throw;
  }
  return c;
}

}  // namespace weldx::ddia
