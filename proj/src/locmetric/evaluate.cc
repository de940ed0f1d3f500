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

#include "weldx/locmetric/evaluate.h"

#include <algorithm>

#include "weldx/common/error.h"
#include "weldx/dataset/preprocess.h"
#include "weldx/explain/grad_cam.h"
#include "weldx/explain/model_predictor.h"
#include "weldx/trainer/train.h"

namespace weldx::locmetric {

std::string_view Name(CamClass c) {
  return c == CamClass::kAnnotated ? "annotated" : "predicted";
}

CamClass ParseCamClass(std::string_view name) {
  if (name == "annotated") return CamClass::kAnnotated;
  if (name == "predicted") return CamClass::kPredicted;
  throw ConfigError("unknown Grad-CAM class source '" + std::string(name) +
                    "' (expected annotated or predicted)");
}

std::vector<RecallRecord> EvaluateLocalization(
    const LoadedCheckpoint& checkpoint,
    const std::vector<AnnotationEntry>& annotations,
    const LocalizationOptions& options) {
  ClassifierNet& model = *checkpoint.model;
  const auto& names = checkpoint.info.class_names;
  std::vector<RecallRecord> records;
  records.reserve(annotations.size());
  for (const AnnotationEntry& a : annotations) {
    const GroundTruthMask gt =
        LoadMask(a.mask_path, a.image_path, a.defect_type, a.annotator);
    const torch::Tensor input = ToTensor(dataset::PreprocessFile(a.image_path,
                                                                 checkpoint.info.preprocess));
    int cls = 0;
    if (options.cam_class == CamClass::kAnnotated) {
      auto it = std::find(names.begin(), names.end(), Name(a.defect_type));
      if (it == names.end()) {
        throw ConfigError("defect type '" + std::string(Name(a.defect_type)) +
                          "' is not a class of the checkpoint");
      }
      cls = static_cast<int>(it - names.begin());
    } else {
      const auto p = explain::PredictProbabilities(model, input.unsqueeze(0))[0];
      cls = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    }
    const explain::GradCamResult cam = explain::GradCam(model, input, cls);
    explain::ExplanationMap map;
    map.method = explain::ExplainMethod::kGradCam;
    map.class_index = cls;
    map.values = explain::MinMaxNormalize(
        explain::ResizeBilinear(cam.cam, gt.mask.height(), gt.mask.width()));
    map.normalized = true;
    records.push_back(Recall(map, gt, options.mode, options.tau));
  }
  return records;
}

}  // namespace weldx::locmetric
