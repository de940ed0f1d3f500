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

#ifndef WELDX_LOCMETRIC_EVALUATE_H_
#define WELDX_LOCMETRIC_EVALUATE_H_

#include <string_view>
#include <vector>

#include "weldx/locmetric/recall.h"
#include "weldx/trainer/checkpoint.h"

namespace weldx::locmetric {

// Class whose Grad-CAM map is scored: the annotated defect type or the
// model's prediction.
enum class CamClass { kAnnotated, kPredicted };
std::string_view Name(CamClass c);
CamClass ParseCamClass(std::string_view name);

struct LocalizationOptions {
  RecallMode mode = RecallMode::kBinary;
  double tau = 0.5;
  CamClass cam_class = CamClass::kAnnotated;
};

// One record per annotation: Grad-CAM at the checkpoint's target layer,
// upsampled to mask resolution, min-max normalized and scored against the
// mask. ConfigError if an annotated defect type is not among the
// checkpoint's classes.
std::vector<RecallRecord> EvaluateLocalization(
    const LoadedCheckpoint& checkpoint,
    const std::vector<AnnotationEntry>& annotations,
    const LocalizationOptions& options);

}  // namespace weldx::locmetric

#endif  // WELDX_LOCMETRIC_EVALUATE_H_
