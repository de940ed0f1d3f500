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

#ifndef WELDX_DDIA_CASE_BUILDER_H_
#define WELDX_DDIA_CASE_BUILDER_H_

#include <cstdint>
#include <filesystem>
#include <functional>

#include "weldx/ddia/record.h"
#include "weldx/ddia/store.h"
#include "weldx/explain/lime.h"
#include "weldx/trainer/checkpoint.h"

namespace weldx::ddia {

struct CaseBuildOptions {
  explain::LimeConfig lime;
  uint64_t seed = 0;
  double alpha = 0.5;
  std::function<int64_t()> clock = NowMillis;
};

// Runs inference on one image, renders the Grad-CAM and LIME overlays under
// `<artifact_root>/<case_id>/` (image.png, gradcam.png, lime.png plus the
// raw maps) and inserts a pending case. On any failure the partial
// artifacts are removed and nothing is persisted.
AuditCase CreateCase(AuditStore& store, const LoadedCheckpoint& checkpoint,
                     const std::filesystem::path& image_path,
                     const std::filesystem::path& artifact_root,
                     const CaseBuildOptions& options = {});

}  // namespace weldx::ddia

#endif  // WELDX_DDIA_CASE_BUILDER_H_
