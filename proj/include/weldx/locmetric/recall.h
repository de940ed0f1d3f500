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

#ifndef WELDX_LOCMETRIC_RECALL_H_
#define WELDX_LOCMETRIC_RECALL_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weldx/common/grid.h"
#include "weldx/common/jsonl.h"
#include "weldx/explain/explanation_map.h"

namespace weldx::locmetric {

enum class RecallMode { kSoft, kBinary };
enum class DefectType { kCrack, kLackOfPenetration, kPorosity };

std::string_view Name(RecallMode mode);
RecallMode ParseRecallMode(std::string_view name);
std::string_view Name(DefectType type);
DefectType ParseDefectType(std::string_view name);

// Expert-annotated defect region of one image.
struct GroundTruthMask {
  BinaryGrid mask;
  std::string image_path;
  DefectType defect_type = DefectType::kCrack;
  std::string annotator;

  // ValidationError unless values are 0/1 with at least one positive pixel.
  void Validate() const;
};

struct RecallRecord {
  std::string image_path;
  double recall = 0.0;
  RecallMode mode = RecallMode::kBinary;
  std::optional<double> tau;  // present iff mode == kBinary
  std::optional<DefectType> defect_type;
  // Covered mass and positive-pixel count; recall = numerator/denominator.
  double numerator = 0.0;
  double denominator = 0.0;
};

// cell = 1 iff value >= tau. ValidationError when tau is outside [0, 1] or
// the map is not normalized.
BinaryGrid BinarizeHeatmap(const explain::ExplanationMap& map, double tau);

// Soft: sum(L * G) / sum(G) with L the normalized map. Binary: the same with
// L replaced by BinarizeHeatmap(L, tau). The map must already be at mask
// resolution. ValidationError on a size mismatch, a bad tau or an empty
// mask.
RecallRecord Recall(const explain::ExplanationMap& map, const GroundTruthMask& gt,
                    RecallMode mode, double tau = 0.5);

// Mean of per-image recalls. ValidationError on an empty or mixed-mode list.
double AverageRecall(std::span<const RecallRecord> records);

// Dataset-pooled reading: total covered mass over total mask pixels.
double PooledRecall(
    std::span<const std::pair<explain::ExplanationMap, GroundTruthMask>> pairs,
    RecallMode mode, double tau = 0.5);
// Same, from already computed records.
double PooledRecall(std::span<const RecallRecord> records);

// Loads a single-channel mask PNG; nonzero pixels are defect.
GroundTruthMask LoadMask(const std::filesystem::path& mask_path,
                         const std::string& image_path, DefectType type,
                         const std::string& annotator);

// `<image_stem>_mask.png` beside the image.
std::filesystem::path DefaultMaskPath(const std::filesystem::path& image_path);

struct AnnotationEntry {
  std::string image_path;
  std::string mask_path;
  DefectType defect_type = DefectType::kCrack;
  std::string annotator;
};

// annotations.jsonl: {image_path, defect_type, annotator[, mask_path]}.
// Relative paths resolve against the file's directory.
std::vector<AnnotationEntry> ReadAnnotations(const std::filesystem::path& file);

// Per-image records, average and pooled aggregates, per-defect-type
// breakdown, and the mode/tau used.
Json RecallReport(std::span<const RecallRecord> records);

}  // namespace weldx::locmetric

#endif  // WELDX_LOCMETRIC_RECALL_H_
