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

#ifndef WELDX_DDIA_RECORD_H_
#define WELDX_DDIA_RECORD_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"

namespace weldx::ddia {

enum class ImageQuality { kClear, kUnderexposed, kOverexposed, kNoisy };
enum class Visibility { kClearlyVisible, kPartiallyVisible, kNotVisible };
enum class DefectLabel { kCrack, kLackOfPenetration, kPorosity, kNone };
enum class Explainer { kGradCam, kLime };
enum class CaseStatus { kPending, kReviewed };

inline constexpr std::array<ImageQuality, 4> kAllQualities = {
    ImageQuality::kClear, ImageQuality::kUnderexposed,
    ImageQuality::kOverexposed, ImageQuality::kNoisy};
inline constexpr std::array<Explainer, 2> kAllExplainers = {Explainer::kGradCam,
                                                            Explainer::kLime};

std::string_view Name(ImageQuality v);
std::string_view Name(Visibility v);
std::string_view Name(DefectLabel v);
std::string_view Name(Explainer v);
std::string_view Name(CaseStatus v);
std::optional<ImageQuality> ParseImageQuality(std::string_view s);
std::optional<Visibility> ParseVisibility(std::string_view s);
std::optional<DefectLabel> ParseDefectLabel(std::string_view s);
std::optional<CaseStatus> ParseCaseStatus(std::string_view s);

// One auditor's questionnaire for one case. `detected_*` records whether the
// explainer highlighted the actual defect region.
struct AuditRecord {
  std::string case_id;
  std::string auditor_id;
  bool detected_gradcam = false;
  bool detected_lime = false;
  ImageQuality image_quality = ImageQuality::kClear;
  Visibility visibility_gradcam = Visibility::kNotVisible;
  Visibility visibility_lime = Visibility::kNotVisible;
  DefectLabel defect_type = DefectLabel::kNone;
  int confidence_gradcam = 1;
  int confidence_lime = 1;
  int64_t timestamp_ms = 0;

  bool detected(Explainer e) const {
    return e == Explainer::kGradCam ? detected_gradcam : detected_lime;
  }
  int confidence(Explainer e) const {
    return e == Explainer::kGradCam ? confidence_gradcam : confidence_lime;
  }

  bool operator==(const AuditRecord&) const = default;
};

// Empty when the record satisfies every invariant.
std::vector<FieldError> CheckRecord(const AuditRecord& record);
// ValidationError listing all failing fields.
void ValidateRecord(const AuditRecord& record);

Json ToJson(const AuditRecord& record);
// Collects every missing, mistyped or out-of-range field into one
// ValidationError. `timestamp` may be omitted when `default_timestamp_ms` is
// given. Unknown keys are rejected, except "record_id".
AuditRecord RecordFromJson(const Json& j,
                           std::optional<int64_t> default_timestamp_ms = {});

// Model output presented to auditors.
struct Prediction {
  int class_index = 0;
  std::string class_name;
  std::vector<double> probabilities;

  bool operator==(const Prediction&) const = default;
};

struct AuditCase {
  std::string case_id;
  std::string image_path;
  Prediction prediction;
  // Relative to the case artifact root unless absolute.
  std::string gradcam_overlay_path;
  std::string lime_overlay_path;
  CaseStatus status = CaseStatus::kPending;
  int64_t created_ms = 0;

  bool operator==(const AuditCase&) const = default;
};

// Probability vector must sum to 1 within 1e-6 and index the predicted
// class. When `artifact_root` is given, both overlays must exist on disk.
void ValidateCase(const AuditCase& c,
                  const std::optional<std::string>& artifact_root = {});

Json ToJson(const AuditCase& c);
AuditCase CaseFromJson(const Json& j);

// Keeps, for each (case_id, auditor_id), the record with the latest
// timestamp; equal timestamps resolve to the lexicographically greatest
// serialized record so the outcome never depends on input order. Output is
// sorted by (case_id, auditor_id).
std::vector<AuditRecord> LatestPerAuditor(std::span<const AuditRecord> records);

}  // namespace weldx::ddia

#endif  // WELDX_DDIA_RECORD_H_
