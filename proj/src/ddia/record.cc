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

#include "weldx/ddia/record.h"

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <utility>

namespace weldx::ddia {

std::string_view Name(ImageQuality v) {
  switch (v) {
    case ImageQuality::kClear: return "clear";
    case ImageQuality::kUnderexposed: return "underexposed";
    case ImageQuality::kOverexposed: return "overexposed";
    case ImageQuality::kNoisy: return "noisy";
  }
  return "?";
}

std::string_view Name(Visibility v) {
  switch (v) {
    case Visibility::kClearlyVisible: return "clearly_visible";
    case Visibility::kPartiallyVisible: return "partially_visible";
    case Visibility::kNotVisible: return "not_visible";
  }
  return "?";
}

std::string_view Name(DefectLabel v) {
  switch (v) {
    case DefectLabel::kCrack: return "crack";
    case DefectLabel::kLackOfPenetration: return "lack_of_penetration";
    case DefectLabel::kPorosity: return "porosity";
    case DefectLabel::kNone: return "none";
  }
  return "?";
}

std::string_view Name(Explainer v) {
  return v == Explainer::kGradCam ? "gradcam" : "lime";
}

std::string_view Name(CaseStatus v) {
  return v == CaseStatus::kPending ? "pending" : "reviewed";
}

std::optional<ImageQuality> ParseImageQuality(std::string_view s) {
  for (ImageQuality q : kAllQualities) {
    if (Name(q) == s) return q;
  }
  return std::nullopt;
}

std::optional<Visibility> ParseVisibility(std::string_view s) {
  for (Visibility v : {Visibility::kClearlyVisible, Visibility::kPartiallyVisible,
                       Visibility::kNotVisible}) {
    if (Name(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<DefectLabel> ParseDefectLabel(std::string_view s) {
  for (DefectLabel d : {DefectLabel::kCrack, DefectLabel::kLackOfPenetration,
                        DefectLabel::kPorosity, DefectLabel::kNone}) {
    if (Name(d) == s) return d;
  }
  return std::nullopt;
}

std::optional<CaseStatus> ParseCaseStatus(std::string_view s) {
  if (s == "pending") return CaseStatus::kPending;
  if (s == "reviewed") return CaseStatus::kReviewed;
  return std::nullopt;
}

std::vector<FieldError> CheckRecord(const AuditRecord& r) {
  std::vector<FieldError> errors;
  if (r.case_id.empty()) errors.push_back({"case_id", "must be non-empty"});
  if (r.auditor_id.empty()) errors.push_back({"auditor_id", "must be non-empty"});
  if (r.confidence_gradcam < 1 || r.confidence_gradcam > 5) {
    errors.push_back({"confidence_gradcam", "must be an integer in 1..5"});
  }
  if (r.confidence_lime < 1 || r.confidence_lime > 5) {
    errors.push_back({"confidence_lime", "must be an integer in 1..5"});
  }
  if (!r.detected_gradcam && r.visibility_gradcam != Visibility::kNotVisible) {
    errors.push_back({"visibility_gradcam",
                      "must be not_visible when detected_gradcam is false"});
  }
  if (!r.detected_lime && r.visibility_lime != Visibility::kNotVisible) {
    errors.push_back(
        {"visibility_lime", "must be not_visible when detected_lime is false"});
  }
  return errors;
}

void ValidateRecord(const AuditRecord& record) {
  std::vector<FieldError> errors = CheckRecord(record);
  if (!errors.empty()) {
    throw ValidationError("invalid audit record", std::move(errors));
  }
}

Json ToJson(const AuditRecord& r) {
  Json j;
  j["case_id"] = r.case_id;
  j["auditor_id"] = r.auditor_id;
  j["detected_gradcam"] = r.detected_gradcam;
  j["detected_lime"] = r.detected_lime;
  j["image_quality"] = Name(r.image_quality);
  j["visibility_gradcam"] = Name(r.visibility_gradcam);
  j["visibility_lime"] = Name(r.visibility_lime);
  j["defect_type"] = Name(r.defect_type);
  j["confidence_gradcam"] = r.confidence_gradcam;
  j["confidence_lime"] = r.confidence_lime;
  j["timestamp"] = FormatTimestamp(r.timestamp_ms);
  return j;
}

namespace {

class FieldReader {
 public:
  explicit FieldReader(const Json& j) : j_(j) {}

  const Json* Get(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) {
      errors_.push_back({key, "is required"});
      return nullptr;
    }
    return &*it;
  }

  std::string String(const char* key) {
    const Json* v = Get(key);
    if (v == nullptr) return {};
    if (!v->is_string()) {
      errors_.push_back({key, "must be a string"});
      return {};
    }
    return v->get<std::string>();
  }

  bool Bool(const char* key) {
    const Json* v = Get(key);
    if (v == nullptr) return false;
    if (!v->is_boolean()) {
      errors_.push_back({key, "must be a boolean"});
      return false;
    }
    return v->get<bool>();
  }

  int Confidence(const char* key) {
    const Json* v = Get(key);
    if (v == nullptr) return 1;
    if (!v->is_number_integer()) {
      errors_.push_back({key, "must be an integer in 1..5"});
      return 1;
    }
    const int64_t x = v->get<int64_t>();
    if (x < 1 || x > 5) {
      errors_.push_back({key, "must be an integer in 1..5"});
      return 1;
    }
    return static_cast<int>(x);
  }

  template <typename T, typename Parse>
  T Enum(const char* key, Parse parse, const char* allowed) {
    const std::string s = String(key);
    if (has_error(key)) return T{};
    std::optional<T> v = parse(s);
    if (!v) {
      errors_.push_back({key, std::string("must be one of ") + allowed});
      return T{};
    }
    return *v;
  }

  void RejectUnknown(std::initializer_list<const char*> extra_allowed) {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (seen_.count(it.key())) continue;
      bool ok = false;
      for (const char* a : extra_allowed) ok = ok || it.key() == a;
      if (!ok) errors_.push_back({it.key(), "unknown field"});
    }
  }

  bool has_error(const std::string& key) const {
    for (const FieldError& e : errors_) {
      if (e.field == key) return true;
    }
    return false;
  }

  std::vector<FieldError>& errors() { return errors_; }
  std::set<std::string>& seen() { return seen_; }

 private:
  const Json& j_;
  std::set<std::string> seen_;
  std::vector<FieldError> errors_;
};

}  // namespace

AuditRecord RecordFromJson(const Json& j, std::optional<int64_t> default_timestamp_ms) {
  if (!j.is_object()) {
    throw ValidationError("audit record must be a JSON object",
                          {{"", "must be a JSON object"}});
  }
  FieldReader in(j);
  AuditRecord r;
  r.case_id = in.String("case_id");
  r.auditor_id = in.String("auditor_id");
  r.detected_gradcam = in.Bool("detected_gradcam");
  r.detected_lime = in.Bool("detected_lime");
  r.image_quality = in.Enum<ImageQuality>(
      "image_quality", ParseImageQuality, "clear, underexposed, overexposed, noisy");
  constexpr const char* kVis = "clearly_visible, partially_visible, not_visible";
  r.visibility_gradcam =
      in.Enum<Visibility>("visibility_gradcam", ParseVisibility, kVis);
  r.visibility_lime = in.Enum<Visibility>("visibility_lime", ParseVisibility, kVis);
  r.defect_type = in.Enum<DefectLabel>(
      "defect_type", ParseDefectLabel, "crack, lack_of_penetration, porosity, none");
  r.confidence_gradcam = in.Confidence("confidence_gradcam");
  r.confidence_lime = in.Confidence("confidence_lime");

  in.seen().insert("timestamp");
  auto ts = j.find("timestamp");
  if (ts == j.end() || ts->is_null()) {
    if (default_timestamp_ms) {
      r.timestamp_ms = *default_timestamp_ms;
    } else {
      in.errors().push_back({"timestamp", "is required"});
    }
  } else if (!ts->is_string()) {
    in.errors().push_back({"timestamp", "must be a string"});
  } else {
    try {
      r.timestamp_ms = ParseTimestamp(ts->get<std::string>());
    } catch (const ValidationError&) {
      in.errors().push_back({"timestamp", "must be YYYY-MM-DDTHH:MM:SS[.mmm]Z"});
    }
  }
  in.RejectUnknown({"record_id"});

  std::vector<FieldError> errors = std::move(in.errors());
  if (errors.empty()) {
    errors = CheckRecord(r);
  } else {
    // Cross-field checks only for fields that parsed.
    for (FieldError& e : CheckRecord(r)) {
      bool dup = false;
      for (const FieldError& x : errors) dup = dup || x.field == e.field;
      if (!dup && (e.field == "visibility_gradcam" || e.field == "visibility_lime")) {
        const std::string det = e.field == "visibility_gradcam"
                                    ? "detected_gradcam" : "detected_lime";
        bool det_bad = false;
        for (const FieldError& x : errors) det_bad = det_bad || x.field == det;
        if (!det_bad) errors.push_back(std::move(e));
      }
    }
  }
  if (!errors.empty()) {
    throw ValidationError("invalid audit record", std::move(errors));
  }
  return r;
}

void ValidateCase(const AuditCase& c, const std::optional<std::string>& artifact_root) {
  std::vector<FieldError> errors;
  if (c.case_id.empty()) errors.push_back({"case_id", "must be non-empty"});
  const auto& p = c.prediction.probabilities;
  double sum = 0.0;
  bool finite = true;
  for (double v : p) {
    finite = finite && std::isfinite(v) && v >= 0.0;
    sum += v;
  }
  if (p.empty() || !finite || std::abs(sum - 1.0) > 1e-6) {
    errors.push_back({"prediction.probabilities",
                      "must be nonnegative and sum to 1 within 1e-6"});
  }
  if (c.prediction.class_index < 0 ||
      c.prediction.class_index >= static_cast<int>(p.size())) {
    errors.push_back({"prediction.class_index", "out of range"});
  }
  if (artifact_root) {
    namespace fs = std::filesystem;
    auto resolve = [&](const std::string& path) {
      fs::path q = path;
      return q.is_absolute() ? q : fs::path(*artifact_root) / q;
    };
    if (c.gradcam_overlay_path.empty() ||
        !fs::is_regular_file(resolve(c.gradcam_overlay_path))) {
      errors.push_back({"gradcam_overlay_path", "does not resolve to a file"});
    }
    if (c.lime_overlay_path.empty() ||
        !fs::is_regular_file(resolve(c.lime_overlay_path))) {
      errors.push_back({"lime_overlay_path", "does not resolve to a file"});
    }
  }
  if (!errors.empty()) throw ValidationError("invalid audit case", std::move(errors));
}

Json ToJson(const AuditCase& c) {
  Json j;
  j["case_id"] = c.case_id;
  j["image_path"] = c.image_path;
  j["prediction"] = {{"class_index", c.prediction.class_index},
                     {"class_name", c.prediction.class_name},
                     {"probabilities", c.prediction.probabilities}};
  j["gradcam_overlay_path"] = c.gradcam_overlay_path;
  j["lime_overlay_path"] = c.lime_overlay_path;
  j["status"] = Name(c.status);
  j["created_at"] = FormatTimestamp(c.created_ms);
  return j;
}

AuditCase CaseFromJson(const Json& j) {
  try {
    AuditCase c;
    c.case_id = j.at("case_id").get<std::string>();
    c.image_path = j.at("image_path").get<std::string>();
    const Json& p = j.at("prediction");
    c.prediction.class_index = p.at("class_index").get<int>();
    c.prediction.class_name = p.at("class_name").get<std::string>();
    c.prediction.probabilities = p.at("probabilities").get<std::vector<double>>();
    c.gradcam_overlay_path = j.at("gradcam_overlay_path").get<std::string>();
    c.lime_overlay_path = j.at("lime_overlay_path").get<std::string>();
    auto status = ParseCaseStatus(j.at("status").get<std::string>());
    if (!status) throw ValidationError("unknown case status");
    c.status = *status;
    c.created_ms = ParseTimestamp(j.at("created_at").get<std::string>());
    return c;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed audit case: ") + e.what());
  }
}

std::vector<AuditRecord> LatestPerAuditor(std::span<const AuditRecord> records) {
  struct Best {
    const AuditRecord* record;
    std::string key;
  };
  std::map<std::pair<std::string, std::string>, Best> latest;
  for (const AuditRecord& r : records) {
    auto k = std::make_pair(r.case_id, r.auditor_id);
    auto it = latest.find(k);
    if (it == latest.end()) {
      latest.emplace(k, Best{&r, {}});
      continue;
    }
    Best& b = it->second;
    if (r.timestamp_ms > b.record->timestamp_ms) {
      b = Best{&r, {}};
    } else if (r.timestamp_ms == b.record->timestamp_ms) {
      if (b.key.empty()) b.key = ToJson(*b.record).dump();
      std::string key = ToJson(r).dump();
      if (key > b.key) b = Best{&r, std::move(key)};
    }
  }
  std::vector<AuditRecord> out;
  out.reserve(latest.size());
  for (const auto& [k, b] : latest) out.push_back(*b.record);
  return out;
}

}  // namespace weldx::ddia
