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

#include "weldx/locmetric/recall.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <opencv2/imgcodecs.hpp>

#include "weldx/common/error.h"

namespace weldx::locmetric {

namespace fs = std::filesystem;
using explain::ExplanationMap;

std::string_view Name(RecallMode mode) {
  return mode == RecallMode::kSoft ? "soft" : "binary";
}

RecallMode ParseRecallMode(std::string_view name) {
  if (name == "soft") return RecallMode::kSoft;
  if (name == "binary") return RecallMode::kBinary;
  throw ConfigError("unknown recall mode '" + std::string(name) + "'");
}

std::string_view Name(DefectType type) {
  switch (type) {
    case DefectType::kCrack: return "crack";
    case DefectType::kLackOfPenetration: return "lack_of_penetration";
    case DefectType::kPorosity: return "porosity";
  }
  return "?";
}

DefectType ParseDefectType(std::string_view name) {
  if (name == "crack") return DefectType::kCrack;
  if (name == "lack_of_penetration") return DefectType::kLackOfPenetration;
  if (name == "porosity") return DefectType::kPorosity;
  throw ValidationError("unknown defect type '" + std::string(name) + "'");
}

void GroundTruthMask::Validate() const {
  int64_t positives = 0;
  for (unsigned char v : mask.values()) {
    if (v > 1) throw ValidationError("mask values must be 0 or 1");
    positives += v;
  }
  if (positives == 0) {
    throw ValidationError("mask of '" + image_path + "' has no positive pixel");
  }
}

namespace {

void CheckTau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ValidationError("tau must lie in [0, 1]");
  }
}

void CheckNormalized(const ExplanationMap& map) {
  if (!map.normalized) throw ValidationError("map must be normalized to [0, 1]");
  for (double v : map.values.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("normalized map holds a value outside [0, 1]");
    }
  }
}

}  // namespace

BinaryGrid BinarizeHeatmap(const ExplanationMap& map, double tau) {
  CheckTau(tau);
  CheckNormalized(map);
  BinaryGrid out(map.values.height(), map.values.width(), 0);
  for (size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = map.values.values()[i] >= tau ? 1 : 0;
  }
  return out;
}

RecallRecord Recall(const ExplanationMap& map, const GroundTruthMask& gt,
                    RecallMode mode, double tau) {
  if (!map.values.SameShape(gt.mask)) {
    throw ValidationError("map is " + std::to_string(map.values.height()) + "x" +
                          std::to_string(map.values.width()) + " but mask is " +
                          std::to_string(gt.mask.height()) + "x" +
                          std::to_string(gt.mask.width()));
  }
  gt.Validate();
  RecallRecord rec;
  rec.image_path = gt.image_path;
  rec.mode = mode;
  rec.defect_type = gt.defect_type;
  double num = 0.0;
  double den = 0.0;
  if (mode == RecallMode::kBinary) {
    const BinaryGrid bin = BinarizeHeatmap(map, tau);
    rec.tau = tau;
    for (size_t i = 0; i < bin.size(); ++i) {
      num += bin.values()[i] * gt.mask.values()[i];
      den += gt.mask.values()[i];
    }
  } else {
    CheckNormalized(map);
    for (size_t i = 0; i < map.values.size(); ++i) {
      num += map.values.values()[i] * gt.mask.values()[i];
      den += gt.mask.values()[i];
    }
  }
  rec.numerator = num;
  rec.denominator = den;
  rec.recall = std::clamp(num / den, 0.0, 1.0);
  return rec;
}

double AverageRecall(std::span<const RecallRecord> records) {
  if (records.empty()) throw ValidationError("average recall of an empty list");
  double sum = 0.0;
  for (const RecallRecord& r : records) {
    if (r.mode != records[0].mode || r.tau != records[0].tau) {
      throw ValidationError("records mix recall modes or thresholds");
    }
    sum += r.recall;
  }
  return sum / records.size();
}

double PooledRecall(std::span<const RecallRecord> records) {
  if (records.empty()) throw ValidationError("pooled recall of an empty list");
  double num = 0.0, den = 0.0;
  for (const RecallRecord& r : records) {
    if (r.mode != records[0].mode || r.tau != records[0].tau) {
      throw ValidationError("records mix recall modes or thresholds");
    }
    num += r.numerator;
    den += r.denominator;
  }
  return num / den;
}

double PooledRecall(
    std::span<const std::pair<ExplanationMap, GroundTruthMask>> pairs,
    RecallMode mode, double tau) {
  if (pairs.empty()) throw ValidationError("pooled recall of an empty list");
  std::vector<RecallRecord> records;
  records.reserve(pairs.size());
  for (const auto& [map, gt] : pairs) records.push_back(Recall(map, gt, mode, tau));
  return PooledRecall(records);
}

GroundTruthMask LoadMask(const fs::path& mask_path, const std::string& image_path,
                         DefectType type, const std::string& annotator) {
  const cv::Mat raw = cv::imread(mask_path.string(), cv::IMREAD_GRAYSCALE);
  if (raw.empty()) throw DecodeError(mask_path.string(), "unreadable mask");
  GroundTruthMask gt;
  gt.image_path = image_path;
  gt.defect_type = type;
  gt.annotator = annotator;
  gt.mask = BinaryGrid(raw.rows, raw.cols, 0);
  for (int y = 0; y < raw.rows; ++y) {
    for (int x = 0; x < raw.cols; ++x) gt.mask(y, x) = raw.at<uchar>(y, x) ? 1 : 0;
  }
  gt.Validate();
  return gt;
}

fs::path DefaultMaskPath(const fs::path& image_path) {
  return image_path.parent_path() / (image_path.stem().string() + "_mask.png");
}

std::vector<AnnotationEntry> ReadAnnotations(const fs::path& file) {
  const fs::path base = file.parent_path();
  std::vector<AnnotationEntry> out;
  int line = 0;
  for (const Json& j : ReadJsonLines(file)) {
    ++line;
    try {
      AnnotationEntry e;
      fs::path image = j.at("image_path").get<std::string>();
      if (image.is_relative()) image = base / image;
      e.image_path = image.string();
      fs::path mask = j.contains("mask_path")
                          ? fs::path(j["mask_path"].get<std::string>())
                          : DefaultMaskPath(j.at("image_path").get<std::string>());
      if (mask.is_relative()) mask = base / mask;
      e.mask_path = mask.string();
      e.defect_type = ParseDefectType(j.at("defect_type").get<std::string>());
      e.annotator = j.value("annotator", "");
      out.push_back(std::move(e));
    } catch (const Json::exception& ex) {
      throw ValidationError(file.string() + ": line " + std::to_string(line) +
                            ": " + ex.what());
    }
  }
  return out;
}

Json RecallReport(std::span<const RecallRecord> records) {
  Json j;
  if (records.empty()) throw ValidationError("empty recall report");
  j["mode"] = Name(records[0].mode);
  j["tau"] = records[0].tau ? Json(*records[0].tau) : Json(nullptr);
  j["count"] = records.size();
  j["average_recall"] = AverageRecall(records);
  j["pooled_recall"] = PooledRecall(records);
  std::map<std::string, std::vector<RecallRecord>> by_type;
  for (const RecallRecord& r : records) {
    if (r.defect_type) by_type[std::string(Name(*r.defect_type))].push_back(r);
  }
  Json breakdown = Json::object();
  for (const auto& [type, recs] : by_type) {
    breakdown[type] = {{"count", recs.size()},
                       {"average_recall", AverageRecall(recs)},
                       {"pooled_recall", PooledRecall(recs)}};
  }
  j["per_defect_type"] = std::move(breakdown);
  Json per_image = Json::array();
  for (const RecallRecord& r : records) {
    per_image.push_back(
        {{"image_path", r.image_path},
         {"defect_type", r.defect_type ? Json(Name(*r.defect_type)) : Json(nullptr)},
         {"recall", r.recall},
         {"mode", Name(r.mode)},
         {"tau", r.tau ? Json(*r.tau) : Json(nullptr)}});
  }
  j["records"] = std::move(per_image);
  return j;
}

}  // namespace weldx::locmetric
