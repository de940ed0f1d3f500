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

#include "weldx/ddia/aggregate.h"

#include <vector>

#include "weldx/common/error.h"

namespace weldx::ddia {

AggregateReport Aggregate(std::span<const AuditRecord> records) {
  if (records.empty()) throw ValidationError("cannot aggregate zero records");
  const std::vector<AuditRecord> latest = LatestPerAuditor(records);
  AggregateReport rep;
  rep.record_count = static_cast<int64_t>(latest.size());
  std::array<int64_t, 2> confidence_sum{};
  for (const AuditRecord& r : latest) {
    const int q = static_cast<int>(r.image_quality);
    ++rep.quality_counts[q];
    for (Explainer e : kAllExplainers) {
      const int x = static_cast<int>(e);
      if (r.detected(e)) {
        ++rep.detected_counts[x];
        ++rep.detected_by_quality[q][x];
      } else {
        ++rep.undetected_counts[x];
      }
      ++rep.confidence_histogram[x][r.confidence(e) - 1];
      confidence_sum[x] += r.confidence(e);
    }
  }
  const double n = static_cast<double>(rep.record_count);
  for (int q = 0; q < 4; ++q) {
    rep.quality_distribution[q] = rep.quality_counts[q] / n;
    for (int x = 0; x < 2; ++x) {
      rep.detection_rate_by_quality[q][x] =
          rep.quality_counts[q] == 0
              ? 0.0
              : static_cast<double>(rep.detected_by_quality[q][x]) /
                    rep.quality_counts[q];
    }
  }
  for (int x = 0; x < 2; ++x) {
    rep.detection_rate[x] = rep.detected_counts[x] / n;
    rep.mean_confidence[x] = confidence_sum[x] / n;
  }
  return rep;
}

Json ToJson(const AggregateReport& rep) {
  Json j;
  j["record_count"] = rep.record_count;
  Json quality = Json::object();
  Json quality_counts = Json::object();
  for (ImageQuality q : kAllQualities) {
    const int i = static_cast<int>(q);
    quality[std::string(Name(q))] = rep.quality_distribution[i];
    quality_counts[std::string(Name(q))] = rep.quality_counts[i];
  }
  j["quality_distribution"] = std::move(quality);
  j["quality_counts"] = std::move(quality_counts);
  Json detection = Json::object();
  Json histogram = Json::object();
  Json mean = Json::object();
  for (Explainer e : kAllExplainers) {
    const int x = static_cast<int>(e);
    const std::string name(Name(e));
    detection[name] = {{"rate", rep.detection_rate[x]},
                       {"detected", rep.detected_counts[x]},
                       {"not_detected", rep.undetected_counts[x]}};
    histogram[name] = rep.confidence_histogram[x];
    mean[name] = rep.mean_confidence[x];
  }
  j["detection_rate"] = std::move(detection);
  j["confidence_histogram"] = std::move(histogram);
  j["mean_confidence"] = std::move(mean);
  Json by_quality = Json::object();
  for (ImageQuality q : kAllQualities) {
    const int i = static_cast<int>(q);
    Json entry = {{"count", rep.quality_counts[i]}};
    for (Explainer e : kAllExplainers) {
      const int x = static_cast<int>(e);
      entry[std::string(Name(e))] = {{"detected", rep.detected_by_quality[i][x]},
                                     {"rate", rep.detection_rate_by_quality[i][x]}};
    }
    by_quality[std::string(Name(q))] = std::move(entry);
  }
  j["detection_by_quality"] = std::move(by_quality);
  return j;
}

}  // namespace weldx::ddia
