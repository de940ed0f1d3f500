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

#ifndef WELDX_DDIA_AGGREGATE_H_
#define WELDX_DDIA_AGGREGATE_H_

#include <array>
#include <cstdint>
#include <span>

#include "weldx/common/jsonl.h"
#include "weldx/ddia/record.h"

namespace weldx::ddia {

// Indexed by ImageQuality / Explainer enum value; confidence bins are 1..5.
struct AggregateReport {
  int64_t record_count = 0;
  std::array<int64_t, 4> quality_counts{};
  std::array<double, 4> quality_distribution{};
  std::array<int64_t, 2> detected_counts{};
  std::array<int64_t, 2> undetected_counts{};
  std::array<double, 2> detection_rate{};
  std::array<std::array<int64_t, 5>, 2> confidence_histogram{};
  std::array<double, 2> mean_confidence{};
  // [quality][explainer]
  std::array<std::array<int64_t, 2>, 4> detected_by_quality{};
  // Detected fraction within each quality class; 0 for an empty class.
  std::array<std::array<double, 2>, 4> detection_rate_by_quality{};

  bool operator==(const AggregateReport&) const = default;
};

// Deduplicates with LatestPerAuditor, then counts. ValidationError on an
// empty input.
AggregateReport Aggregate(std::span<const AuditRecord> records);

Json ToJson(const AggregateReport& report);

}  // namespace weldx::ddia

#endif  // WELDX_DDIA_AGGREGATE_H_
