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

#ifndef WELDX_SEARCH_ANALYSIS_H_
#define WELDX_SEARCH_ANALYSIS_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "weldx/search/space.h"

namespace weldx::search {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Tukey box-plot summary. Quartiles use linear interpolation between order
// statistics (position (n - 1) * p); whiskers reach the most extreme values
// within 1.5 IQR of the quartiles; values beyond are outliers.
struct BoxStats {
  int64_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double whisker_low = 0, whisker_high = 0;
  std::vector<double> outliers;  // ascending
};

// ValidationError on an empty input.
BoxStats ComputeBoxStats(std::span<const double> values);

// Linear-interpolation quantile of an unsorted sample, p in [0, 1].
double Quantile(std::span<const double> values, double p);

struct AnalysisTables {
  // batch_size, lr, mode, arch, opt, objective; one row per trial.
  Table parallel_coords;
  // Keyed by dimension name: trial_id, value, objective.
  std::map<std::string, Table> scatter;
  // One row per transfer mode present in the log.
  Table mode_boxplot;
};

// ValidationError on an empty log.
AnalysisTables ExportAnalysis(const StudyLog& log);

// Writes parallel_coords.csv, mode_boxplot.csv and scatter_<dim>.csv.
void WriteAnalysis(const AnalysisTables& tables,
                   const std::filesystem::path& dir);

std::string ToCsv(const Table& table);

}  // namespace weldx::search

#endif  // WELDX_SEARCH_ANALYSIS_H_
