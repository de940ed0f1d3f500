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

#include "weldx/search/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "weldx/common/error.h"

namespace weldx::search {

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double Quantile(std::span<const double> values, double p) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = (v.size() - 1) * std::clamp(p, 0.0, 1.0);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

BoxStats ComputeBoxStats(std::span<const double> values) {
  if (values.empty()) throw ValidationError("box statistics of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  BoxStats s;
  s.count = static_cast<int64_t>(v.size());
  s.min = v.front();
  s.max = v.back();
  s.q1 = Quantile(v, 0.25);
  s.median = Quantile(v, 0.5);
  s.q3 = Quantile(v, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      s.outliers.push_back(x);
      continue;
    }
    s.whisker_low = std::min(s.whisker_low, x);
    s.whisker_high = std::max(s.whisker_high, x);
  }
  return s;
}

AnalysisTables ExportAnalysis(const StudyLog& log) {
  if (log.trials.empty()) throw ValidationError("cannot analyse an empty log");
  AnalysisTables t;
  t.parallel_coords.header = {"batch_size", "lr", "mode", "arch", "opt",
                              "objective"};
  const std::vector<std::string> dims = {"batch_size", "lr", "mode", "arch",
                                         "opt"};
  for (const std::string& d : dims) {
    t.scatter[d].header = {"trial_id", d, "objective"};
  }
  std::map<std::string, std::vector<double>> by_mode;
  for (const StudyEntry& e : log.trials) {
    const TrialConfig& c = e.config;
    const std::string obj = Num(e.result.objective);
    const std::vector<std::string> values = {
        std::to_string(c.batch_size), Num(c.lr), std::string(Name(c.mode)),
        std::string(Name(c.arch)), std::string(Name(c.opt))};
    auto row = values;
    row.push_back(obj);
    t.parallel_coords.rows.push_back(std::move(row));
    for (size_t i = 0; i < dims.size(); ++i) {
      t.scatter[dims[i]].rows.push_back(
          {std::to_string(c.trial_id), values[i], obj});
    }
    by_mode[std::string(Name(c.mode))].push_back(e.result.objective);
  }
  t.mode_boxplot.header = {"mode",   "count",       "min",          "q1",
                           "median", "q3",          "max",          "whisker_low",
                           "whisker_high", "outliers"};
  for (TransferMode m : kAllTransferModes) {
    auto it = by_mode.find(std::string(Name(m)));
    if (it == by_mode.end()) continue;
    const BoxStats s = ComputeBoxStats(it->second);
    std::string outliers;
    for (double o : s.outliers) {
      if (!outliers.empty()) outliers += ';';
      outliers += Num(o);
    }
    t.mode_boxplot.rows.push_back(
        {it->first, std::to_string(s.count), Num(s.min), Num(s.q1),
         Num(s.median), Num(s.q3), Num(s.max), Num(s.whisker_low),
         Num(s.whisker_high), outliers});
  }
  return t;
}

std::string ToCsv(const Table& table) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += CsvField(row[i]);
    }
    out += '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
  return out;
}

void WriteAnalysis(const AnalysisTables& tables,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFileBytes(dir / "parallel_coords.csv", ToCsv(tables.parallel_coords));
  WriteFileBytes(dir / "mode_boxplot.csv", ToCsv(tables.mode_boxplot));
  for (const auto& [dim, table] : tables.scatter) {
    WriteFileBytes(dir / ("scatter_" + dim + ".csv"), ToCsv(table));
  }
}

}  // namespace weldx::search
