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

#include "weldx/dataset/manifest.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <opencv2/imgcodecs.hpp>

#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"
#include "weldx/common/random.h"

namespace weldx::dataset {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kManifestFormat = "weldx-manifest/1";

bool HasImageExtension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<std::string> DefaultClassNames() {
  return {kClassNames.begin(), kClassNames.end()};
}

Split ParseSplit(const Json& j) {
  if (j.is_null()) return Split::kUnassigned;
  const std::string s = j.get<std::string>();
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  throw ValidationError("unknown split '" + s + "'");
}

Origin ParseOrigin(const std::string& s) {
  if (s == "original") return Origin::kOriginal;
  if (s == "augmented") return Origin::kAugmented;
  throw ValidationError("unknown origin '" + s + "'");
}

}  // namespace

std::optional<int> ClassIndex(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kClassNames[i] == name) return i;
  }
  return std::nullopt;
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kUnassigned:
      break;
  }
  return "unassigned";
}

std::string_view OriginName(Origin origin) {
  return origin == Origin::kOriginal ? "original" : "augmented";
}

std::array<int64_t, kNumClasses> DatasetManifest::ClassCounts(
    std::optional<Split> split) const {
  std::array<int64_t, kNumClasses> counts{};
  for (const SampleEntry& s : samples) {
    if (split && s.split != *split) continue;
    ++counts[s.label];
  }
  return counts;
}

fs::path DatasetManifest::AbsolutePath(const SampleEntry& entry) const {
  return root / fs::path(entry.path);
}

void DatasetManifest::Validate() const {
  if (class_names.size() != kClassNames.size()) {
    throw ValidationError("manifest must have exactly 4 class names");
  }
  std::unordered_set<std::string> seen;
  for (const SampleEntry& s : samples) {
    if (s.label < 0 || s.label >= kNumClasses) {
      throw ValidationError("sample '" + s.path + "' has label out of range");
    }
    if (!seen.insert(s.path).second) {
      throw ValidationError("duplicate sample path '" + s.path + "'");
    }
    if (s.origin == Origin::kAugmented) {
      if (!s.augment_seed) {
        throw ValidationError("augmented sample '" + s.path +
                              "' has no augment_seed");
      }
      if (s.split != Split::kTrain) {
        throw ValidationError("augmented sample '" + s.path +
                              "' outside the train split");
      }
    }
  }
}

DatasetManifest LoadManifest(const fs::path& root) {
  DatasetManifest m;
  m.class_names = DefaultClassNames();
  m.root = root;
  for (int label = 0; label < kNumClasses; ++label) {
    const std::string name(kClassNames[label]);
    const fs::path dir = root / name;
    if (!fs::is_directory(dir)) {
      throw ConfigError("missing class directory '" + dir.string() + "'");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && HasImageExtension(e.path())) {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    int readable = 0;
    for (const fs::path& f : files) {
      const std::string rel = name + "/" + f.filename().string();
      std::error_code ec;
      if (fs::file_size(f, ec) == 0 || ec || !cv::haveImageReader(f.string())) {
        m.warnings.push_back({rel, "unreadable image skipped"});
        continue;
      }
      SampleEntry e;
      e.path = rel;
      e.label = label;
      m.samples.push_back(std::move(e));
      ++readable;
    }
    if (readable == 0) {
      throw ConfigError("class directory '" + dir.string() +
                        "' holds no readable image");
    }
  }
  return m;
}

DatasetManifest SplitManifest(const DatasetManifest& manifest,
                              double val_fraction, uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ValidationError("val_fraction must lie in (0, 1)");
  }
  std::array<std::vector<size_t>, kNumClasses> by_class;
  for (size_t i = 0; i < manifest.samples.size(); ++i) {
    const SampleEntry& s = manifest.samples[i];
    if (s.split != Split::kUnassigned) {
      throw ValidationError("sample '" + s.path + "' is already split");
    }
    by_class[s.label].push_back(i);
  }
  DatasetManifest out = manifest;
  for (int c = 0; c < kNumClasses; ++c) {
    auto& idx = by_class[c];
    const int64_t n = static_cast<int64_t>(idx.size());
    if (n < 2) {
      throw ValidationError("class '" + std::string(kClassNames[c]) +
                            "' has fewer than 2 samples; cannot stratify");
    }
    int64_t n_val = static_cast<int64_t>(std::llround(val_fraction * n));
    n_val = std::clamp<int64_t>(n_val, 1, n - 1);
    Rng rng(DeriveSeed({seed, static_cast<uint64_t>(c)}));
    rng.Shuffle(idx);
    for (int64_t k = 0; k < n; ++k) {
      out.samples[idx[k]].split = k < n_val ? Split::kVal : Split::kTrain;
    }
  }
  return out;
}

DatasetManifest BalanceClasses(const DatasetManifest& manifest, uint64_t seed) {
  std::array<std::vector<size_t>, kNumClasses> originals;
  std::array<int64_t, kNumClasses> train_counts{};
  std::array<int64_t, kNumClasses> augmented_counts{};
  std::unordered_set<std::string> paths;
  for (size_t i = 0; i < manifest.samples.size(); ++i) {
    const SampleEntry& s = manifest.samples[i];
    if (s.split == Split::kUnassigned) {
      throw ValidationError("balance_classes requires split samples; '" +
                            s.path + "' is unassigned");
    }
    paths.insert(s.path);
    if (s.split != Split::kTrain) continue;
    ++train_counts[s.label];
    if (s.origin == Origin::kOriginal) {
      originals[s.label].push_back(i);
    } else {
      ++augmented_counts[s.label];
    }
  }
  const int64_t target =
      *std::max_element(train_counts.begin(), train_counts.end());

  DatasetManifest out = manifest;
  for (int c = 0; c < kNumClasses; ++c) {
    const int64_t deficit = target - train_counts[c];
    if (deficit <= 0) continue;
    auto sources = originals[c];
    if (sources.empty()) {
      throw ValidationError("class '" + std::string(kClassNames[c]) +
                            "' has no original training sample to augment");
    }
    Rng rng(DeriveSeed({seed, static_cast<uint64_t>(c), 0xa11ULL}));
    rng.Shuffle(sources);
    const std::string class_name(kClassNames[c]);
    int64_t k = augmented_counts[c];
    for (int64_t made = 0; made < deficit; ++k) {
      const SampleEntry& src = manifest.samples[sources[made % sources.size()]];
      const uint64_t aug_seed =
          DeriveSeed({seed, static_cast<uint64_t>(c), static_cast<uint64_t>(k)});
      const std::string stem = fs::path(src.path).stem().string();
      std::string path = "augmented/" + class_name + "/" + stem + "__aug" +
                         std::to_string(k) + ".png";
      if (!paths.insert(path).second) continue;
      out.samples.push_back({.path = std::move(path),
                             .label = c,
                             .split = Split::kTrain,
                             .origin = Origin::kAugmented,
                             .augment_seed = aug_seed,
                             .source = src.path});
      ++made;
    }
  }
  return out;
}

void WriteManifest(const DatasetManifest& manifest, const fs::path& file) {
  std::vector<Json> lines;
  lines.reserve(manifest.samples.size() + 1);
  Json header;
  header["format"] = kManifestFormat;
  header["class_names"] = manifest.class_names;
  lines.push_back(std::move(header));
  for (const SampleEntry& s : manifest.samples) {
    Json j;
    j["path"] = s.path;
    j["label"] = manifest.class_names.at(s.label);
    j["split"] = s.split == Split::kUnassigned ? Json(nullptr)
                                                : Json(SplitName(s.split));
    j["origin"] = OriginName(s.origin);
    j["augment_seed"] = s.augment_seed ? Json(*s.augment_seed) : Json(nullptr);
    if (s.source) j["source"] = *s.source;
    lines.push_back(std::move(j));
  }
  WriteJsonLines(file, lines);
}

DatasetManifest ReadManifest(const fs::path& file, const fs::path& root) {
  const std::vector<Json> lines = ReadJsonLines(file);
  DatasetManifest m;
  m.root = root;
  m.class_names = DefaultClassNames();
  size_t start = 0;
  if (!lines.empty() && lines[0].contains("format")) {
    m.class_names = lines[0].at("class_names").get<std::vector<std::string>>();
    start = 1;
  }
  if (m.class_names != DefaultClassNames()) {
    throw ValidationError("manifest class order differs from the fixed order");
  }
  for (size_t i = start; i < lines.size(); ++i) {
    const Json& j = lines[i];
    try {
      SampleEntry s;
      s.path = j.at("path").get<std::string>();
      const auto label = ClassIndex(j.at("label").get<std::string>());
      if (!label) throw ValidationError("unknown label");
      s.label = *label;
      s.split = ParseSplit(j.at("split"));
      s.origin = ParseOrigin(j.at("origin").get<std::string>());
      if (!j.at("augment_seed").is_null()) {
        s.augment_seed = j.at("augment_seed").get<uint64_t>();
      }
      if (j.contains("source")) s.source = j.at("source").get<std::string>();
      m.samples.push_back(std::move(s));
    } catch (const Json::exception& e) {
      throw ValidationError(file.string() + ": line " + std::to_string(i + 1) +
                            ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(file.string() + ": line " + std::to_string(i + 1) +
                            ": " + e.what());
    }
  }
  m.Validate();
  return m;
}

}  // namespace weldx::dataset
