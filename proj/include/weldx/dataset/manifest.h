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

#ifndef WELDX_DATASET_MANIFEST_H_
#define WELDX_DATASET_MANIFEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weldx::dataset {

// Fixed class order; confusion-matrix axes and model heads follow it.
inline constexpr std::array<std::string_view, 4> kClassNames = {
    "crack", "lack_of_penetration", "no_defect", "porosity"};
inline constexpr int kNumClasses = static_cast<int>(kClassNames.size());

// Index into kClassNames, or std::nullopt for an unknown name.
std::optional<int> ClassIndex(std::string_view name);

enum class Split { kUnassigned, kTrain, kVal };
enum class Origin { kOriginal, kAugmented };

std::string_view SplitName(Split split);
std::string_view OriginName(Origin origin);

struct SampleEntry {
  // Relative to DatasetManifest::root, with '/' separators.
  std::string path;
  int label = 0;
  Split split = Split::kUnassigned;
  Origin origin = Origin::kOriginal;
  // Present iff origin == kAugmented.
  std::optional<uint64_t> augment_seed;
  // Path of the original sample an augmented entry was derived from.
  std::optional<std::string> source;

  bool operator==(const SampleEntry&) const = default;
};

struct LoadWarning {
  std::string path;
  std::string message;
};

// Image corpus index. Operations below never mutate their input; each
// returns a new manifest.
struct DatasetManifest {
  std::vector<std::string> class_names;
  std::filesystem::path root;
  std::vector<SampleEntry> samples;
  // Files skipped while indexing (unreadable images).
  std::vector<LoadWarning> warnings;

  // Per-class sample counts, optionally restricted to one split.
  std::array<int64_t, kNumClasses> ClassCounts(
      std::optional<Split> split = std::nullopt) const;
  std::filesystem::path AbsolutePath(const SampleEntry& entry) const;
  // Checks label range, unique paths and the augmented/split invariants.
  // Throws ValidationError.
  void Validate() const;
};

// Indexes `<root>/<class_name>/*.{png,jpg,jpeg}` for each of the four class
// directories (other directories, e.g. `augmented/`, are ignored). Files
// without a recognizable image signature are skipped and reported in
// `warnings`. Throws ConfigError on a missing class directory or a class
// with no readable image.
DatasetManifest LoadManifest(const std::filesystem::path& root);

// Stratified split: for every class, round(val_fraction * n) samples (at
// least one and at most n - 1) go to validation. Deterministic in `seed`.
// ValidationError if val_fraction is outside (0, 1), samples are already
// split, or a class holds fewer than 2 samples.
DatasetManifest SplitManifest(const DatasetManifest& manifest,
                              double val_fraction, uint64_t seed);

// Tops up every class's training split to the largest training-class count
// with augmented copies of that class's original training samples. The
// validation split is never touched. A balanced manifest is returned
// unchanged.
DatasetManifest BalanceClasses(const DatasetManifest& manifest, uint64_t seed);

// Line-delimited JSON. The first line is a header object carrying the class
// order; each following line is one SampleEntry with keys
// path,label,split,origin,augment_seed (plus `source` for augmented rows).
void WriteManifest(const DatasetManifest& manifest,
                   const std::filesystem::path& file);
DatasetManifest ReadManifest(const std::filesystem::path& file,
                             const std::filesystem::path& root);

}  // namespace weldx::dataset

#endif  // WELDX_DATASET_MANIFEST_H_
