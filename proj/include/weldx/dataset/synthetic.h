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

#ifndef WELDX_DATASET_SYNTHETIC_H_
#define WELDX_DATASET_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>

namespace weldx::dataset {

struct SyntheticCorpusOptions {
  int per_class = 20;
  int size = 64;
  uint64_t seed = 0;
};

struct SyntheticCorpus {
  int images = 0;
  // annotations.jsonl at the corpus root, one line per defect image.
  std::filesystem::path annotations;
};

// Writes a small radiograph-like corpus in the layout LoadManifest expects:
// `<root>/<class>/<class>_NNNN.png`, grayscale, a horizontal weld bead over
// noise. Cracks are thin dark oblique lines, lack of penetration a dark
// straight line along the bead center and porosity a cluster of dark pores;
// no_defect images have none. Ground-truth masks go to
// `<root>/masks/<stem>_mask.png`. Deterministic in `seed`.
SyntheticCorpus SynthesizeCorpus(const std::filesystem::path& root,
                                 const SyntheticCorpusOptions& options);

}  // namespace weldx::dataset

#endif  // WELDX_DATASET_SYNTHETIC_H_
