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

#ifndef WELDX_SEARCH_SAMPLER_H_
#define WELDX_SEARCH_SAMPLER_H_

#include <cstdint>
#include <span>

#include "weldx/common/random.h"
#include "weldx/search/space.h"

namespace weldx::search {

// Settings of the adaptive (tree-structured Parzen estimator) sampler.
struct AdaptiveSamplerOptions {
  // Random draws until the history holds this many trials.
  int startup_trials = 10;
  // Fraction of history (by objective) forming the "good" density.
  double good_fraction = 0.25;
  // Candidates drawn per suggestion; the one with the highest good/bad
  // density ratio is returned.
  int candidates = 24;
  // Additive smoothing per categorical choice in the good and bad densities.
  double pseudocount = 2.0;
  // Weight of the uniform prior component of the learning-rate densities.
  double prior_weight = 1.0;
  // Candidates come from the good density re-fitted with this (larger)
  // smoothing, used both as categorical pseudocount and as learning-rate
  // prior weight. Keeps choices that only appeared in bad trials reachable.
  double proposal_pseudocount = 8.0;
};

// Draws the configuration of trial `trial_id`. All randomness derives from
// (study_seed, trial_id), so the same history and seed always produce the
// same configuration. The random sampler is uniform over categorical choices
// and log-uniform over the learning rate; the adaptive sampler falls back to
// exactly that draw while history holds fewer than `startup_trials` trials.
// The returned config carries seed = TrialSeed(study_seed, trial_id).
TrialConfig SampleConfig(const SearchSpace& space, std::span<const StudyEntry> history,
                         SamplerKind sampler, int64_t trial_id,
                         uint64_t study_seed,
                         const AdaptiveSamplerOptions& options = {});

uint64_t TrialSeed(uint64_t study_seed, int64_t trial_id);

// Parzen estimator over one log-scaled continuous dimension, exposed for
// tests. Observations and bounds are in log space.
class ParzenEstimator {
 public:
  ParzenEstimator(std::span<const double> observations, double low, double high,
                  double prior_weight);
  double LogPdf(double x) const;
  double Sample(Rng& rng) const;

 private:
  std::vector<double> mus_;
  std::vector<double> sigmas_;
  std::vector<double> weights_;
  double low_;
  double high_;
};

}  // namespace weldx::search

#endif  // WELDX_SEARCH_SAMPLER_H_
