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

#include "weldx/search/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weldx/common/random.h"

namespace weldx::search {

namespace {

constexpr uint64_t kSampleTag = 0x5a3b1e;
constexpr uint64_t kTrainTag = 0x7e41a;

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Smoothed categorical density: (count + alpha) / (n + alpha * K).
std::vector<double> CategoricalDensity(const std::vector<size_t>& observed,
                                       size_t num_choices, double alpha) {
  std::vector<double> p(num_choices, alpha);
  for (size_t k : observed) p[k] += 1.0;
  const double total = observed.size() + alpha * num_choices;
  for (double& v : p) v /= total;
  return p;
}

template <typename T>
size_t IndexOf(const std::vector<T>& v, const T& x) {
  return static_cast<size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

TrialConfig RandomDraw(const SearchSpace& space, Rng& rng) {
  TrialConfig c;
  c.arch = space.architectures[rng.Below(space.architectures.size())];
  c.mode = space.modes[rng.Below(space.modes.size())];
  c.opt = space.optimizers[rng.Below(space.optimizers.size())];
  const double log_lr =
      rng.Uniform(std::log(space.lr_min), std::log(space.lr_max));
  c.lr = std::clamp(std::exp(log_lr), space.lr_min, space.lr_max);
  c.batch_size = space.batch_sizes[rng.Below(space.batch_sizes.size())];
  return c;
}

// Per-dimension choice indices of a configuration.
struct Encoded {
  size_t arch, mode, opt, batch;
  double log_lr;
};

Encoded Encode(const SearchSpace& space, const TrialConfig& c) {
  return {IndexOf(space.architectures, c.arch), IndexOf(space.modes, c.mode),
          IndexOf(space.optimizers, c.opt),
          IndexOf(space.batch_sizes, c.batch_size), std::log(c.lr)};
}

// Good/bad densities over every dimension.
struct Densities {
  std::vector<double> arch, mode, opt, batch;
  ParzenEstimator lr;

  double LogPdf(const Encoded& e) const {
    return std::log(arch[e.arch]) + std::log(mode[e.mode]) +
           std::log(opt[e.opt]) + std::log(batch[e.batch]) + lr.LogPdf(e.log_lr);
  }

  Encoded Sample(Rng& rng) const {
    Encoded e;
    e.arch = rng.Categorical(arch);
    e.mode = rng.Categorical(mode);
    e.opt = rng.Categorical(opt);
    e.batch = rng.Categorical(batch);
    e.log_lr = lr.Sample(rng);
    return e;
  }
};

Densities Fit(const SearchSpace& space, const std::vector<Encoded>& obs,
              double pseudocount, double prior_weight) {
  std::vector<size_t> arch, mode, opt, batch;
  std::vector<double> lr;
  for (const Encoded& e : obs) {
    arch.push_back(e.arch);
    mode.push_back(e.mode);
    opt.push_back(e.opt);
    batch.push_back(e.batch);
    lr.push_back(e.log_lr);
  }
  return {CategoricalDensity(arch, space.architectures.size(), pseudocount),
          CategoricalDensity(mode, space.modes.size(), pseudocount),
          CategoricalDensity(opt, space.optimizers.size(), pseudocount),
          CategoricalDensity(batch, space.batch_sizes.size(), pseudocount),
          ParzenEstimator(lr, std::log(space.lr_min), std::log(space.lr_max),
                          prior_weight)};
}

}  // namespace

uint64_t TrialSeed(uint64_t study_seed, int64_t trial_id) {
  return DeriveSeed({study_seed, static_cast<uint64_t>(trial_id), kTrainTag});
}

ParzenEstimator::ParzenEstimator(std::span<const double> observations,
                                 double low, double high, double prior_weight)
    : low_(low), high_(high) {
  const double range = high - low;
  // Components sorted by location; the prior sits at the midpoint.
  std::vector<std::pair<double, bool>> comps;  // (mu, is_prior)
  for (double x : observations) comps.push_back({std::clamp(x, low, high), false});
  comps.push_back({0.5 * (low + high), true});
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const double n = static_cast<double>(observations.size());
  const double min_sigma = range / std::min(100.0, 1.0 + n);
  for (size_t i = 0; i < comps.size(); ++i) {
    const double mu = comps[i].first;
    double sigma;
    if (comps[i].second) {
      sigma = range;
    } else {
      const double left = i == 0 ? low : comps[i - 1].first;
      const double right = i + 1 == comps.size() ? high : comps[i + 1].first;
      sigma = std::clamp(std::max(mu - left, right - mu), min_sigma, range);
    }
    mus_.push_back(mu);
    sigmas_.push_back(sigma);
    weights_.push_back(comps[i].second ? prior_weight : 1.0);
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (double& w : weights_) w /= total;
}

double ParzenEstimator::LogPdf(double x) const {
  double p = 0.0;
  for (size_t i = 0; i < mus_.size(); ++i) {
    const double s = sigmas_[i];
    const double z = (x - mus_[i]) / s;
    const double mass =
        NormalCdf((high_ - mus_[i]) / s) - NormalCdf((low_ - mus_[i]) / s);
    p += weights_[i] * std::exp(-0.5 * z * z) /
         (s * std::sqrt(2.0 * M_PI) * std::max(mass, 1e-12));
  }
  return std::log(std::max(p, 1e-300));
}

double ParzenEstimator::Sample(Rng& rng) const {
  const size_t k = rng.Categorical(weights_);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double x = rng.Normal(mus_[k], sigmas_[k]);
    if (x >= low_ && x <= high_) return x;
  }
  return std::clamp(mus_[k], low_, high_);
}

TrialConfig SampleConfig(const SearchSpace& space,
                         std::span<const StudyEntry> history,
                         SamplerKind sampler, int64_t trial_id,
                         uint64_t study_seed,
                         const AdaptiveSamplerOptions& options) {
  space.Validate();
  Rng rng(DeriveSeed({study_seed, static_cast<uint64_t>(trial_id), kSampleTag}));
  TrialConfig config;
  if (sampler == SamplerKind::kRandom ||
      static_cast<int>(history.size()) < options.startup_trials) {
    config = RandomDraw(space, rng);
  } else {
    // Rank history by objective (ties: earlier trial first) and split.
    std::vector<const StudyEntry*> ranked;
    for (const StudyEntry& e : history) {
      if (Contains(space, e.config)) ranked.push_back(&e);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const StudyEntry* a, const StudyEntry* b) {
                       if (a->result.objective != b->result.objective) {
                         return a->result.objective > b->result.objective;
                       }
                       return a->config.trial_id < b->config.trial_id;
                     });
    if (ranked.size() < 2) {
      config = RandomDraw(space, rng);
    } else {
      size_t n_good = static_cast<size_t>(
          std::ceil(options.good_fraction * static_cast<double>(ranked.size())));
      n_good = std::clamp<size_t>(n_good, 1, ranked.size() - 1);
      std::vector<Encoded> good, bad;
      for (size_t i = 0; i < ranked.size(); ++i) {
        (i < n_good ? good : bad).push_back(Encode(space, ranked[i]->config));
      }
      const Densities l = Fit(space, good, options.pseudocount, options.prior_weight);
      const Densities g = Fit(space, bad, options.pseudocount, options.prior_weight);
      const Densities proposal = Fit(space, good, options.proposal_pseudocount,
                                     options.proposal_pseudocount);
      Encoded best{};
      double best_score = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < options.candidates; ++i) {
        const Encoded cand = proposal.Sample(rng);
        const double score = l.LogPdf(cand) - g.LogPdf(cand);
        if (score > best_score) {
          best_score = score;
          best = cand;
        }
      }
      config.arch = space.architectures[best.arch];
      config.mode = space.modes[best.mode];
      config.opt = space.optimizers[best.opt];
      config.batch_size = space.batch_sizes[best.batch];
      config.lr = std::clamp(std::exp(best.log_lr), space.lr_min, space.lr_max);
    }
  }
  config.trial_id = trial_id;
  config.seed = TrialSeed(study_seed, trial_id);
  return config;
}

}  // namespace weldx::search
