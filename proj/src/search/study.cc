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

#include "weldx/search/study.h"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

namespace weldx::search {

Clock SteadyClock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

TrialResult RunTrial(const TrialConfig& config, const TrialRunner& runner,
                     const Clock& clock) {
  TrialResult result;
  const double start = clock();
  try {
    result.report = runner(config);
    const double obj = result.report.best_val_accuracy;
    if (!std::isfinite(obj) || obj < 0.0 || obj > 1.0) {
      result.status = TrialStatus::kFailed;
      result.diagnostic = "objective outside [0, 1]";
    } else {
      result.objective = obj;
    }
  } catch (const Error& e) {
    result.status = TrialStatus::kFailed;
    result.diagnostic = std::string(e.kind()) + ": " + e.what();
  } catch (const std::exception& e) {
    result.status = TrialStatus::kFailed;
    result.diagnostic = e.what();
  }
  if (result.status == TrialStatus::kFailed) result.objective = 0.0;
  result.wall_time = clock() - start;
  return result;
}

StudyLog RunStudy(const SearchSpace& space, const TrialRunner& runner,
                  const StudyOptions& options) {
  space.Validate();
  if (options.n_trials < 1) throw ValidationError("n_trials must be >= 1");
  if (options.workers < 1) throw ValidationError("workers must be >= 1");

  StudyLog log;
  log.sampler = options.sampler;
  log.study_seed = options.study_seed;
  if (options.log_path && std::filesystem::exists(*options.log_path) &&
      std::filesystem::file_size(*options.log_path) > 0) {
    StudyLog previous = ReadStudyLog(*options.log_path);
    if (previous.study_seed != options.study_seed ||
        previous.sampler != options.sampler) {
      throw ConfigError("existing study log '" + options.log_path->string() +
                        "' was produced with a different seed or sampler");
    }
    if (static_cast<int>(previous.trials.size()) > options.n_trials) {
      throw ConfigError("existing study log already holds more than n_trials");
    }
    log.trials = std::move(previous.trials);
  }

  // Completed trials visible to the sampler (may run ahead of the log when
  // workers > 1).
  std::vector<StudyEntry> completed = log.trials;
  std::map<int64_t, StudyEntry> unflushed;
  int64_t next_id = log.trials.empty() ? 1 : log.trials.back().config.trial_id + 1;
  int64_t next_flush = next_id;
  const int64_t last_id = next_id + (options.n_trials - static_cast<int64_t>(log.trials.size())) - 1;

  std::mutex mu;
  std::condition_variable cv;
  int in_flight = 0;
  std::exception_ptr writer_error;

  auto flush_locked = [&] {
    while (!unflushed.empty() && unflushed.begin()->first == next_flush) {
      StudyEntry e = std::move(unflushed.begin()->second);
      unflushed.erase(unflushed.begin());
      if (options.log_path) {
        AppendJsonLine(*options.log_path, StudyLineToJson(log, e));
      }
      if (options.on_trial) options.on_trial(e);
      log.trials.push_back(std::move(e));
      ++next_flush;
    }
  };

  auto stop_requested = [&] {
    return options.stop != nullptr && options.stop->load();
  };

  std::vector<std::thread> threads;
  bool interrupted = false;
  while (next_id <= last_id) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return in_flight < options.workers; });
    if (writer_error) break;
    if (stop_requested()) {
      interrupted = true;
      break;
    }
    const TrialConfig config = SampleConfig(space, completed, options.sampler,
                                            next_id, options.study_seed,
                                            options.adaptive);
    ++next_id;
    if (options.workers == 1) {
      lock.unlock();
      TrialResult result = RunTrial(config, runner, options.clock);
      lock.lock();
      StudyEntry entry{config, std::move(result)};
      completed.push_back(entry);
      unflushed.emplace(config.trial_id, std::move(entry));
      flush_locked();
      continue;
    }
    ++in_flight;
    threads.emplace_back([&, config] {
      TrialResult result = RunTrial(config, runner, options.clock);
      std::lock_guard<std::mutex> guard(mu);
      StudyEntry entry{config, std::move(result)};
      completed.push_back(entry);
      unflushed.emplace(config.trial_id, std::move(entry));
      try {
        flush_locked();
      } catch (...) {
        if (!writer_error) writer_error = std::current_exception();
      }
      --in_flight;
      cv.notify_all();
    });
  }
  for (std::thread& t : threads) t.join();
  if (writer_error) std::rethrow_exception(writer_error);
  if (interrupted) {
    throw StudyInterrupted("study interrupted after " +
                           std::to_string(log.trials.size()) + " trials");
  }
  return log;
}

const StudyEntry& BestTrial(const StudyLog& log) {
  const StudyEntry* best = nullptr;
  for (const StudyEntry& e : log.trials) {
    if (e.result.status != TrialStatus::kCompleted) continue;
    if (best == nullptr || e.result.objective > best->result.objective ||
        (e.result.objective == best->result.objective &&
         e.config.trial_id < best->config.trial_id)) {
      best = &e;
    }
  }
  if (best == nullptr) throw NoResultError("no completed trial in the study log");
  return *best;
}

}  // namespace weldx::search
