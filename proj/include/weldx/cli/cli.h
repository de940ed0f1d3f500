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

#ifndef WELDX_CLI_CLI_H_
#define WELDX_CLI_CLI_H_

#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "weldx/cli/run_config.h"
#include "weldx/common/jsonl.h"

namespace weldx::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  // Bad flags, invalid config, unknown ids.
  kExitUsage = 2,
  // Study stopped by a signal; rerunning the same command resumes it.
  kExitInterrupted = 3,
};

// A fully resolved command: everything needed to run it again.
struct Invocation {
  // Space-separated subcommand path, e.g. "search run".
  std::string command;
  RunConfig config;
  // Command-specific inputs (paths, method, port, ...), flag name without
  // dashes -> value.
  Json args = Json::object();
  // Zeroes wall-clock fields so reruns produce byte-identical artifacts.
  bool fixed_clock = false;
};

struct CommandResult {
  // Printed on stdout.
  Json summary = Json::object();
  // Where run.json goes.
  std::filesystem::path output_dir;
};

// Runs one command. Throws weldx::Error subclasses.
CommandResult Execute(const Invocation& invocation, std::ostream& log);

// run.json contents for an invocation.
Json ProvenanceJson(const Invocation& invocation, double wall_time,
                    const std::string& status);
Invocation InvocationFromProvenance(const Json& j);

// {"error": {"kind", "message", "fields"}}.
Json ErrorJson(const std::exception& e);
int ExitCodeFor(const std::exception& e);

// Device named by WELDX_DEVICE ("cpu" when unset). ConfigError for a
// device this build cannot use.
std::string ResolveDevice();

// Entry point of the `weldx` tool.
int Main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace weldx::cli

#endif  // WELDX_CLI_CLI_H_
