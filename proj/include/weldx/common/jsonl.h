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

#ifndef WELDX_COMMON_JSONL_H_
#define WELDX_COMMON_JSONL_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace weldx {

// Field order of serialized artifacts must be byte-stable, so every writer
// uses the insertion-ordered variant.
using Json = nlohmann::ordered_json;

// Reads a line-delimited JSON file. Blank lines are ignored. Throws IoError
// when the file cannot be opened and ValidationError (with the line number)
// on a malformed line.
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);

// Replaces `path` atomically (write to a sibling temp file, then rename).
void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<Json>& lines);

// Appends one line and flushes it to the OS before returning.
void AppendJsonLine(const std::filesystem::path& path, const Json& line);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const Json& value);

// Reads a whole text or binary file; IoError on failure.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, const std::string& bytes);

// UTC timestamp helpers; format is "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string FormatTimestamp(int64_t unix_millis);
// Accepts the format above with or without the millisecond part.
// ValidationError on anything else.
int64_t ParseTimestamp(const std::string& text);
int64_t NowMillis();

}  // namespace weldx

#endif  // WELDX_COMMON_JSONL_H_
