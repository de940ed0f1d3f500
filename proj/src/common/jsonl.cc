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

#include "weldx/common/jsonl.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "weldx/common/error.h"

namespace weldx {

namespace fs = std::filesystem;

std::vector<Json> ReadJsonLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<Json> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed JSON line (" + e.what() + ")");
    }
  }
  return out;
}

void WriteFileBytes(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace '" + path.string() + "': " + ec.message());
}

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteJsonLines(const fs::path& path, const std::vector<Json>& lines) {
  std::string buf;
  for (const Json& j : lines) {
    buf += j.dump();
    buf += '\n';
  }
  WriteFileBytes(path, buf);
}

void AppendJsonLine(const fs::path& path, const Json& line) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  // C stdio so that fflush reaches the OS before we report the trial logged.
  FILE* f = std::fopen(path.c_str(), "ab");
  if (f == nullptr) throw IoError("cannot append to '" + path.string() + "'");
  const std::string text = line.dump() + "\n";
  const size_t written = std::fwrite(text.data(), 1, text.size(), f);
  const bool ok = written == text.size() && std::fflush(f) == 0;
  std::fclose(f);
  if (!ok) throw IoError("short write to '" + path.string() + "'");
}

Json ReadJsonFile(const fs::path& path) {
  const std::string text = ReadFileBytes(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

void WriteJsonFile(const fs::path& path, const Json& value) {
  WriteFileBytes(path, value.dump(2) + "\n");
}

std::string FormatTimestamp(int64_t unix_millis) {
  const int64_t secs = unix_millis >= 0 ? unix_millis / 1000
                                        : (unix_millis - 999) / 1000;
  const int millis = static_cast<int>(unix_millis - secs * 1000);
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, millis);
  return buf;
}

int64_t ParseTimestamp(const std::string& text) {
  int year, mon, day, hour, min, sec, millis = 0;
  char tail[8] = {0};
  int consumed = 0;
  bool ok = false;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%1[Z]%n", &year,
                  &mon, &day, &hour, &min, &sec, &millis, tail,
                  &consumed) == 8) {
    ok = consumed == static_cast<int>(text.size());
  } else {
    millis = 0;
    consumed = 0;
    ok = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%1[Z]%n", &year,
                     &mon, &day, &hour, &min, &sec, tail, &consumed) == 7 &&
         consumed == static_cast<int>(text.size());
  }
  if (!ok || mon < 1 || mon > 12 || day < 1 || day > 31 || hour > 23 ||
      min > 59 || sec > 60) {
    throw ValidationError("malformed timestamp '" + text +
                          "' (expected YYYY-MM-DDTHH:MM:SS[.mmm]Z)");
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = mon - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = min;
  tm.tm_sec = sec;
  return static_cast<int64_t>(timegm(&tm)) * 1000 + millis;
}

int64_t NowMillis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
      .count();
}

}  // namespace weldx
