/*
 * Copyright 2026 The LaughSeg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "laughseg/config_file.hpp"

#include <fstream>
#include <sstream>

#include "laughseg/error.hpp"

namespace laughseg {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Settings parse_settings(const std::string& text) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, "config line " + std::to_string(line_no) + ": missing '='");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kParseError, "config line " + std::to_string(line_no) + ": empty key");
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str());
}

void merge_settings(Settings& base, const Settings& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
}

}  // namespace laughseg
