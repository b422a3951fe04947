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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "laughseg/energy_segmenter.hpp"
#include "laughseg/error.hpp"

namespace laughseg {

std::string format_labels(std::span<const Event> events, const std::string& default_label) {
  std::string out;
  char buf[64];
  for (const Event& e : events) {
    std::snprintf(buf, sizeof(buf), "%.3f\t%.3f\t", e.start_s, e.end_s);
    out += buf;
    out += e.label.value_or(default_label);
    out += '\n';
  }
  return out;
}

std::vector<Event> parse_labels(const std::string& text) {
  std::vector<Event> events;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    // Audacity writes frequency rows starting with a backslash; skip them.
    if (line.front() == '\\') continue;
    const auto tab1 = line.find('\t');
    if (tab1 == std::string::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected tabs");
    }
    const auto tab2 = line.find('\t', tab1 + 1);
    Event e;
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, tab1);
      const std::string b = line.substr(tab1 + 1, tab2 == std::string::npos ? std::string::npos
                                                                            : tab2 - tab1 - 1);
      e.start_s = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      e.end_s = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": bad number");
    }
    if (!(e.end_s > e.start_s) || e.start_s < 0.0) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": need 0 <= start < end");
    }
    if (tab2 != std::string::npos) e.label = line.substr(tab2 + 1);
    events.push_back(std::move(e));
  }
  return events;
}

void write_labels(const std::filesystem::path& path, std::span<const Event> events,
                  const std::string& default_label) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << format_labels(events, default_label);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::vector<Event> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_labels(ss.str());
}

}  // namespace laughseg
