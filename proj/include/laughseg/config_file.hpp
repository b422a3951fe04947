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

#ifndef LAUGHSEG_CONFIG_FILE_HPP_
#define LAUGHSEG_CONFIG_FILE_HPP_

#include <filesystem>
#include <map>
#include <string>

namespace laughseg {

// Flat `key = value` settings. Keys mirror the long CLI flags without the
// leading dashes. Later sources override earlier ones.
using Settings = std::map<std::string, std::string>;

// Blank lines and lines starting with '#' are ignored; surrounding
// whitespace is trimmed. Throws kParseError on a line without '='.
Settings parse_settings(const std::string& text);
Settings load_settings(const std::filesystem::path& path);

void merge_settings(Settings& base, const Settings& overrides);

}  // namespace laughseg

#endif  // LAUGHSEG_CONFIG_FILE_HPP_
