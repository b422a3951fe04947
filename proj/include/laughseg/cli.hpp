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

#ifndef LAUGHSEG_CLI_HPP_
#define LAUGHSEG_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "laughseg/config_file.hpp"
#include "laughseg/pipeline.hpp"

namespace laughseg::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Built-in values for every `segment` setting, as strings.
Settings default_segment_settings();

// Converts resolved settings to a pipeline config. Per-input stem and
// embedding paths are not resolved here. Throws kInvalidArgument on bad
// values.
PipelineConfig pipeline_config_from_settings(const Settings& settings);

}  // namespace laughseg::cli

#endif  // LAUGHSEG_CLI_HPP_
