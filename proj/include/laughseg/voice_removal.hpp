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

#ifndef LAUGHSEG_VOICE_REMOVAL_HPP_
#define LAUGHSEG_VOICE_REMOVAL_HPP_

#include <filesystem>
#include <optional>
#include <string_view>

#include "laughseg/audio_io.hpp"

namespace laughseg {

enum class BackgroundMode { kChannelSubtraction, kExternalStem, kPassthrough };

std::string_view to_string(BackgroundMode mode);
// Accepts "sub", "stem", "pass" and the long names.
BackgroundMode parse_background_mode(std::string_view text);

struct BackgroundSource {
  BackgroundMode mode = BackgroundMode::kPassthrough;
  // Required iff mode == kExternalStem.
  std::optional<std::filesystem::path> stem_path;

  void validate() const;
};

// Stems whose duration differs from the main audio by more than this
// fraction are rejected; otherwise both are truncated to the shorter.
inline constexpr double kStemDurationTolerance = 0.01;

// Mono L - R, clamped to [-1, 1]. Speech mixed to the centre cancels.
AudioBuffer channel_subtract(const AudioBuffer& audio);

// Mono channel average; mono input is returned as is.
AudioBuffer downmix(const AudioBuffer& audio);

// Mono background at `rate`, whichever mode is selected.
AudioBuffer acquire_background(const AudioBuffer& audio, const BackgroundSource& source,
                               int rate = kCanonicalRate);

}  // namespace laughseg

#endif  // LAUGHSEG_VOICE_REMOVAL_HPP_
