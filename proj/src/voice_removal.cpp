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

#include "laughseg/voice_removal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {

std::string_view to_string(BackgroundMode mode) {
  switch (mode) {
    case BackgroundMode::kChannelSubtraction: return "channel_subtraction";
    case BackgroundMode::kExternalStem: return "external_stem";
    case BackgroundMode::kPassthrough: return "passthrough";
  }
  return "passthrough";
}

BackgroundMode parse_background_mode(std::string_view text) {
  if (text == "sub" || text == "channel_subtraction") return BackgroundMode::kChannelSubtraction;
  if (text == "stem" || text == "external_stem") return BackgroundMode::kExternalStem;
  if (text == "pass" || text == "passthrough") return BackgroundMode::kPassthrough;
  throw Error(ErrorCode::kInvalidArgument, "unknown background mode '" + std::string(text) + "'");
}

void BackgroundSource::validate() const {
  if (mode == BackgroundMode::kExternalStem && !stem_path) {
    throw Error(ErrorCode::kStemMissing, "external_stem mode needs a stem path");
  }
  if (mode != BackgroundMode::kExternalStem && stem_path) {
    throw Error(ErrorCode::kInvalidArgument,
                "stem path given but mode is " + std::string(to_string(mode)));
  }
}

AudioBuffer channel_subtract(const AudioBuffer& audio) {
  if (audio.channel_count() != 2) {
    throw Error(ErrorCode::kChannelCountMismatch,
                "channel subtraction needs 2 channels, got " +
                    std::to_string(audio.channel_count()));
  }
  const auto& left = audio.channels[0];
  const auto& right = audio.channels[1];
  std::vector<float> out(left.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(left[i] - right[i], -1.0f, 1.0f);
  }
  return AudioBuffer::mono(std::move(out), audio.sample_rate);
}

AudioBuffer downmix(const AudioBuffer& audio) {
  if (audio.channel_count() == 1) return audio;
  if (audio.channel_count() == 0) {
    throw Error(ErrorCode::kChannelCountMismatch, "audio has no channels");
  }
  const std::size_t frames = audio.frame_count();
  const double scale = 1.0 / static_cast<double>(audio.channel_count());
  std::vector<float> out(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (const auto& ch : audio.channels) acc += ch[i];
    out[i] = static_cast<float>(acc * scale);
  }
  return AudioBuffer::mono(std::move(out), audio.sample_rate);
}

namespace {

AudioBuffer load_stem(const AudioBuffer& audio, const std::filesystem::path& path, int rate) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kStemMissing, path.string());
  }
  AudioBuffer stem = resample(downmix(load_wav(path)), rate);
  const double main_s = audio.duration_seconds();
  const double stem_s = stem.duration_seconds();
  if (std::abs(stem_s - main_s) > kStemDurationTolerance * main_s) {
    throw Error(ErrorCode::kStemDurationMismatch,
                path.string() + ": stem " + std::to_string(stem_s) + " s vs audio " +
                    std::to_string(main_s) + " s");
  }
  const auto main_frames = static_cast<std::size_t>(
      std::llround(static_cast<double>(audio.frame_count()) * rate / audio.sample_rate));
  if (stem.frame_count() > main_frames) stem.channels[0].resize(main_frames);
  return stem;
}

}  // namespace

AudioBuffer acquire_background(const AudioBuffer& audio, const BackgroundSource& source,
                               int rate) {
  source.validate();
  switch (source.mode) {
    case BackgroundMode::kChannelSubtraction:
      return resample(channel_subtract(audio), rate);
    case BackgroundMode::kExternalStem:
      return load_stem(audio, *source.stem_path, rate);
    case BackgroundMode::kPassthrough:
      break;
  }
  return resample(downmix(audio), rate);
}

}  // namespace laughseg
