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

#ifndef LAUGHSEG_AUDIO_IO_HPP_
#define LAUGHSEG_AUDIO_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace laughseg {

// Every pipeline stage after ingest runs at this rate.
inline constexpr int kCanonicalRate = 16000;

// Planar PCM in [-1, 1]. All channels have the same length.
struct AudioBuffer {
  int sample_rate = kCanonicalRate;
  std::vector<std::vector<float>> channels;

  static AudioBuffer mono(std::vector<float> samples, int sample_rate);

  std::size_t channel_count() const { return channels.size(); }
  std::size_t frame_count() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  double duration_seconds() const {
    return static_cast<double>(frame_count()) / sample_rate;
  }
  std::span<const float> channel(std::size_t c) const { return channels[c]; }

  // Throws kInvalidArgument on ragged channels, a non-positive rate, zero
  // channels, or non-finite samples.
  void validate() const;

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

enum class SampleFormat { kPcm16, kPcm24, kPcm32, kFloat32 };

// RIFF/WAVE decoding. Integer PCM is scaled by 1 / 2^(bits-1); float data is
// clamped to [-1, 1]. WAVE_FORMAT_EXTENSIBLE is accepted when its subformat is
// PCM or IEEE float.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);
AudioBuffer load_wav(const std::filesystem::path& path);

// Integer formats round(x * 2^(bits-1)) and saturate, so 16-bit data read by
// decode_wav re-encodes to the same bytes.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio,
                                     SampleFormat format = SampleFormat::kPcm16);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               SampleFormat format = SampleFormat::kPcm16);

// Kaiser-windowed sinc resampler: 64 taps per polyphase branch, cutoff at
// 0.95 of the lower Nyquist frequency. Output length is
// round(frames * target / source). Same-rate input is copied unchanged.
AudioBuffer resample(const AudioBuffer& audio, int target_rate);

namespace reference {
// Single-threaded resampler, bit-identical to the OpenMP path.
AudioBuffer resample(const AudioBuffer& audio, int target_rate);
}  // namespace reference

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace laughseg

#endif  // LAUGHSEG_AUDIO_IO_HPP_
